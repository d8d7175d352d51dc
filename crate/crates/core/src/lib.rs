//! Canonical short partizan games born by small days, the partial order on
//! them, and exact bounds on the size of the next day.

pub mod analysis;
pub mod bounds;
pub mod enumeration;
pub mod error;
pub mod fixtures;
pub mod game;
pub mod matching;
pub mod notation;
pub mod poset;
pub mod report;

pub use error::{Error, Result};
