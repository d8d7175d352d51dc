use thiserror::Error;

use crate::game::GameId;
use crate::notation::ParseError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown game id {0:?} (not allocated by this arena)")]
    UnknownGame(GameId),

    #[error("options are not an antichain: {0} and {1} are comparable")]
    NotAntichain(String, String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "day {day} exceeds the enumeration cap {cap}; the day-4 set has more than 2^94 elements"
    )]
    Infeasible { day: u32, cap: u32 },

    #[error("poset has {size} elements, more than the limit {limit} for {what}")]
    SizeGuard {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("malformed game-set file: {0}")]
    Format(String),

    #[error(
        "layer matching {layer} covers {matched} of the {needed} elements on its smaller side"
    )]
    Unsaturated {
        layer: usize,
        matched: usize,
        needed: usize,
    },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
