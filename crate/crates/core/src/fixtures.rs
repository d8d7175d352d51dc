//! Published reference data shipped with the repository under `fixtures/`.

use std::path::Path;

use num_bigint::BigUint;
use serde::Deserialize;

use crate::analysis::ChainDivision;
use crate::bounds::BigCount;
use crate::enumeration::GameSet;
use crate::error::{Error, Result};

const LAYER_SIZES: &str = include_str!("../../../fixtures/table1.json");
const CHAIN_LENGTHS: &str = include_str!("../../../fixtures/table2.json");
const S_UPPER: &str = include_str!("../../../fixtures/table3.json");
const DAY2_CHAINS: &str = include_str!("../../../fixtures/fig4_chains.json");

#[derive(Debug, Deserialize)]
struct Table1 {
    layer_sizes: Vec<usize>,
}

#[derive(Debug, Deserialize)]
struct Table2 {
    chain_lengths: Vec<usize>,
}

#[derive(Debug, Deserialize)]
struct Table3 {
    s_upper: Vec<String>,
}

#[derive(Debug, Deserialize)]
struct Day2Chains {
    chains: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixtures {
    /// Day-3 layer sizes, maximal layer first.
    pub layer_sizes: Vec<usize>,
    /// Day-3 chain lengths of the published division.
    pub chain_lengths: Vec<usize>,
    /// Published upper bounds on the leading `S_i`.
    pub s_upper: Vec<BigCount>,
    /// Day-2 chains by printed name, greatest first.
    pub day2_chains: Vec<Vec<String>>,
}

impl Fixtures {
    /// The copies compiled into the library.
    pub fn builtin() -> Self {
        Self::parse(LAYER_SIZES, CHAIN_LENGTHS, S_UPPER, DAY2_CHAINS)
            .expect("embedded fixtures are well formed")
    }

    /// Reads `table1.json`, `table2.json`, `table3.json` and
    /// `fig4_chains.json` from `dir`.
    pub fn load_dir(dir: &Path) -> Result<Self> {
        let read = |name: &str| std::fs::read_to_string(dir.join(name));
        Self::parse(
            &read("table1.json")?,
            &read("table2.json")?,
            &read("table3.json")?,
            &read("fig4_chains.json")?,
        )
    }

    fn parse(t1: &str, t2: &str, t3: &str, fig4: &str) -> Result<Self> {
        let t1: Table1 = serde_json::from_str(t1)?;
        let t2: Table2 = serde_json::from_str(t2)?;
        let t3: Table3 = serde_json::from_str(t3)?;
        let fig4: Day2Chains = serde_json::from_str(fig4)?;
        let s_upper = t3
            .s_upper
            .iter()
            .map(|s| parse_scientific(s))
            .collect::<Result<_>>()?;
        Ok(Fixtures {
            layer_sizes: t1.layer_sizes,
            chain_lengths: t2.chain_lengths,
            s_upper,
            day2_chains: fig4.chains,
        })
    }

    /// The day-2 chains resolved against an enumerated day-2 set.
    pub fn day2_division(&self, day2: &GameSet) -> Result<ChainDivision> {
        let chains = self
            .day2_chains
            .iter()
            .map(|chain| {
                chain
                    .iter()
                    .map(|name| {
                        day2.index_of_name(name).ok_or_else(|| {
                            Error::Format(format!("fixture game {name:?} is not in the set"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let division = ChainDivision::new(chains);
        division.validate(day2.poset())?;
        Ok(division)
    }
}

/// Exact value of a decimal literal such as `4.0e90` or `3e5`.
pub fn parse_scientific(text: &str) -> Result<BigCount> {
    let bad = || Error::Format(format!("not a decimal literal: {text:?}"));
    let (mantissa, exponent) = text.split_once(['e', 'E']).unwrap_or((text, "0"));
    let exponent: u32 = exponent.parse().map_err(|_| bad())?;
    let (whole, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let frac_len = frac.len() as u32;
    if exponent < frac_len {
        return Err(bad());
    }
    let digits: BigUint = format!("{whole}{frac}").parse().map_err(|_| bad())?;
    Ok(BigCount::new(
        digits * BigUint::from(10u32).pow(exponent - frac_len),
    ))
}
