//! Exact lower and upper bounds on the number of games born on the next day.
//!
//! All bound values are arbitrary-precision integers; the `log10` fields
//! are summaries derived from them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::analysis::{ChainDivision, Stratification};
use crate::error::{Error, Result};
use crate::poset::Poset;

/// Exact nonnegative count.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BigCount(BigUint);

impl BigCount {
    pub fn new(value: BigUint) -> Self {
        BigCount(value)
    }

    pub fn from_u64(value: u64) -> Self {
        BigCount(BigUint::from(value))
    }

    pub fn pow2(exponent: u64) -> Self {
        BigCount(BigUint::one() << exponent)
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }

    /// `log10` of the value; `-inf` for zero.
    pub fn log10(&self) -> f64 {
        let bits = self.0.bits();
        if bits == 0 {
            return f64::NEG_INFINITY;
        }
        if bits <= 64 {
            return (self.0.to_u64().unwrap() as f64).log10();
        }
        let shift = bits - 64;
        let top = (&self.0 >> shift).to_u64().unwrap() as f64;
        top.log10() + shift as f64 * std::f64::consts::LOG10_2
    }

    /// Decimal scientific form with `digits` significant digits, rounded
    /// half up: `(mantissa, exponent)` such as `("3.7979", 202)`.
    pub fn scientific(&self, digits: usize) -> (String, usize) {
        let text = self.0.to_string();
        let exponent = text.len() - 1;
        let digits = digits.max(1);
        if text.len() <= digits {
            let mut mantissa = text.clone();
            if mantissa.len() > 1 {
                mantissa.insert(1, '.');
            }
            return (mantissa, exponent);
        }
        let head: BigUint = text[..digits].parse().unwrap();
        let round_up = text.as_bytes()[digits] >= b'5';
        let head = if round_up { head + 1u32 } else { head };
        let mut head = head.to_string();
        let mut exponent = exponent;
        if head.len() > digits {
            head.truncate(digits);
            exponent += 1;
        }
        if head.len() > 1 {
            head.insert(1, '.');
        }
        (head, exponent)
    }

    pub fn to_scientific_string(&self, digits: usize) -> String {
        let (m, e) = self.scientific(digits);
        format!("{m}e{e}")
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<BigUint> for BigCount {
    fn from(value: BigUint) -> Self {
        BigCount(value)
    }
}

impl Serialize for BigCount {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for BigCount {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse::<BigUint>()
            .map(BigCount)
            .map_err(serde::de::Error::custom)
    }
}

fn pow2(exponent: u64) -> BigUint {
    BigUint::one() << exponent
}

/// `log10` rounded to six decimals so reports serialize identically
/// everywhere.
pub fn rounded_log10(value: &BigCount) -> f64 {
    (value.log10() * 1e6).round() / 1e6
}

/// The three classical upper bounds on `|G_{n+1}|` from `|G_n|` and
/// `|G_{n-1}|`, from coarsest to finest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassicalUpper {
    /// `2^(g_n + 1) + g_n`
    pub first: BigCount,
    /// `g_n + 2^g_n + 2`
    pub second: BigCount,
    /// `g_n + (g_{n-1}^2 + 5/2 g_{n-1} + 2) 2^(g_n - 2 g_{n-1})`, rounded up
    pub third: BigCount,
}

pub fn classical_upper(gn: u64, gn_prev: u64) -> Result<ClassicalUpper> {
    if gn == 0 || gn_prev == 0 {
        return Err(Error::Domain("set sizes must be at least 1".into()));
    }
    let g = BigUint::from(gn);
    let first = pow2(gn + 1) + &g;
    let second = &g + pow2(gn) + 2u32;
    // (g^2 + 5g/2 + 2) 2^e = (2g^2 + 5g + 4) 2^(e-1)
    let coefficient = BigUint::from(2 * gn_prev * gn_prev + 5 * gn_prev + 4);
    let shift = i128::from(gn) - 2 * i128::from(gn_prev) - 1;
    let scaled = if shift >= 0 {
        coefficient << (shift as u64)
    } else {
        let divisor = pow2((-shift) as u64);
        (coefficient + &divisor - 1u32) / divisor
    };
    Ok(ClassicalUpper {
        first: first.into(),
        second: second.into(),
        third: (g + scaled).into(),
    })
}

/// The two classical lower bounds. The exponents are fractional in general;
/// the primary values take the integer part of the real power (exact integer
/// roots), and the `*_floor_exponent` values round the exponent down first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassicalLower {
    /// `⌊2^(g_n / (2 g_{n-1}))⌋`
    pub first: BigCount,
    /// `(8 g_{n-1} - 4)(⌊2^((g_n - 2) / (2 g_{n-1} - 1))⌋ - 1)`
    pub second: BigCount,
    pub first_floor_exponent: BigCount,
    pub second_floor_exponent: BigCount,
}

pub fn classical_lower(gn: u64, gn_prev: u64) -> Result<ClassicalLower> {
    if gn == 0 || gn_prev == 0 {
        return Err(Error::Domain("set sizes must be at least 1".into()));
    }
    let root_of_pow2 = |numerator: u64, denominator: u64| -> BigUint {
        let d = u32::try_from(denominator).expect("root degree fits in u32");
        pow2(numerator).nth_root(d)
    };
    let factor = BigUint::from(8 * gn_prev - 4);
    let minus_one = |x: BigUint| if x.is_zero() { x } else { x - 1u32 };

    let first = root_of_pow2(gn, 2 * gn_prev);
    let first_floor = pow2(gn / (2 * gn_prev));
    let (second, second_floor) = if gn >= 2 {
        let num = gn - 2;
        let den = 2 * gn_prev - 1;
        (
            &factor * minus_one(root_of_pow2(num, den)),
            &factor * minus_one(pow2(num / den)),
        )
    } else {
        (BigUint::zero(), BigUint::zero())
    };
    Ok(ClassicalLower {
        first: first.into(),
        second: second.into(),
        first_floor_exponent: first_floor.into(),
        second_floor_exponent: second_floor.into(),
    })
}

/// Four times the number of subsets of a width-`w` antichain.
pub fn width_lower(width: u64) -> BigCount {
    BigCount::pow2(width + 2)
}

/// For each element of a layer next to the middle one, how many middle-layer
/// elements it is comparable with; histogram of those counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    pub layer: usize,
    pub histogram: BTreeMap<usize, usize>,
    #[serde(skip)]
    pub degrees: Vec<usize>,
}

/// Elements of `layer` with how many middle-layer elements lie beyond them
/// (below for the layer above the middle, above for the layer below).
pub fn middle_degree_profile(
    poset: &Poset,
    strat: &Stratification,
    layer: usize,
) -> Result<DegreeProfile> {
    let middle = strat.middle();
    let above = layer + 1 == middle;
    let below = layer == middle + 1;
    if !above && !below {
        return Err(Error::Domain(format!(
            "layer {layer} is not adjacent to the middle layer {middle}"
        )));
    }
    let mid = strat.layer(middle);
    let mut degrees = Vec::new();
    let mut histogram = BTreeMap::new();
    for &u in strat.layer(layer) {
        let (toward, away) = if above {
            (poset.below(u), poset.above(u))
        } else {
            (poset.above(u), poset.below(u))
        };
        if mid.iter().any(|&v| away.contains(v)) {
            return Err(Error::Invariant(format!(
                "element {u} of layer {layer} is on the wrong side of a middle element"
            )));
        }
        let d = mid.iter().filter(|&&v| toward.contains(v)).count();
        degrees.push(d);
        *histogram.entry(d).or_insert(0) += 1;
    }
    Ok(DegreeProfile {
        layer,
        histogram,
        degrees,
    })
}

/// Antichain counts that combine one neighbouring layer with the middle one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NeighbourCounts {
    pub profile: DegreeProfile,
    /// Antichains with exactly one element from the neighbouring layer.
    pub singles: BigCount,
    /// Antichains with exactly two elements from the neighbouring layer.
    pub pairs_exact: BigCount,
    /// The pair count with overlaps ignored: `2^(N - d - d')` per pair,
    /// never more than `pairs_exact`.
    pub pairs_grouped: BigCount,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MiddleLower {
    pub middle_layer: usize,
    pub middle_size: usize,
    /// `2^N`: antichains inside the middle layer.
    pub middle_only: BigCount,
    pub above: NeighbourCounts,
    pub below: NeighbourCounts,
    /// `middle_only + singles + pairs_exact` over both sides.
    pub exact_total: BigCount,
    /// Same with the grouped pair counts.
    pub grouped_total: BigCount,
    /// Four times `exact_total`.
    pub exact_bound: BigCount,
    /// Four times `grouped_total`.
    pub grouped_bound: BigCount,
    /// Largest `k` with `2^k <= grouped_bound`.
    pub headline_log2: u64,
}

fn neighbour_counts(
    poset: &Poset,
    strat: &Stratification,
    layer: usize,
) -> Result<NeighbourCounts> {
    let profile = middle_degree_profile(poset, strat, layer)?;
    let mid = strat.layer(strat.middle());
    let n = mid.len() as u64;
    let members = strat.layer(layer);

    let comparable_mid: Vec<Vec<bool>> = members
        .iter()
        .map(|&u| mid.iter().map(|&v| poset.comparable(u, v)).collect())
        .collect();
    let free = |mask: &[bool]| mask.iter().filter(|c| !**c).count() as u64;

    let mut singles = BigUint::zero();
    for mask in &comparable_mid {
        singles += pow2(free(mask));
    }

    let mut pairs_exact = BigUint::zero();
    for a in 0..members.len() {
        for b in a + 1..members.len() {
            let union: Vec<bool> = comparable_mid[a]
                .iter()
                .zip(&comparable_mid[b])
                .map(|(x, y)| *x || *y)
                .collect();
            pairs_exact += pow2(free(&union));
        }
    }

    let mut pairs_grouped = BigUint::zero();
    let hist: Vec<(u64, u64)> = profile
        .histogram
        .iter()
        .map(|(&d, &c)| (d as u64, c as u64))
        .collect();
    let term = |d: u64, e: u64| n.checked_sub(d + e).map(pow2).unwrap_or_default();
    for (i, &(d, count)) in hist.iter().enumerate() {
        pairs_grouped += BigUint::from(count * count.saturating_sub(1) / 2) * term(d, d);
        for &(e, other) in &hist[i + 1..] {
            pairs_grouped += BigUint::from(count * other) * term(d, e);
        }
    }

    Ok(NeighbourCounts {
        profile,
        singles: singles.into(),
        pairs_exact: pairs_exact.into(),
        pairs_grouped: pairs_grouped.into(),
    })
}

/// Antichains drawn from the middle layer plus at most two elements of one
/// neighbouring layer, times four.
pub fn middle_lower(poset: &Poset, strat: &Stratification) -> Result<MiddleLower> {
    if !strat.has_unique_middle() {
        return Err(Error::Domain("the largest layer is not unique".into()));
    }
    let middle = strat.middle();
    if middle == 0 || middle + 1 >= strat.len() {
        return Err(Error::Domain(
            "the largest layer needs a neighbour on both sides".into(),
        ));
    }
    let middle_size = strat.layer(middle).len();
    let above = neighbour_counts(poset, strat, middle - 1)?;
    let below = neighbour_counts(poset, strat, middle + 1)?;
    let middle_only = pow2(middle_size as u64);

    let exact_total = &middle_only
        + above.singles.value()
        + below.singles.value()
        + above.pairs_exact.value()
        + below.pairs_exact.value();
    let grouped_total = &middle_only
        + above.singles.value()
        + below.singles.value()
        + above.pairs_grouped.value()
        + below.pairs_grouped.value();
    let exact_bound = &exact_total * 4u32;
    let grouped_bound = &grouped_total * 4u32;
    let headline_log2 = grouped_bound.bits() - 1;

    Ok(MiddleLower {
        middle_layer: middle,
        middle_size,
        middle_only: middle_only.into(),
        above,
        below,
        exact_total: exact_total.into(),
        grouped_total: grouped_total.into(),
        exact_bound: exact_bound.into(),
        grouped_bound: grouped_bound.into(),
        headline_log2,
    })
}

/// `(Π (|T_i| + 1))²`.
pub fn simple_upper(lengths: &[usize]) -> BigCount {
    let product: BigUint = lengths.iter().map(|&l| BigUint::from(l + 1)).product();
    (&product * &product).into()
}

/// `Π_{j >= from} (|T_j| + 1)`.
pub fn tail_product(lengths: &[usize], from: usize) -> BigCount {
    lengths[from.min(lengths.len())..]
        .iter()
        .map(|&l| BigUint::from(l + 1))
        .product::<BigUint>()
        .into()
}

/// `t[i][j]` for `j > i`: the most elements of chain `j` incomparable with a
/// single element of chain `i`. Entries with `j <= i` are zero.
pub fn incomparability_table(poset: &Poset, division: &ChainDivision) -> Vec<Vec<usize>> {
    let chains = division.chains();
    let w = chains.len();
    (0..w)
        .into_par_iter()
        .map(|i| {
            let mut row = vec![0; w];
            for (j, slot) in row.iter_mut().enumerate().skip(i + 1) {
                *slot = chains[i]
                    .iter()
                    .map(|&t| {
                        chains[j]
                            .iter()
                            .filter(|&&s| !poset.comparable(t, s))
                            .count()
                    })
                    .max()
                    .unwrap_or(0);
            }
            row
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prefix {
    /// Choose the prefix length giving the smallest bound.
    Auto,
    Fixed(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RefinedUpper {
    pub lengths: Vec<usize>,
    pub incomparability: Vec<Vec<usize>>,
    /// `S_i = |T_i| Π_{j>i} (t[i][j] + 1)`
    pub s_values: Vec<BigCount>,
    pub prefix: usize,
    pub tail_product: BigCount,
    /// `Σ_{i<prefix} S_i + tail_product`
    pub root: BigCount,
    pub bound: BigCount,
    pub simple: BigCount,
}

/// Refined bound `(Σ_{i<K} S_i + Π_{j>=K} (|T_j| + 1))²` from chain lengths
/// and an incomparability table.
pub fn refined_upper_from_table(
    lengths: &[usize],
    table: &[Vec<usize>],
    prefix: Prefix,
) -> Result<RefinedUpper> {
    let w = lengths.len();
    if table.len() != w || table.iter().any(|row| row.len() != w) {
        return Err(Error::Domain("incomparability table shape mismatch".into()));
    }
    let s_values: Vec<BigUint> = (0..w)
        .map(|i| {
            (i + 1..w)
                .map(|j| BigUint::from(table[i][j] + 1))
                .fold(BigUint::from(lengths[i]), |acc, x| acc * x)
        })
        .collect();

    let mut roots = Vec::with_capacity(w + 1);
    let mut prefix_sum = BigUint::zero();
    for k in 0..=w {
        roots.push(&prefix_sum + tail_product(lengths, k).value());
        if k < w {
            prefix_sum += &s_values[k];
        }
    }
    let k = match prefix {
        Prefix::Fixed(k) if k > w => {
            return Err(Error::Domain(format!("prefix {k} exceeds {w} chains")))
        }
        Prefix::Fixed(k) => k,
        Prefix::Auto => (0..=w).min_by_key(|&k| &roots[k]).unwrap_or(0),
    };
    let root = roots[k].clone();
    Ok(RefinedUpper {
        lengths: lengths.to_vec(),
        incomparability: table.to_vec(),
        s_values: s_values.into_iter().map(BigCount::from).collect(),
        prefix: k,
        tail_product: tail_product(lengths, k),
        bound: (&root * &root).into(),
        root: root.into(),
        simple: simple_upper(lengths),
    })
}

pub fn refined_upper(
    poset: &Poset,
    division: &ChainDivision,
    prefix: Prefix,
) -> Result<RefinedUpper> {
    division.validate(poset)?;
    let table = incomparability_table(poset, division);
    refined_upper_from_table(&division.lengths(), &table, prefix)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Lower,
    Upper,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundEntry {
    pub id: String,
    pub direction: Direction,
    pub value: BigCount,
    pub log10: f64,
    /// What the value was computed from.
    pub source: String,
}

impl BoundEntry {
    pub fn new(id: &str, direction: Direction, value: BigCount, source: &str) -> Self {
        BoundEntry {
            id: id.to_string(),
            direction,
            log10: rounded_log10(&value),
            value,
            source: source.to_string(),
        }
    }
}

/// A set of bound entries on one unknown count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub subject: String,
    pub entries: Vec<BoundEntry>,
}

impl BoundReport {
    pub fn new(subject: impl Into<String>) -> Self {
        BoundReport {
            subject: subject.into(),
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, entry: BoundEntry) {
        self.entries.push(entry);
    }

    pub fn get(&self, id: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn value(&self, id: &str) -> Option<&BigCount> {
        self.get(id).map(|e| &e.value)
    }

    /// Every lower bound and exact value is at most every upper bound, and
    /// every exact value is at least every lower bound.
    pub fn check_sandwich(&self) -> Result<()> {
        let of = |d: Direction| self.entries.iter().filter(move |e| e.direction == d);
        let floors = of(Direction::Lower).chain(of(Direction::Exact));
        for low in floors {
            for high in of(Direction::Upper).chain(of(Direction::Exact)) {
                if low.direction == Direction::Exact && high.direction == Direction::Exact {
                    continue;
                }
                if low.value > high.value {
                    return Err(Error::Invariant(format!(
                        "{} = {} exceeds {} = {}",
                        low.id, low.value, high.id, high.value
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log10_and_scientific() {
        assert_eq!(BigCount::from_u64(1000).log10(), 3.0);
        let big = BigCount::pow2(1000);
        assert!((big.log10() - 301.029995663981).abs() < 1e-9);
        assert_eq!(
            BigCount::from_u64(379_788).scientific(5),
            ("3.7979".into(), 5)
        );
        assert_eq!(BigCount::from_u64(99_999).scientific(2), ("1.0".into(), 5));
        assert_eq!(BigCount::from_u64(7).scientific(3), ("7".into(), 0));
        assert_eq!(BigCount::from_u64(0).log10(), f64::NEG_INFINITY);
    }

    #[test]
    fn classical_upper_small_inputs() {
        let b = classical_upper(1, 1).unwrap();
        assert_eq!(b.first, BigCount::from_u64(5));
        assert_eq!(b.second, BigCount::from_u64(5));
        // 1 + ⌈11/4⌉
        assert_eq!(b.third, BigCount::from_u64(4));
        let b = classical_upper(22, 4).unwrap();
        assert_eq!(b.third, BigCount::from_u64(22 + 28 * (1 << 14)));
        assert!(classical_upper(0, 1).is_err());
    }

    #[test]
    fn classical_lower_small_inputs() {
        let b = classical_lower(2, 1).unwrap();
        assert_eq!(b.first, BigCount::from_u64(2));
        assert_eq!(b.first_floor_exponent, BigCount::from_u64(2));
        let b = classical_lower(22, 4).unwrap();
        assert_eq!(b.first_floor_exponent, BigCount::from_u64(4));
        // 2^(22/8) = 6.727...
        assert_eq!(b.first, BigCount::from_u64(6));
        // 28 (2^(20/7) - 1) with 2^(20/7) = 7.26...
        assert_eq!(b.second, BigCount::from_u64(28 * 6));
        assert_eq!(b.second_floor_exponent, BigCount::from_u64(28 * 3));
    }

    #[test]
    fn width_lower_values() {
        assert_eq!(width_lower(0), BigCount::from_u64(4));
        assert_eq!(width_lower(4), BigCount::from_u64(64));
        assert_eq!(width_lower(86), BigCount::pow2(88));
    }

    #[test]
    fn simple_upper_values() {
        assert_eq!(simple_upper(&[9, 7, 5, 1]), BigCount::from_u64(921_600));
        assert_eq!(simple_upper(&[6]), BigCount::from_u64(49));
        assert_eq!(simple_upper(&[]), BigCount::from_u64(1));
    }

    #[test]
    fn refined_upper_prefixes() {
        let lengths = [3, 2];
        let table = vec![vec![0, 1], vec![0, 0]];
        let r = refined_upper_from_table(&lengths, &table, Prefix::Fixed(0)).unwrap();
        assert_eq!(r.bound, simple_upper(&lengths));
        // S = [3 * 2, 2]; K = 2 gives (6 + 2 + 1)^2
        let r = refined_upper_from_table(&lengths, &table, Prefix::Fixed(2)).unwrap();
        assert_eq!(r.bound, BigCount::from_u64(81));
        let auto = refined_upper_from_table(&lengths, &table, Prefix::Auto).unwrap();
        assert!(auto.bound <= r.bound);
        assert!(refined_upper_from_table(&lengths, &table, Prefix::Fixed(3)).is_err());
        let one = refined_upper_from_table(&[5], &[vec![0]], Prefix::Fixed(0)).unwrap();
        assert_eq!(one.bound, BigCount::from_u64(36));
    }

    #[test]
    fn sandwich_detects_crossing() {
        let mut r = BoundReport::new("test");
        r.push(BoundEntry::new(
            "lo",
            Direction::Lower,
            BigCount::from_u64(5),
            "t",
        ));
        r.push(BoundEntry::new(
            "truth",
            Direction::Exact,
            BigCount::from_u64(7),
            "t",
        ));
        r.push(BoundEntry::new(
            "hi",
            Direction::Upper,
            BigCount::from_u64(9),
            "t",
        ));
        assert!(r.check_sandwich().is_ok());
        r.push(BoundEntry::new(
            "bad",
            Direction::Upper,
            BigCount::from_u64(6),
            "t",
        ));
        assert!(r.check_sandwich().is_err());
    }
}
