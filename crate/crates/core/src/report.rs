//! End-to-end bound reports: the day-3 check against the known count and the
//! day-4 bounds.

use serde::Serialize;

use crate::analysis::{chain_division, stratify, width_certificate, ChainDivision};
use crate::bounds::{
    classical_lower, classical_upper, middle_lower, refined_upper, refined_upper_from_table,
    simple_upper, tail_product, width_lower, BigCount, BoundEntry, BoundReport, Direction,
    MiddleLower, Prefix, RefinedUpper,
};
use crate::enumeration::{enumerate_day, GameSet};
use crate::error::{Error, Result};
use crate::fixtures::Fixtures;
use crate::game::GameArena;

/// Prefix length used with the published `S_i` bounds.
pub const FIXTURE_PREFIX: usize = 7;

fn classical_entries(report: &mut BoundReport, gn: usize, gn_prev: usize) -> Result<()> {
    let src = format!("classical formulas at ({gn}, {gn_prev})");
    let up = classical_upper(gn as u64, gn_prev as u64)?;
    let low = classical_lower(gn as u64, gn_prev as u64)?;
    for (id, value) in [
        ("classical.upper.1", up.first),
        ("classical.upper.2", up.second),
        ("classical.upper.3", up.third),
    ] {
        report.push(BoundEntry::new(id, Direction::Upper, value, &src));
    }
    for (id, value) in [
        ("classical.lower.1", low.first),
        ("classical.lower.2", low.second),
        ("classical.lower.1.floor_exponent", low.first_floor_exponent),
        (
            "classical.lower.2.floor_exponent",
            low.second_floor_exponent,
        ),
    ] {
        report.push(BoundEntry::new(id, Direction::Lower, value, &src));
    }
    Ok(())
}

/// Structural bounds computed from an enumerated set: width, middle layer,
/// and the chain products of `division`.
fn structural_entries(
    report: &mut BoundReport,
    set: &GameSet,
    division: &ChainDivision,
    label: &str,
) -> Result<(MiddleLower, RefinedUpper)> {
    let poset = set.poset();
    let strat = stratify(poset);
    let cert = width_certificate(poset, &strat, division)?;
    report.push(BoundEntry::new(
        "lower.width",
        Direction::Lower,
        width_lower(cert.width as u64),
        "width certificate",
    ));
    let middle = middle_lower(poset, &strat)?;
    report.push(BoundEntry::new(
        "lower.middle.exact",
        Direction::Lower,
        middle.exact_bound.clone(),
        "stratification, exact pair counts",
    ));
    report.push(BoundEntry::new(
        "lower.middle.grouped",
        Direction::Lower,
        middle.grouped_bound.clone(),
        "stratification, grouped pair counts",
    ));
    let refined = refined_upper(poset, division, Prefix::Auto)?;
    report.push(BoundEntry::new(
        &format!("upper.{label}.simple"),
        Direction::Upper,
        refined.simple.clone(),
        &format!("{label} chain division"),
    ));
    report.push(BoundEntry::new(
        &format!("upper.{label}.refined"),
        Direction::Upper,
        refined.bound.clone(),
        &format!("{label} chain division, prefix {}", refined.prefix),
    ));
    Ok((middle, refined))
}

#[derive(Debug, Clone, Serialize)]
pub struct Day3Verification {
    pub report: BoundReport,
    pub fixture_lengths: Vec<usize>,
    pub own_lengths: Vec<usize>,
    pub middle: MiddleLower,
}

/// Bounds on the day-3 count computed from day-2 data, next to the
/// enumerated count.
pub fn verify_day3(arena: &mut GameArena, fixtures: &Fixtures) -> Result<Day3Verification> {
    let day1 = enumerate_day(arena, 1)?;
    let day2 = enumerate_day(arena, 2)?;
    let day3 = enumerate_day(arena, 3)?;
    let mut report = BoundReport::new("day 3");

    let own = chain_division(day2.poset(), &stratify(day2.poset()))?;
    let (middle, _) = structural_entries(&mut report, &day2, &own, "own")?;

    let fixture = fixtures.day2_division(&day2)?;
    let table = crate::bounds::incomparability_table(day2.poset(), &fixture);
    let lengths = fixture.lengths();
    let full = refined_upper_from_table(&lengths, &table, Prefix::Fixed(lengths.len()))?;
    report.push(BoundEntry::new(
        "upper.fixture.simple",
        Direction::Upper,
        simple_upper(&lengths),
        "published day-2 chain division",
    ));
    report.push(BoundEntry::new(
        "upper.fixture.refined",
        Direction::Upper,
        full.bound,
        "published day-2 chain division, full prefix",
    ));
    classical_entries(&mut report, day2.len(), day1.len())?;
    report.push(BoundEntry::new(
        "truth",
        Direction::Exact,
        BigCount::from_u64(day3.len() as u64),
        "enumeration",
    ));
    report.check_sandwich()?;
    Ok(Day3Verification {
        report,
        fixture_lengths: lengths,
        own_lengths: own.lengths(),
        middle,
    })
}

/// Arithmetic on the published day-3 tables alone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixtureArithmetic {
    pub simple: BigCount,
    pub prefix: usize,
    pub tail_product: BigCount,
    pub s_upper_sum: BigCount,
    /// `(Σ S_i + tail)²` with the published `S_i` bounds.
    pub bound: BigCount,
}

pub fn fixture_arithmetic(fixtures: &Fixtures) -> FixtureArithmetic {
    let prefix = FIXTURE_PREFIX.min(fixtures.s_upper.len());
    let tail = tail_product(&fixtures.chain_lengths, prefix);
    let s_sum: num_bigint::BigUint = fixtures.s_upper[..prefix]
        .iter()
        .map(|s| s.value().clone())
        .sum();
    let root = &s_sum + tail.value();
    FixtureArithmetic {
        simple: simple_upper(&fixtures.chain_lengths),
        prefix,
        tail_product: tail,
        s_upper_sum: s_sum.into(),
        bound: (&root * &root).into(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Day4Report {
    pub report: BoundReport,
    pub headline: String,
    pub headline_lower_log2: u64,
    pub middle: MiddleLower,
    pub refined: RefinedUpper,
    pub fixture: Option<FixtureArithmetic>,
}

/// Bounds on the day-4 count from the enumerated day-3 set. `division`
/// defaults to the chain division through the middle layer.
pub fn day4_report(
    day3: &GameSet,
    day2_len: usize,
    division: Option<ChainDivision>,
    fixtures: Option<&Fixtures>,
) -> Result<Day4Report> {
    if day3.day() != 3 {
        return Err(Error::Domain(format!(
            "expected the day-3 set, got day {}",
            day3.day()
        )));
    }
    let mut report = BoundReport::new("day 4");
    classical_entries(&mut report, day3.len(), day2_len)?;
    let division = match division {
        Some(d) => d,
        None => chain_division(day3.poset(), &stratify(day3.poset()))?,
    };
    let (middle, refined) = structural_entries(&mut report, day3, &division, "own")?;
    let headline_lower = BigCount::pow2(middle.headline_log2);
    report.push(BoundEntry::new(
        "lower.headline",
        Direction::Lower,
        headline_lower.clone(),
        "largest power of two below the grouped middle-layer bound",
    ));

    let fixture = fixtures.map(fixture_arithmetic);
    if let Some(f) = &fixture {
        report.push(BoundEntry::new(
            "upper.fixture.simple",
            Direction::Upper,
            f.simple.clone(),
            "published chain lengths",
        ));
        report.push(BoundEntry::new(
            "upper.fixture.refined",
            Direction::Upper,
            f.bound.clone(),
            "published S_i bounds and chain lengths",
        ));
    }
    report.check_sandwich()?;

    let mut headline = format!(
        "lower: |G4| >= 2^{} = {} > 10^{:.2}",
        middle.headline_log2,
        headline_lower.to_scientific_string(4),
        headline_lower.log10(),
    );
    if let Some(f) = &fixture {
        headline.push_str(&format!(
            "; upper (published tables): |G4| < {}",
            f.bound.to_scientific_string(4)
        ));
    }
    headline.push_str(&format!(
        "; upper (this division, prefix {}): |G4| <= {}",
        refined.prefix,
        refined.bound.to_scientific_string(4)
    ));

    Ok(Day4Report {
        report,
        headline,
        headline_lower_log2: middle.headline_log2,
        middle,
        refined,
        fixture,
    })
}
