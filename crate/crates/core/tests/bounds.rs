//! Bound values on the day-3 and day-4 counts.

use std::collections::BTreeMap;

use num_bigint::BigUint;

use daybound_core::analysis::{chain_division, stratify};
use daybound_core::bounds::{
    classical_lower, classical_upper, incomparability_table, middle_degree_profile, middle_lower,
    refined_upper, refined_upper_from_table, simple_upper, tail_product, BigCount, Prefix,
};
use daybound_core::enumeration::enumerate_day;
use daybound_core::fixtures::{parse_scientific, Fixtures};
use daybound_core::game::GameArena;
use daybound_core::report::{day4_report, fixture_arithmetic, verify_day3};

fn times_pow2(k: u64, e: u64) -> BigCount {
    BigCount::new(BigUint::from(k) << e)
}

#[test]
fn day3_middle_layer_counts() {
    let mut arena = GameArena::new();
    let set = enumerate_day(&mut arena, 3).unwrap();
    let s = stratify(set.poset());
    let expected: BTreeMap<usize, usize> = [(2, 9), (3, 25), (4, 33), (5, 14)].into();
    assert_eq!(
        middle_degree_profile(set.poset(), &s, 21)
            .unwrap()
            .histogram,
        expected
    );
    assert_eq!(
        middle_degree_profile(set.poset(), &s, 23)
            .unwrap()
            .histogram,
        expected
    );
    assert!(middle_degree_profile(set.poset(), &s, 20).is_err());

    let m = middle_lower(set.poset(), &s).unwrap();
    assert_eq!(m.middle_only, BigCount::pow2(86));
    assert_eq!(m.above.singles, times_pow2(252, 81));
    assert_eq!(m.below.singles, times_pow2(252, 81));
    assert_eq!(m.above.pairs_grouped, times_pow2(31191, 76));
    assert_eq!(m.grouped_total, times_pow2(39767, 77));
    assert!(m.grouped_total >= BigCount::pow2(92));
    assert_eq!(m.headline_log2, 94);
    assert!(m.above.pairs_grouped <= m.above.pairs_exact);
    assert!(m.below.pairs_grouped <= m.below.pairs_exact);
    assert!(m.grouped_bound <= m.exact_bound);
}

#[test]
fn day2_middle_layer_counts() {
    let mut arena = GameArena::new();
    let set = enumerate_day(&mut arena, 2).unwrap();
    let s = stratify(set.poset());
    let profile = middle_degree_profile(set.poset(), &s, 3).unwrap();
    assert_eq!(profile.histogram, [(2, 3)].into());
    let m = middle_lower(set.poset(), &s).unwrap();
    assert_eq!(m.above.singles, BigCount::from_u64(12));
    assert_eq!(m.above.pairs_exact, BigCount::from_u64(6));
    assert_eq!(m.exact_bound, BigCount::from_u64(208));
    assert!(m.above.pairs_grouped <= m.above.pairs_exact);
}

#[test]
fn grouped_pairs_equal_the_per_pair_sum() {
    let mut arena = GameArena::new();
    let set = enumerate_day(&mut arena, 3).unwrap();
    let s = stratify(set.poset());
    let p = middle_degree_profile(set.poset(), &s, 21).unwrap();
    let n = s.layer(22).len() as u64;
    let mut sum = BigUint::default();
    for a in 0..p.degrees.len() {
        for b in a + 1..p.degrees.len() {
            sum += BigUint::from(1u32) << (n - (p.degrees[a] + p.degrees[b]) as u64);
        }
    }
    assert_eq!(
        middle_lower(set.poset(), &s).unwrap().above.pairs_grouped,
        BigCount::new(sum)
    );
}

#[test]
fn published_table_arithmetic() {
    let f = Fixtures::builtin();
    let (mantissa, exponent) = simple_upper(&f.chain_lengths).scientific(5);
    assert_eq!((mantissa.as_str(), exponent), ("3.7979", 202));
    assert!(tail_product(&f.chain_lengths, 7) < parse_scientific("1.0e91").unwrap());
    let a = fixture_arithmetic(&f);
    assert!(a.bound < parse_scientific("4.0e184").unwrap());
}

#[test]
fn own_division_refined_bounds() {
    let mut arena = GameArena::new();
    let set = enumerate_day(&mut arena, 3).unwrap();
    let s = stratify(set.poset());
    let d = chain_division(set.poset(), &s).unwrap();
    let table = incomparability_table(set.poset(), &d);
    let lengths = d.lengths();
    for i in 0..lengths.len() {
        for j in i + 1..lengths.len() {
            assert!(table[i][j] <= lengths[j]);
        }
    }
    let simple = simple_upper(&lengths);
    let mut best = None;
    for k in 0..=lengths.len() {
        let r = refined_upper_from_table(&lengths, &table, Prefix::Fixed(k)).unwrap();
        assert!(r.bound <= simple, "prefix {k}");
        if best.as_ref().is_none_or(|b| &r.bound < b) {
            best = Some(r.bound);
        }
    }
    let auto = refined_upper(set.poset(), &d, Prefix::Auto).unwrap();
    assert_eq!(Some(auto.bound.clone()), best);
    assert!(auto.bound < simple);
    assert!(refined_upper(set.poset(), &d, Prefix::Fixed(87)).is_err());
}

#[test]
fn published_day2_division_bounds() {
    let mut arena = GameArena::new();
    let set = enumerate_day(&mut arena, 2).unwrap();
    let d = Fixtures::builtin().day2_division(&set).unwrap();
    let r = refined_upper(set.poset(), &d, Prefix::Fixed(4)).unwrap();
    assert_eq!(r.simple, BigCount::from_u64(921_600));
    assert_eq!(r.bound, BigCount::from_u64(451_584));
    let s: Vec<u64> = r
        .s_values
        .iter()
        .map(|v| v.to_string().parse().unwrap())
        .collect();
    assert_eq!(s, vec![576, 84, 10, 1]);
}

#[test]
fn classical_values() {
    let up = classical_upper(1474, 22).unwrap();
    let expected = BigUint::from(1474u32) + (BigUint::from(541u32) << 1430u32);
    assert_eq!(up.third.value(), &expected);
    assert!(up.third.log10() < 433.573);
    assert!(up.third < up.second && up.second < up.first);
    let low = classical_lower(1474, 22).unwrap();
    assert!(low.second > parse_scientific("3.0e12").unwrap());
    assert_eq!(
        low.second_floor_exponent.value(),
        &(BigUint::from(172u32) * ((BigUint::from(1u32) << 34u32) - 1u32))
    );
}

#[test]
fn day3_verification_sandwich() {
    let mut arena = GameArena::new();
    let v = verify_day3(&mut arena, &Fixtures::builtin()).unwrap();
    let get = |id: &str| v.report.value(id).unwrap().clone();
    assert_eq!(get("lower.width"), BigCount::from_u64(64));
    assert_eq!(get("lower.middle.exact"), BigCount::from_u64(208));
    assert_eq!(get("upper.fixture.simple"), BigCount::from_u64(921_600));
    assert_eq!(get("upper.fixture.refined"), BigCount::from_u64(451_584));
    assert_eq!(get("truth"), BigCount::from_u64(1474));
    v.report.check_sandwich().unwrap();
}

#[test]
fn day4_report_sandwich_and_headline() {
    let mut arena = GameArena::new();
    let day3 = enumerate_day(&mut arena, 3).unwrap();
    let r = day4_report(&day3, 22, None, Some(&Fixtures::builtin())).unwrap();
    r.report.check_sandwich().unwrap();
    assert_eq!(r.report.value("lower.width").unwrap(), &BigCount::pow2(88));
    assert_eq!(
        r.report.value("lower.headline").unwrap(),
        &BigCount::pow2(94)
    );
    assert!(BigCount::pow2(94).log10() > 28.2);
    for e in &r.report.entries {
        assert!((e.log10 - e.value.log10()).abs() < 1e-6, "{}", e.id);
    }
    assert!(day4_report(&enumerate_day(&mut arena, 2).unwrap(), 4, None, None).is_err());
}
