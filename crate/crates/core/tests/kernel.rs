//! Game-kernel and notation properties checked against the enumerated sets.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use daybound_core::enumeration::{antichains, enumerate_day, GameSet};
use daybound_core::game::{GameArena, GameId, OrderRelation};
use daybound_core::notation::{print, read_game};

fn days(upto: u32) -> (GameArena, Vec<GameSet>) {
    let mut arena = GameArena::new();
    let sets = (0..=upto)
        .map(|d| enumerate_day(&mut arena, d).unwrap())
        .collect();
    (arena, sets)
}

#[test]
fn order_axioms_on_day2_pairs_and_triples() {
    let (mut arena, sets) = days(2);
    let g: Vec<GameId> = sets[2].elements().to_vec();
    for &a in &g {
        assert!(arena.leq(a, a));
        for &b in &g {
            if a != b {
                assert!(
                    !(arena.leq(a, b) && arena.leq(b, a)),
                    "distinct canonical forms are equal"
                );
            }
            for &c in &g {
                if arena.leq(a, b) && arena.leq(b, c) {
                    assert!(arena.leq(a, c));
                }
            }
        }
    }
}

#[test]
fn arena_order_agrees_with_order_matrix_on_day3() {
    let (mut arena, sets) = days(3);
    let set = &sets[3];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    // Every pair touching the first 40 games plus a random sample elsewhere.
    let n = set.len();
    let mut pairs: Vec<(usize, usize)> =
        (0..40).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    pairs.extend((0..50_000).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))));
    for (i, j) in pairs {
        let (a, b) = (set.game(i), set.game(j));
        assert_eq!(
            arena.compare(a, b),
            set.relation(i, j),
            "{} vs {}",
            set.name(i),
            set.name(j)
        );
    }
}

#[test]
fn negation_reverses_the_order() {
    let (mut arena, sets) = days(3);
    let set = &sets[3];
    let neg = set.negation().unwrap();
    for i in 0..set.len() {
        assert_eq!(neg[neg[i]], i);
        assert_eq!(arena.negate(set.game(i)), set.game(neg[i]));
    }
    for i in (0..set.len()).step_by(7) {
        for j in 0..set.len() {
            assert_eq!(set.relation(i, j), set.relation(neg[i], neg[j]).reverse());
        }
    }
}

#[test]
fn games_are_bounded_by_their_birthday() {
    let (mut arena, sets) = days(3);
    for &g in sets[3].elements() {
        let b = i64::from(arena.birthday(g));
        let top = arena.integer(b);
        let bottom = arena.integer(-b);
        assert!(arena.leq(g, top) && arena.leq(bottom, g));
    }
}

#[test]
fn canonicalize_matches_brute_force_value_search() {
    let (mut arena, sets) = days(2);
    let day1: Vec<GameId> = sets[1].elements().to_vec();
    let day2: Vec<GameId> = sets[2].elements().to_vec();
    let subsets: Vec<Vec<GameId>> = (0u32..16)
        .filter(|m| m.count_ones() <= 3)
        .map(|m| {
            (0..4)
                .filter(|i| m >> i & 1 == 1)
                .map(|i| day1[i])
                .collect()
        })
        .collect();
    for left in &subsets {
        for right in &subsets {
            let raw = arena.intern(left.clone(), right.clone()).unwrap();
            let equal: Vec<GameId> = day2
                .iter()
                .copied()
                .filter(|&h| arena.equal_value(raw, h))
                .collect();
            assert_eq!(equal.len(), 1, "raw form {left:?} | {right:?}");
            assert_eq!(arena.canonicalize(left.clone(), right.clone()), equal[0]);
        }
    }
}

#[test]
fn canonicalize_is_idempotent_on_day3() {
    let (mut arena, sets) = days(3);
    for &g in sets[3].elements() {
        let form = arena.form(g).clone();
        assert_eq!(
            arena.canonicalize(form.left().to_vec(), form.right().to_vec()),
            g
        );
        assert!(arena.audit_canonical(g));
    }
}

#[test]
fn print_then_parse_round_trips_on_day3() {
    let (mut arena, sets) = days(3);
    let mut seen = HashSet::new();
    for &g in sets[3].elements() {
        let text = print(&arena, g);
        assert!(seen.insert(text.clone()), "duplicate name {text}");
        assert_eq!(read_game(&text, &mut arena).unwrap(), g, "{text}");
    }
}

#[test]
fn extreme_forms_of_random_antichains_are_day3_games() {
    let (mut arena, sets) = days(3);
    let day2 = &sets[2];
    let all: Vec<Vec<usize>> = antichains(day2.poset())
        .unwrap()
        .filter(|a| !a.is_empty())
        .collect();
    assert_eq!(all.len(), 97);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut images = std::collections::HashMap::new();
    for _ in 0..400 {
        let pick = all.choose(&mut rng).unwrap();
        let s: Vec<GameId> = pick.iter().map(|&i| day2.game(i)).collect();
        let forms = arena.build_extreme_forms(2, &s).unwrap();
        for g in forms.as_array() {
            assert!(arena.audit_canonical(g));
            assert!(
                sets[3].position(g).is_some(),
                "{} not in day 3",
                print(&arena, g)
            );
        }
        let previous = images.insert(forms.top_left, pick.clone());
        assert!(
            previous.is_none_or(|p| &p == pick),
            "S -> {{2|S}} is not injective"
        );
    }
}

#[test]
fn extreme_forms_reject_bad_input() {
    let (mut arena, sets) = days(2);
    let one = read_game("1", &mut arena).unwrap();
    let zero = arena.zero();
    assert!(arena.build_extreme_forms(2, &[zero, one]).is_err());
    assert!(arena.build_extreme_forms(1, &[zero]).is_err());
    assert!(arena.build_extreme_forms(2, &[]).is_err());
    let three = arena.integer(3);
    assert!(arena.build_extreme_forms(2, &[three]).is_err());
    assert!(arena.build_extreme_forms(2, &[sets[2].game(0)]).is_ok());
}

#[test]
fn named_relations() {
    let mut arena = GameArena::new();
    let mut rel = |a: &str, b: &str| {
        let g = read_game(a, &mut arena).unwrap();
        let h = read_game(b, &mut arena).unwrap();
        arena.compare(g, h)
    };
    assert_eq!(rel("*2", "^"), OrderRelation::Less);
    assert_eq!(rel("^", "+-1"), OrderRelation::Incomparable);
    assert_eq!(rel("*", "0"), OrderRelation::Incomparable);
    assert_eq!(rel("{0|*}", "^"), OrderRelation::Equal);
    assert_eq!(rel("1/2", "{0|1}"), OrderRelation::Equal);
    assert_eq!(rel("tiny(1)", "0"), OrderRelation::Greater);
    assert_eq!(rel("tiny(1)", "^"), OrderRelation::Less);
}

#[test]
fn random_expressions_canonicalize_into_day_sets() {
    let (mut arena, sets) = days(3);
    let day2 = &sets[2];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let mut pick = || -> Vec<GameId> {
            let k = rng.gen_range(0..4);
            (0..k)
                .map(|_| day2.game(rng.gen_range(0..day2.len())))
                .collect()
        };
        let (l, r) = (pick(), pick());
        let g = arena.canonicalize(l.clone(), r.clone());
        assert!(sets[3].position(g).is_some());
        let raw = arena.intern(l, r).unwrap();
        assert!(arena.equal_value(raw, g));
    }
}
