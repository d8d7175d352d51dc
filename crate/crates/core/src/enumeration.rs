//! Day-by-day generation of canonical forms and antichain utilities.

use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{GameArena, GameId, OrderRelation};
use crate::notation::{self, Printer};
use crate::poset::Poset;

pub const DEFAULT_DAY_CAP: u32 = 3;

/// Largest poset the antichain iterator and DFS counter accept.
pub const ANTICHAIN_DFS_LIMIT: usize = 40;

/// Largest poset the subset-scan counter accepts.
pub const ANTICHAIN_BRUTE_LIMIT: usize = 24;

const FILE_FORMAT: u32 = 1;

/// A set of canonical games in canonical order (birthday, then printed
/// text) together with its full order matrix.
#[derive(Debug, Clone)]
pub struct GameSet {
    day: u32,
    elements: Vec<GameId>,
    names: Vec<String>,
    birthdays: Vec<u32>,
    poset: Poset,
    negation: Option<Vec<usize>>,
    position: HashMap<GameId, usize>,
}

impl GameSet {
    /// Collects canonical games into a set. Every option of every member must
    /// itself be a member.
    pub fn from_games(
        arena: &mut GameArena,
        day: u32,
        games: impl IntoIterator<Item = GameId>,
    ) -> Result<GameSet> {
        let mut unique: Vec<GameId> = games
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        for &g in &unique {
            if !arena.contains(g) {
                return Err(Error::UnknownGame(g));
            }
            if !arena.is_canonical(g) {
                return Err(Error::Domain(format!("{g:?} is not a canonical form")));
            }
            if arena.birthday(g) > day {
                return Err(Error::Domain(format!(
                    "{} is born on day {}, after day {day}",
                    notation::print(arena, g),
                    arena.birthday(g)
                )));
            }
        }

        let mut keyed: Vec<(u32, String, GameId)> = {
            let mut printer = Printer::new(arena);
            unique
                .iter()
                .map(|&g| (arena.birthday(g), printer.print(g), g))
                .collect()
        };
        keyed.sort();
        unique = keyed.iter().map(|k| k.2).collect();
        let names: Vec<String> = keyed.iter().map(|k| k.1.clone()).collect();
        let birthdays: Vec<u32> = keyed.iter().map(|k| k.0).collect();
        let position: HashMap<GameId, usize> =
            unique.iter().enumerate().map(|(i, &g)| (g, i)).collect();

        let leq = order_matrix(arena, &unique, &birthdays, &position, &names)?;
        for i in 0..unique.len() {
            for j in leq[i].ones() {
                if i != j && leq[j].contains(i) {
                    return Err(Error::Invariant(format!(
                        "distinct canonical forms {} and {} are equal",
                        names[i], names[j]
                    )));
                }
            }
        }
        let poset = Poset::from_less(unique.len(), |i, j| leq[i].contains(j));

        let negation: Option<Vec<usize>> = unique
            .iter()
            .map(|&g| {
                let n = arena.negate(g);
                position.get(&n).copied()
            })
            .collect();

        Ok(GameSet {
            day,
            elements: unique,
            names,
            birthdays,
            poset,
            negation,
            position,
        })
    }

    pub fn day(&self) -> u32 {
        self.day
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[GameId] {
        &self.elements
    }

    pub fn game(&self, i: usize) -> GameId {
        self.elements[i]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn birthday(&self, i: usize) -> u32 {
        self.birthdays[i]
    }

    pub fn position(&self, g: GameId) -> Option<usize> {
        self.position.get(&g).copied()
    }

    /// Index of a game by its printed name.
    pub fn index_of_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn relation(&self, i: usize, j: usize) -> OrderRelation {
        self.poset.relation(i, j)
    }

    /// Index of `-g` for every element, when the set is closed under negation.
    pub fn negation(&self) -> Option<&[usize]> {
        self.negation.as_deref()
    }

    /// Serialized game-set file: a header line then one game per line.
    pub fn to_file_string(&self) -> String {
        let mut out = format!(
            "# day={} count={} format={FILE_FORMAT}\n",
            self.day,
            self.len()
        );
        for name in &self.names {
            out.push_str(name);
            out.push('\n');
        }
        out
    }

    pub fn from_file_str(text: &str, arena: &mut GameArena) -> Result<GameSet> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("empty file".into()))?;
        let (day, count) = parse_header(header)?;
        let mut games = Vec::with_capacity(count);
        for (n, line) in lines.enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let g = notation::read_game(line, arena)
                .map_err(|e| Error::Format(format!("line {}: {e}", n + 2)))?;
            games.push(g);
        }
        if games.len() != count {
            return Err(Error::Format(format!(
                "header declares {count} games, found {}",
                games.len()
            )));
        }
        let set = GameSet::from_games(arena, day, games)?;
        if set.len() != count {
            return Err(Error::Format(format!(
                "{} duplicate games in file",
                count - set.len()
            )));
        }
        Ok(set)
    }
}

fn parse_header(line: &str) -> Result<(u32, usize)> {
    let rest = line
        .strip_prefix('#')
        .ok_or_else(|| Error::Format(format!("bad header {line:?}")))?;
    let mut day = None;
    let mut count = None;
    let mut format = None;
    for field in rest.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| Error::Format(format!("bad header field {field:?}")))?;
        let bad = |_| Error::Format(format!("bad header value {field:?}"));
        match key {
            "day" => day = Some(value.parse::<u32>().map_err(bad)?),
            "count" => count = Some(value.parse::<usize>().map_err(bad)?),
            "format" => format = Some(value.parse::<u32>().map_err(bad)?),
            _ => return Err(Error::Format(format!("unknown header field {key:?}"))),
        }
    }
    if format != Some(FILE_FORMAT) {
        return Err(Error::Format(format!("unsupported format {format:?}")));
    }
    match (day, count) {
        (Some(d), Some(c)) => Ok((d, c)),
        _ => Err(Error::Format("header needs day= and count=".into())),
    }
}

// Computes `leq` rows by dynamic programming over birthday classes: the
// entry for (i, j) depends only on pairs whose birthday sum is smaller, so
// all pairs with one birthday sum can be filled in parallel.
fn order_matrix(
    arena: &GameArena,
    elements: &[GameId],
    birthdays: &[u32],
    position: &HashMap<GameId, usize>,
    names: &[String],
) -> Result<Vec<FixedBitSet>> {
    let n = elements.len();
    let local = |options: &[GameId], owner: usize| -> Result<Vec<usize>> {
        options
            .iter()
            .map(|o| {
                position.get(o).copied().ok_or_else(|| {
                    Error::Domain(format!(
                        "an option of {} is missing from the set",
                        names[owner]
                    ))
                })
            })
            .collect()
    };
    let mut lefts = Vec::with_capacity(n);
    let mut rights = Vec::with_capacity(n);
    for (i, &g) in elements.iter().enumerate() {
        lefts.push(local(arena.left(g), i)?);
        rights.push(local(arena.right(g), i)?);
    }

    let max_birthday = birthdays.iter().copied().max().unwrap_or(0) as usize;
    let mut groups = vec![Vec::new(); max_birthday + 1];
    for (i, &b) in birthdays.iter().enumerate() {
        groups[b as usize].push(i);
    }

    let mut leq = vec![FixedBitSet::with_capacity(n); n];
    for sum in 0..=2 * max_birthday {
        for bi in 0..=max_birthday.min(sum) {
            let bj = sum - bi;
            if bj > max_birthday {
                continue;
            }
            let rows: Vec<(usize, Vec<usize>)> = groups[bi]
                .par_iter()
                .map(|&i| {
                    let hits = groups[bj]
                        .iter()
                        .copied()
                        .filter(|&j| {
                            !lefts[i].iter().any(|&gl| leq[j].contains(gl))
                                && !rights[j].iter().any(|&hr| leq[hr].contains(i))
                        })
                        .collect();
                    (i, hits)
                })
                .collect();
            for (i, hits) in rows {
                for j in hits {
                    leq[i].insert(j);
                }
            }
        }
    }
    Ok(leq)
}

/// Builds day `n` with the default cap.
pub fn enumerate_day(arena: &mut GameArena, n: u32) -> Result<GameSet> {
    enumerate_day_capped(arena, n, DEFAULT_DAY_CAP)
}

/// Builds day `n` inductively: every pair of antichains of the previous day
/// (empty allowed) is canonicalized and the distinct results kept.
pub fn enumerate_day_capped(arena: &mut GameArena, n: u32, cap: u32) -> Result<GameSet> {
    if n > cap {
        return Err(Error::Infeasible { day: n, cap });
    }
    let zero = arena.zero();
    let mut set = GameSet::from_games(arena, 0, [zero])?;
    for day in 1..=n {
        let option_sets: Vec<Vec<GameId>> = antichains(set.poset())?
            .map(|a| a.into_iter().map(|i| set.game(i)).collect())
            .collect();
        let mut games = BTreeSet::new();
        for left in &option_sets {
            for right in &option_sets {
                games.insert(arena.canonicalize(left.iter().copied(), right.iter().copied()));
            }
        }
        set = GameSet::from_games(arena, day, games)?;
    }
    Ok(set)
}

/// Every antichain of a small poset, depth-first in lexicographic order of
/// element indices, starting with the empty set.
pub fn antichains(poset: &Poset) -> Result<AntichainIter<'_>> {
    AntichainIter::new(poset)
}

#[derive(Debug)]
pub struct AntichainIter<'a> {
    poset: &'a Poset,
    incomparable: Vec<FixedBitSet>,
    // (element chosen at this depth, candidates not yet tried below it)
    stack: Vec<(Option<usize>, FixedBitSet)>,
    started: bool,
}

impl<'a> AntichainIter<'a> {
    pub fn new(poset: &'a Poset) -> Result<Self> {
        if poset.len() > ANTICHAIN_DFS_LIMIT {
            return Err(Error::SizeGuard {
                what: "antichain iteration",
                size: poset.len(),
                limit: ANTICHAIN_DFS_LIMIT,
            });
        }
        let n = poset.len();
        let incomparable = (0..n)
            .map(|i| {
                let mut s = poset.comparable_set(i);
                s.toggle_range(..);
                s
            })
            .collect();
        let mut all = FixedBitSet::with_capacity(n);
        all.insert_range(..);
        Ok(AntichainIter {
            poset,
            incomparable,
            stack: vec![(None, all)],
            started: false,
        })
    }

    fn current(&self) -> Vec<usize> {
        self.stack.iter().filter_map(|(c, _)| *c).collect()
    }
}

impl Iterator for AntichainIter<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if !self.started {
            self.started = true;
            return Some(Vec::new());
        }
        loop {
            let (_, remaining) = self.stack.last_mut()?;
            match remaining.ones().next() {
                Some(c) => {
                    remaining.set(c, false);
                    let mut child = remaining.clone();
                    child.intersect_with(&self.incomparable[c]);
                    self.stack.push((Some(c), child));
                    debug_assert!(self.poset.is_antichain(&self.current()));
                    return Some(self.current());
                }
                None => {
                    self.stack.pop();
                }
            }
        }
    }
}

/// Number of antichains (empty included) by depth-first search.
pub fn count_antichains(poset: &Poset) -> Result<BigUint> {
    if poset.len() > ANTICHAIN_DFS_LIMIT {
        return Err(Error::SizeGuard {
            what: "antichain counting",
            size: poset.len(),
            limit: ANTICHAIN_DFS_LIMIT,
        });
    }
    let n = poset.len();
    let incomparable: Vec<FixedBitSet> = (0..n)
        .map(|i| {
            let mut s = poset.comparable_set(i);
            s.toggle_range(..);
            s
        })
        .collect();

    fn count(candidates: &FixedBitSet, incomparable: &[FixedBitSet]) -> u64 {
        let mut total = 1;
        let mut rest = candidates.clone();
        for c in candidates.ones() {
            rest.set(c, false);
            let mut child = rest.clone();
            child.intersect_with(&incomparable[c]);
            total += count(&child, incomparable);
        }
        total
    }

    let mut all = FixedBitSet::with_capacity(n);
    all.insert_range(..);
    Ok(BigUint::from(count(&all, &incomparable)))
}

/// Number of antichains by scanning every subset; the oracle for
/// [`count_antichains`].
pub fn count_antichains_brute_force(poset: &Poset) -> Result<BigUint> {
    let n = poset.len();
    if n > ANTICHAIN_BRUTE_LIMIT {
        return Err(Error::SizeGuard {
            what: "subset scan",
            size: n,
            limit: ANTICHAIN_BRUTE_LIMIT,
        });
    }
    let comparable: Vec<u32> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i && poset.comparable(i, j))
                .fold(0u32, |m, j| m | (1 << j))
        })
        .collect();
    let mut total = BigUint::zero();
    for mask in 0u32..(1u32 << n) {
        let ok = (0..n).all(|i| mask & (1 << i) == 0 || comparable[i] & mask == 0);
        if ok {
            total += BigUint::one();
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_days() {
        let mut arena = GameArena::new();
        assert_eq!(enumerate_day(&mut arena, 0).unwrap().len(), 1);
        let day1 = enumerate_day(&mut arena, 1).unwrap();
        assert_eq!(day1.names(), &["0", "*", "-1", "1"]);
        assert_eq!(enumerate_day(&mut arena, 2).unwrap().len(), 22);
    }

    #[test]
    fn day_four_is_refused() {
        let mut arena = GameArena::new();
        let err = enumerate_day(&mut arena, 4).unwrap_err();
        assert!(matches!(err, Error::Infeasible { day: 4, cap: 3 }));
        assert!(err.to_string().contains("2^94"));
    }

    #[test]
    fn antichains_of_a_chain() {
        let p = Poset::chain(2);
        let all: Vec<_> = antichains(&p).unwrap().collect();
        assert_eq!(all, vec![vec![], vec![0], vec![1]]);
        assert_eq!(
            count_antichains(&Poset::chain(3)).unwrap(),
            BigUint::from(4u32)
        );
    }

    #[test]
    fn antichains_of_an_antichain() {
        let p = Poset::antichain(5);
        assert_eq!(antichains(&p).unwrap().count(), 32);
        assert_eq!(count_antichains(&p).unwrap(), BigUint::from(32u32));
        assert_eq!(
            count_antichains_brute_force(&p).unwrap(),
            BigUint::from(32u32)
        );
    }

    #[test]
    fn lexicographic_order() {
        let p = Poset::antichain(3);
        let all: Vec<_> = antichains(&p).unwrap().collect();
        assert_eq!(
            all,
            vec![
                vec![],
                vec![0],
                vec![0, 1],
                vec![0, 1, 2],
                vec![0, 2],
                vec![1],
                vec![1, 2],
                vec![2]
            ]
        );
    }

    #[test]
    fn size_guards() {
        let p = Poset::antichain(ANTICHAIN_DFS_LIMIT + 1);
        assert!(matches!(antichains(&p), Err(Error::SizeGuard { .. })));
        assert!(matches!(count_antichains(&p), Err(Error::SizeGuard { .. })));
        let q = Poset::antichain(ANTICHAIN_BRUTE_LIMIT + 1);
        assert!(matches!(
            count_antichains_brute_force(&q),
            Err(Error::SizeGuard { .. })
        ));
    }

    #[test]
    fn file_round_trip() {
        let mut arena = GameArena::new();
        let day2 = enumerate_day(&mut arena, 2).unwrap();
        let text = day2.to_file_string();
        assert!(text.starts_with("# day=2 count=22 format=1\n"));
        let mut fresh = GameArena::new();
        let back = GameSet::from_file_str(&text, &mut fresh).unwrap();
        assert_eq!(back.names(), day2.names());
        assert_eq!(back.to_file_string(), text);
    }

    #[test]
    fn file_errors() {
        let mut arena = GameArena::new();
        assert!(matches!(
            GameSet::from_file_str("", &mut arena),
            Err(Error::Format(_))
        ));
        assert!(matches!(
            GameSet::from_file_str("# day=1 count=2 format=1\n0\n", &mut arena),
            Err(Error::Format(_))
        ));
        assert!(matches!(
            GameSet::from_file_str("# day=1 count=1 format=9\n0\n", &mut arena),
            Err(Error::Format(_))
        ));
        assert!(matches!(
            GameSet::from_file_str("# day=1 count=1 format=1\n{{\n", &mut arena),
            Err(Error::Format(_))
        ));
        // `1` needs its option 0 in the set
        assert!(matches!(
            GameSet::from_file_str("# day=1 count=1 format=1\n1\n", &mut arena),
            Err(Error::Domain(_))
        ));
    }
}
