//! Finite partial orders stored as dense comparability bitsets.

use fixedbitset::FixedBitSet;

use crate::game::OrderRelation;

/// A finite poset on `0..len()`. Row `i` of `below` holds every `j` with
/// `j < i` strictly; `above` is its transpose.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    below: Vec<FixedBitSet>,
    above: Vec<FixedBitSet>,
}

impl Poset {
    /// Builds a poset from a strict-order predicate `less(i, j)` meaning
    /// `i < j`. The predicate is trusted; see [`Poset::check_axioms`].
    pub fn from_less(n: usize, mut less: impl FnMut(usize, usize) -> bool) -> Self {
        let mut below = vec![FixedBitSet::with_capacity(n); n];
        let mut above = vec![FixedBitSet::with_capacity(n); n];
        for i in 0..n {
            for j in 0..n {
                if i != j && less(i, j) {
                    below[j].insert(i);
                    above[i].insert(j);
                }
            }
        }
        Poset { below, above }
    }

    /// `0 > 1 > ... > k-1`.
    pub fn chain(k: usize) -> Self {
        Poset::from_less(k, |i, j| i > j)
    }

    pub fn antichain(k: usize) -> Self {
        Poset::from_less(k, |_, _| false)
    }

    pub fn len(&self) -> usize {
        self.below.len()
    }

    pub fn is_empty(&self) -> bool {
        self.below.is_empty()
    }

    pub fn less(&self, i: usize, j: usize) -> bool {
        self.above[i].contains(j)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        i == j || self.less(i, j)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        i == j || self.less(i, j) || self.less(j, i)
    }

    pub fn relation(&self, i: usize, j: usize) -> OrderRelation {
        if i == j {
            OrderRelation::Equal
        } else if self.less(i, j) {
            OrderRelation::Less
        } else if self.less(j, i) {
            OrderRelation::Greater
        } else {
            OrderRelation::Incomparable
        }
    }

    /// Elements strictly below `i`.
    pub fn below(&self, i: usize) -> &FixedBitSet {
        &self.below[i]
    }

    /// Elements strictly above `i`.
    pub fn above(&self, i: usize) -> &FixedBitSet {
        &self.above[i]
    }

    /// Elements comparable with `i`, including `i` itself.
    pub fn comparable_set(&self, i: usize) -> FixedBitSet {
        let mut set = self.below[i].clone();
        set.union_with(&self.above[i]);
        set.insert(i);
        set
    }

    pub fn is_antichain(&self, items: &[usize]) -> bool {
        items
            .iter()
            .enumerate()
            .all(|(a, &i)| items[a + 1..].iter().all(|&j| !self.comparable(i, j)))
    }

    /// Consecutive elements strictly decreasing.
    pub fn is_descending_chain(&self, items: &[usize]) -> bool {
        items.windows(2).all(|w| self.less(w[1], w[0]))
    }

    /// The poset restricted to `items` (re-indexed in the given order).
    pub fn restrict(&self, items: &[usize]) -> Poset {
        Poset::from_less(items.len(), |a, b| self.less(items[a], items[b]))
    }

    /// Irreflexivity, antisymmetry and transitivity of the strict order.
    pub fn check_axioms(&self) -> Result<(), String> {
        let n = self.len();
        for i in 0..n {
            if self.less(i, i) {
                return Err(format!("{i} < {i}"));
            }
            for j in self.above[i].ones() {
                if self.less(j, i) {
                    return Err(format!("{i} < {j} and {j} < {i}"));
                }
                if !self.above[j].is_subset(&self.above[i]) {
                    return Err(format!("transitivity fails through {i} < {j}"));
                }
            }
        }
        Ok(())
    }
}
