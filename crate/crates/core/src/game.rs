//! Interned game forms under normal play.
//!
//! Every form lives in a [`GameArena`] and is addressed by a [`GameId`]. The
//! arena stores raw forms as well as canonical ones; only ids returned by
//! [`GameArena::canonicalize`] (or by constructors built on it) are canonical,
//! and for those, id equality is game equality.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Opaque handle into a [`GameArena`]. Must only be used with the arena that
/// produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GameId(u32);

impl GameId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A pair of option sets. Both sides are kept sorted and deduplicated so that
/// structurally equal forms hash equally.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GameForm {
    left: Vec<GameId>,
    right: Vec<GameId>,
}

impl GameForm {
    pub fn new(
        left: impl IntoIterator<Item = GameId>,
        right: impl IntoIterator<Item = GameId>,
    ) -> Self {
        let mut left: Vec<GameId> = left.into_iter().collect();
        let mut right: Vec<GameId> = right.into_iter().collect();
        left.sort_unstable();
        left.dedup();
        right.sort_unstable();
        right.dedup();
        GameForm { left, right }
    }

    pub fn left(&self) -> &[GameId] {
        &self.left
    }

    pub fn right(&self) -> &[GameId] {
        &self.right
    }
}

/// Outcome of comparing two canonical games.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderRelation {
    Less,
    Greater,
    Equal,
    Incomparable,
}

impl OrderRelation {
    pub fn from_leq(leq: bool, geq: bool, identical: bool) -> Self {
        match (leq, geq) {
            _ if identical => OrderRelation::Equal,
            (true, false) => OrderRelation::Less,
            (false, true) => OrderRelation::Greater,
            (false, false) => OrderRelation::Incomparable,
            // Mutual ≤ between distinct canonical ids cannot happen; treat as
            // equal so callers relying on the relation stay total.
            (true, true) => OrderRelation::Equal,
        }
    }

    pub fn reverse(self) -> Self {
        match self {
            OrderRelation::Less => OrderRelation::Greater,
            OrderRelation::Greater => OrderRelation::Less,
            other => other,
        }
    }
}

impl fmt::Display for OrderRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OrderRelation::Less => "less",
            OrderRelation::Greater => "greater",
            OrderRelation::Equal => "equal",
            OrderRelation::Incomparable => "incomparable",
        };
        f.write_str(s)
    }
}

/// The four forms `{n | S}`, `{S | -n}`, `{n-1 | S}` and `{S | -(n-1)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtremeForms {
    pub top_left: GameId,
    pub top_right: GameId,
    pub sub_left: GameId,
    pub sub_right: GameId,
}

impl ExtremeForms {
    pub fn as_array(&self) -> [GameId; 4] {
        [self.top_left, self.top_right, self.sub_left, self.sub_right]
    }
}

#[derive(Debug, Default)]
pub struct GameArena {
    forms: Vec<GameForm>,
    birthdays: Vec<u32>,
    /// Canonical representative of each slot, once known.
    canonical: Vec<Option<GameId>>,
    index: HashMap<GameForm, GameId>,
    leq_cache: HashMap<u64, bool>,
    negations: HashMap<GameId, GameId>,
}

fn pair_key(g: GameId, h: GameId) -> u64 {
    (u64::from(g.0) << 32) | u64::from(h.0)
}

impl GameArena {
    pub fn new() -> Self {
        let mut arena = GameArena::default();
        let zero = arena.insert(GameForm::new([], []));
        arena.canonical[zero.index()] = Some(zero);
        arena
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn contains(&self, g: GameId) -> bool {
        g.index() < self.forms.len()
    }

    pub fn form(&self, g: GameId) -> &GameForm {
        &self.forms[g.index()]
    }

    pub fn left(&self, g: GameId) -> &[GameId] {
        &self.forms[g.index()].left
    }

    pub fn right(&self, g: GameId) -> &[GameId] {
        &self.forms[g.index()].right
    }

    /// Formal birthday of the stored form; for canonical ids this is the
    /// game's birthday.
    pub fn birthday(&self, g: GameId) -> u32 {
        self.birthdays[g.index()]
    }

    pub fn is_canonical(&self, g: GameId) -> bool {
        self.canonical[g.index()] == Some(g)
    }

    pub fn zero(&self) -> GameId {
        GameId(0)
    }

    fn insert(&mut self, form: GameForm) -> GameId {
        if let Some(&id) = self.index.get(&form) {
            return id;
        }
        let birthday = form
            .left
            .iter()
            .chain(&form.right)
            .map(|o| self.birthdays[o.index()] + 1)
            .max()
            .unwrap_or(0);
        let id = GameId(u32::try_from(self.forms.len()).expect("arena exceeds u32 slots"));
        self.forms.push(form.clone());
        self.birthdays.push(birthday);
        self.canonical.push(None);
        self.index.insert(form, id);
        id
    }

    /// Stores the exact form `{left | right}` without simplifying it.
    pub fn intern(
        &mut self,
        left: impl IntoIterator<Item = GameId>,
        right: impl IntoIterator<Item = GameId>,
    ) -> Result<GameId> {
        let form = GameForm::new(left, right);
        if let Some(bad) = form
            .left
            .iter()
            .chain(&form.right)
            .find(|g| !self.contains(**g))
        {
            return Err(Error::UnknownGame(*bad));
        }
        Ok(self.insert(form))
    }

    /// `g ≤ h` under the normal-play order: no left option of `g` is `≥ h`
    /// and no right option of `h` is `≤ g`. Works on raw forms too.
    pub fn leq(&mut self, g: GameId, h: GameId) -> bool {
        if g == h {
            return true;
        }
        let key = pair_key(g, h);
        if let Some(&known) = self.leq_cache.get(&key) {
            return known;
        }
        let mut result = true;
        for i in 0..self.forms[g.index()].left.len() {
            let gl = self.forms[g.index()].left[i];
            if self.leq(h, gl) {
                result = false;
                break;
            }
        }
        if result {
            for i in 0..self.forms[h.index()].right.len() {
                let hr = self.forms[h.index()].right[i];
                if self.leq(hr, g) {
                    result = false;
                    break;
                }
            }
        }
        self.leq_cache.insert(key, result);
        result
    }

    /// Relation between two canonical games.
    pub fn compare(&mut self, g: GameId, h: GameId) -> OrderRelation {
        if g == h {
            return OrderRelation::Equal;
        }
        let le = self.leq(g, h);
        let ge = self.leq(h, g);
        OrderRelation::from_leq(le, ge, false)
    }

    /// Value equality for arbitrary (possibly raw) forms.
    pub fn equal_value(&mut self, g: GameId, h: GameId) -> bool {
        self.leq(g, h) && self.leq(h, g)
    }

    pub fn negate(&mut self, g: GameId) -> GameId {
        if let Some(&n) = self.negations.get(&g) {
            return n;
        }
        let form = self.forms[g.index()].clone();
        let left: Vec<GameId> = form.right.iter().map(|&r| self.negate(r)).collect();
        let right: Vec<GameId> = form.left.iter().map(|&l| self.negate(l)).collect();
        let n = self.insert(GameForm::new(left, right));
        if self.is_canonical(g) {
            self.canonical[n.index()] = Some(n);
        }
        self.negations.insert(g, n);
        self.negations.insert(n, g);
        n
    }

    /// Canonical id equal in value to `g`.
    pub fn canonical_of(&mut self, g: GameId) -> GameId {
        if let Some(c) = self.canonical[g.index()] {
            return c;
        }
        let form = self.forms[g.index()].clone();
        let c = self.canonicalize(form.left, form.right);
        self.canonical[g.index()] = Some(c);
        c
    }

    /// Simplest form of `{left | right}`: dominated options are dropped and
    /// reversible options bypassed until neither applies. Left options are
    /// examined before right ones, each in id order, and dominated options are
    /// removed before every reversibility pass.
    pub fn canonicalize(
        &mut self,
        left: impl IntoIterator<Item = GameId>,
        right: impl IntoIterator<Item = GameId>,
    ) -> GameId {
        let left: Vec<GameId> = left.into_iter().collect();
        let right: Vec<GameId> = right.into_iter().collect();
        let mut left: Vec<GameId> = left.into_iter().map(|o| self.canonical_of(o)).collect();
        let mut right: Vec<GameId> = right.into_iter().map(|o| self.canonical_of(o)).collect();
        left.sort_unstable();
        left.dedup();
        right.sort_unstable();
        right.dedup();

        loop {
            self.remove_dominated(&mut left, true);
            self.remove_dominated(&mut right, false);
            let current = self.insert(GameForm::new(left.iter().copied(), right.iter().copied()));
            if self.canonical[current.index()] == Some(current) {
                return current;
            }

            if let Some((pos, replacement)) = self.find_reversible_left(&left, current) {
                left.remove(pos);
                left.extend(replacement);
                left.sort_unstable();
                left.dedup();
                continue;
            }
            if let Some((pos, replacement)) = self.find_reversible_right(&right, current) {
                right.remove(pos);
                right.extend(replacement);
                right.sort_unstable();
                right.dedup();
                continue;
            }
            self.canonical[current.index()] = Some(current);
            return current;
        }
    }

    fn remove_dominated(&mut self, options: &mut Vec<GameId>, left_side: bool) {
        if options.len() < 2 {
            return;
        }
        let snapshot = options.clone();
        let mut keep = Vec::with_capacity(snapshot.len());
        for &a in &snapshot {
            let dominated = snapshot.iter().any(|&b| {
                b != a
                    && if left_side {
                        self.leq(a, b)
                    } else {
                        self.leq(b, a)
                    }
            });
            if !dominated {
                keep.push(a);
            }
        }
        *options = keep;
    }

    // Left option `gl` reverses through `glr` when `glr ≤ g`.
    fn find_reversible_left(
        &mut self,
        left: &[GameId],
        current: GameId,
    ) -> Option<(usize, Vec<GameId>)> {
        for (pos, &gl) in left.iter().enumerate() {
            for i in 0..self.forms[gl.index()].right.len() {
                let glr = self.forms[gl.index()].right[i];
                if self.leq(glr, current) {
                    return Some((pos, self.forms[glr.index()].left.clone()));
                }
            }
        }
        None
    }

    // Right option `gr` reverses through `grl` when `grl ≥ g`.
    fn find_reversible_right(
        &mut self,
        right: &[GameId],
        current: GameId,
    ) -> Option<(usize, Vec<GameId>)> {
        for (pos, &gr) in right.iter().enumerate() {
            for i in 0..self.forms[gr.index()].left.len() {
                let grl = self.forms[gr.index()].left[i];
                if self.leq(current, grl) {
                    return Some((pos, self.forms[grl.index()].right.clone()));
                }
            }
        }
        None
    }

    /// True when `g` is stored exactly as its canonical form would be.
    pub fn audit_canonical(&mut self, g: GameId) -> bool {
        let form = self.forms[g.index()].clone();
        let c = self.canonicalize(form.left, form.right);
        c == g
    }

    /// Canonical integer `n`: `{n-1 |}` for positive, `{| n+1}` for negative.
    pub fn integer(&mut self, n: i64) -> GameId {
        let mut g = self.zero();
        for _ in 0..n.unsigned_abs() {
            let form = if n > 0 {
                GameForm::new([g], [])
            } else {
                GameForm::new([], [g])
            };
            g = self.insert(form);
            self.canonical[g.index()] = Some(g);
        }
        g
    }

    /// Builds `{n | S}`, `{S | -n}`, `{n-1 | S}` and `{S | -(n-1)}` for a
    /// nonempty antichain `S` of games born by day `n`, checking that each
    /// result is canonical with exactly the given options.
    pub fn build_extreme_forms(&mut self, n: u32, antichain: &[GameId]) -> Result<ExtremeForms> {
        if n <= 1 {
            return Err(Error::Domain(format!("extreme forms need n > 1, got {n}")));
        }
        if antichain.is_empty() {
            return Err(Error::Domain(
                "extreme forms need a nonempty antichain".into(),
            ));
        }
        for &s in antichain {
            if !self.contains(s) {
                return Err(Error::UnknownGame(s));
            }
            if !self.is_canonical(s) {
                return Err(Error::Domain(format!("{s:?} is not a canonical form")));
            }
            if self.birthday(s) > n {
                return Err(Error::Domain(format!(
                    "{s:?} has birthday {} > {n}",
                    self.birthday(s)
                )));
            }
        }
        for (i, &a) in antichain.iter().enumerate() {
            for &b in &antichain[i + 1..] {
                if a == b || self.compare(a, b) != OrderRelation::Incomparable {
                    return Err(Error::NotAntichain(format!("{a:?}"), format!("{b:?}")));
                }
            }
        }

        let n = i64::from(n);
        let top = self.integer(n);
        let sub = self.integer(n - 1);
        let neg_top = self.integer(-n);
        let neg_sub = self.integer(-(n - 1));
        let set: Vec<GameId> = antichain.to_vec();

        let build = |arena: &mut GameArena, left: Vec<GameId>, right: Vec<GameId>| {
            let expected = GameForm::new(left.iter().copied(), right.iter().copied());
            let g = arena.canonicalize(left, right);
            if arena.form(g) != &expected {
                return Err(Error::Invariant(format!(
                    "extreme form with options {expected:?} is not canonical"
                )));
            }
            Ok(g)
        };

        Ok(ExtremeForms {
            top_left: build(self, vec![top], set.clone())?,
            top_right: build(self, set.clone(), vec![neg_top])?,
            sub_left: build(self, vec![sub], set.clone())?,
            sub_right: build(self, set, vec![neg_sub])?,
        })
    }
}
