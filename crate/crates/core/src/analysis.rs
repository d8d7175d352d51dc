//! Layering of a poset into successive maximal antichains, matchings between
//! neighbouring layers, and the chain division built from those matchings.
//!
//! Layer indices in this module are 0-based: layer 0 is the set of maximal
//! elements.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matching::{self, Bipartite, BipartiteMatching};
use crate::poset::Poset;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratification {
    layers: Vec<Vec<usize>>,
    layer_of: Vec<usize>,
}

impl Stratification {
    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    pub fn layer(&self, i: usize) -> &[usize] {
        &self.layers[i]
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn layer_of(&self, element: usize) -> usize {
        self.layer_of[element]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }

    /// Index of the largest layer; the smallest index wins ties.
    pub fn middle(&self) -> usize {
        let sizes = self.sizes();
        let max = sizes.iter().copied().max().unwrap_or(0);
        sizes.iter().position(|&s| s == max).unwrap_or(0)
    }

    /// Whether the largest layer is attained only once.
    pub fn has_unique_middle(&self) -> bool {
        let sizes = self.sizes();
        let max = sizes.iter().copied().max().unwrap_or(0);
        sizes.iter().filter(|&&s| s == max).count() == 1
    }
}

/// Repeatedly strips the maximal elements of what remains.
pub fn stratify(poset: &Poset) -> Stratification {
    let n = poset.len();
    let mut remaining: Vec<bool> = vec![true; n];
    // number of remaining elements strictly above each element
    let mut above_count: Vec<usize> = (0..n).map(|i| poset.above(i).count_ones(..)).collect();
    let mut layers = Vec::new();
    let mut layer_of = vec![0; n];
    let mut left = n;
    while left > 0 {
        let layer: Vec<usize> = (0..n)
            .filter(|&i| remaining[i] && above_count[i] == 0)
            .collect();
        debug_assert!(!layer.is_empty());
        for &i in &layer {
            remaining[i] = false;
            layer_of[i] = layers.len();
            for j in poset.below(i).ones() {
                above_count[j] -= 1;
            }
        }
        left -= layer.len();
        layers.push(layer);
    }
    Stratification { layers, layer_of }
}

/// `-u` lies in layer `m - 1 - i` for every `u` in layer `i`.
pub fn check_symmetry(strat: &Stratification, negation: &[usize]) -> bool {
    let m = strat.len();
    strat.layers().iter().enumerate().all(|(i, layer)| {
        layer
            .iter()
            .all(|&u| strat.layer_of(negation[u]) == m - 1 - i)
    })
}

/// Bipartite graph between layer `i` (left side) and layer `i + 1` (right
/// side) with an edge wherever the upper element is greater.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerGraph {
    pub layer: usize,
    pub upper: Vec<usize>,
    pub lower: Vec<usize>,
    pub graph: Bipartite,
}

pub fn layer_graph(poset: &Poset, strat: &Stratification, layer: usize) -> LayerGraph {
    let upper = strat.layer(layer).to_vec();
    let lower = strat.layer(layer + 1).to_vec();
    let edges = upper.iter().enumerate().flat_map(|(a, &u)| {
        lower
            .iter()
            .enumerate()
            .filter(move |&(_, &v)| poset.less(v, u))
            .map(move |(b, _)| (a, b))
    });
    let graph = Bipartite::new(upper.len(), lower.len(), edges);
    LayerGraph {
        layer,
        upper,
        lower,
        graph,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerMatching {
    pub graph: LayerGraph,
    pub matching: BipartiteMatching,
    /// A König cover of equal size was found.
    pub certified_maximum: bool,
}

impl LayerMatching {
    pub fn size(&self) -> usize {
        self.matching.size()
    }

    /// Matched (upper, lower) element pairs.
    pub fn element_pairs(&self) -> Vec<(usize, usize)> {
        self.matching
            .pairs()
            .into_iter()
            .map(|(a, b)| (self.graph.upper[a], self.graph.lower[b]))
            .collect()
    }

    pub fn smaller_side(&self) -> usize {
        self.graph.upper.len().min(self.graph.lower.len())
    }
}

/// Maximum matching between layers `layer` and `layer + 1`.
pub fn layer_matching(poset: &Poset, strat: &Stratification, layer: usize) -> LayerMatching {
    let graph = layer_graph(poset, strat, layer);
    let matching = matching::maximum_matching(&graph.graph);
    let certified_maximum =
        matching.is_valid_for(&graph.graph) && matching::is_maximum(&graph.graph, &matching);
    LayerMatching {
        graph,
        matching,
        certified_maximum,
    }
}

/// All `m - 1` neighbouring-layer matchings, computed in parallel.
pub fn all_layer_matchings(poset: &Poset, strat: &Stratification) -> Vec<LayerMatching> {
    (0..strat.len().saturating_sub(1))
        .into_par_iter()
        .map(|i| layer_matching(poset, strat, i))
        .collect()
}

/// A partition into chains, each listed from its greatest element down.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainDivision {
    chains: Vec<Vec<usize>>,
}

impl ChainDivision {
    pub fn new(chains: Vec<Vec<usize>>) -> Self {
        ChainDivision { chains }
    }

    pub fn chains(&self) -> &[Vec<usize>] {
        &self.chains
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.chains.iter().map(Vec::len).collect()
    }

    /// Chain index of every element.
    pub fn membership(&self, n: usize) -> Vec<Option<usize>> {
        let mut owner = vec![None; n];
        for (c, chain) in self.chains.iter().enumerate() {
            for &x in chain {
                owner[x] = Some(c);
            }
        }
        owner
    }

    /// Every element appears in exactly one chain and each chain strictly
    /// decreases.
    pub fn validate(&self, poset: &Poset) -> Result<()> {
        let mut seen = vec![false; poset.len()];
        for (c, chain) in self.chains.iter().enumerate() {
            if chain.is_empty() {
                return Err(Error::Invariant(format!("chain {c} is empty")));
            }
            for &x in chain {
                if x >= poset.len() || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::Invariant(format!(
                        "element {x} is out of range or in two chains"
                    )));
                }
            }
            if !poset.is_descending_chain(chain) {
                return Err(Error::Invariant(format!("chain {c} is not a chain")));
            }
        }
        if let Some(x) = seen.iter().position(|s| !s) {
            return Err(Error::Invariant(format!("element {x} is in no chain")));
        }
        Ok(())
    }
}

/// Chains through the largest layer: above it each layer is matched
/// entirely into the next one down, below it each layer is matched entirely
/// into the one above. Fails with [`Error::Unsaturated`] if a layer matching
/// does not cover the side it has to.
pub fn chain_division(poset: &Poset, strat: &Stratification) -> Result<ChainDivision> {
    let n = poset.len();
    if strat.is_empty() {
        return Ok(ChainDivision::new(Vec::new()));
    }
    let middle = strat.middle();
    let matchings = all_layer_matchings(poset, strat);

    let mut up: Vec<Option<usize>> = vec![None; n];
    let mut down: Vec<Option<usize>> = vec![None; n];
    for m in &matchings {
        let i = m.graph.layer;
        let needed = if i < middle {
            m.graph.upper.len()
        } else {
            m.graph.lower.len()
        };
        if m.size() != needed {
            return Err(Error::Unsaturated {
                layer: i,
                matched: m.size(),
                needed,
            });
        }
        for (u, v) in m.element_pairs() {
            if i < middle {
                up[v] = Some(u);
            } else {
                down[u] = Some(v);
            }
        }
    }

    let chains = strat
        .layer(middle)
        .iter()
        .map(|&x| {
            let mut chain = vec![x];
            let mut cur = x;
            while let Some(u) = up[cur] {
                chain.push(u);
                cur = u;
            }
            chain.reverse();
            cur = x;
            while let Some(v) = down[cur] {
                chain.push(v);
                cur = v;
            }
            chain
        })
        .collect();
    let division = ChainDivision::new(chains);
    division.validate(poset)?;
    Ok(division)
}

/// An antichain and a chain cover of equal size, which pins the width.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WidthCertificate {
    pub width: usize,
    pub antichain: Vec<usize>,
    pub cover: ChainDivision,
}

pub fn width_certificate(
    poset: &Poset,
    strat: &Stratification,
    division: &ChainDivision,
) -> Result<WidthCertificate> {
    division.validate(poset)?;
    let antichain = if strat.is_empty() {
        Vec::new()
    } else {
        strat.layer(strat.middle()).to_vec()
    };
    if !poset.is_antichain(&antichain) {
        return Err(Error::Invariant("middle layer is not an antichain".into()));
    }
    if antichain.len() != division.len() {
        return Err(Error::Invariant(format!(
            "antichain of size {} but cover of {} chains",
            antichain.len(),
            division.len()
        )));
    }
    Ok(WidthCertificate {
        width: antichain.len(),
        antichain,
        cover: division.clone(),
    })
}
