//! Maximum bipartite matching by augmenting paths, with a König vertex cover
//! as an optimality certificate.

use std::collections::VecDeque;

/// A bipartite graph with `left` and `right` vertex counts and adjacency
/// lists from left to right. Adjacency order is the scan order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartite {
    pub left: usize,
    pub right: usize,
    pub adjacency: Vec<Vec<usize>>,
}

impl Bipartite {
    pub fn new(left: usize, right: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adjacency = vec![Vec::new(); left];
        for (u, v) in edges {
            assert!(u < left && v < right, "edge ({u}, {v}) out of range");
            adjacency[u].push(v);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Bipartite {
            left,
            right,
            adjacency,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }
}

/// Matched partner of every vertex on each side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteMatching {
    pub left_to_right: Vec<Option<usize>>,
    pub right_to_left: Vec<Option<usize>>,
}

impl BipartiteMatching {
    pub fn size(&self) -> usize {
        self.left_to_right.iter().flatten().count()
    }

    /// Matched pairs in increasing left order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.left_to_right
            .iter()
            .enumerate()
            .filter_map(|(u, v)| v.map(|v| (u, v)))
            .collect()
    }

    /// Every pair is an edge and the two partner tables agree.
    pub fn is_valid_for(&self, graph: &Bipartite) -> bool {
        self.left_to_right.len() == graph.left
            && self.right_to_left.len() == graph.right
            && self.left_to_right.iter().enumerate().all(|(u, v)| match v {
                Some(v) => graph.has_edge(u, *v) && self.right_to_left[*v] == Some(u),
                None => true,
            })
            && self.right_to_left.iter().enumerate().all(|(v, u)| match u {
                Some(u) => self.left_to_right[*u] == Some(v),
                None => true,
            })
    }
}

/// Greedy first-fit pass, then one augmenting-path search from each free
/// left vertex in index order.
pub fn maximum_matching(graph: &Bipartite) -> BipartiteMatching {
    let mut left_to_right = vec![None; graph.left];
    let mut right_to_left = vec![None; graph.right];

    for u in 0..graph.left {
        if let Some(&v) = graph.adjacency[u]
            .iter()
            .find(|&&v| right_to_left[v].is_none())
        {
            left_to_right[u] = Some(v);
            right_to_left[v] = Some(u);
        }
    }

    for u in 0..graph.left {
        if left_to_right[u].is_some() {
            continue;
        }
        let mut visited = vec![false; graph.right];
        augment(
            graph,
            u,
            &mut visited,
            &mut left_to_right,
            &mut right_to_left,
        );
    }

    BipartiteMatching {
        left_to_right,
        right_to_left,
    }
}

fn augment(
    graph: &Bipartite,
    u: usize,
    visited: &mut [bool],
    left_to_right: &mut [Option<usize>],
    right_to_left: &mut [Option<usize>],
) -> bool {
    for &v in &graph.adjacency[u] {
        if visited[v] {
            continue;
        }
        visited[v] = true;
        let free = match right_to_left[v] {
            None => true,
            Some(w) => augment(graph, w, visited, left_to_right, right_to_left),
        };
        if free {
            left_to_right[u] = Some(v);
            right_to_left[v] = Some(u);
            return true;
        }
    }
    false
}

/// A vertex cover of the same size as the matching (König's construction):
/// left vertices not reached by alternating paths from free left vertices,
/// plus right vertices that are reached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexCover {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl VertexCover {
    pub fn size(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn covers(&self, graph: &Bipartite) -> bool {
        let mut in_left = vec![false; graph.left];
        let mut in_right = vec![false; graph.right];
        self.left.iter().for_each(|&u| in_left[u] = true);
        self.right.iter().for_each(|&v| in_right[v] = true);
        (0..graph.left).all(|u| in_left[u] || graph.adjacency[u].iter().all(|&v| in_right[v]))
    }
}

/// Breadth-first alternating search, independent of the augmenting search
/// that produced `matching`. A valid cover with `size() == matching.size()`
/// proves the matching maximum.
pub fn konig_cover(graph: &Bipartite, matching: &BipartiteMatching) -> VertexCover {
    let mut seen_left = vec![false; graph.left];
    let mut seen_right = vec![false; graph.right];
    let mut queue: VecDeque<usize> = (0..graph.left)
        .filter(|&u| matching.left_to_right[u].is_none())
        .collect();
    for &u in &queue {
        seen_left[u] = true;
    }
    while let Some(u) = queue.pop_front() {
        for &v in &graph.adjacency[u] {
            if seen_right[v] || matching.left_to_right[u] == Some(v) {
                continue;
            }
            seen_right[v] = true;
            if let Some(w) = matching.right_to_left[v] {
                if !seen_left[w] {
                    seen_left[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    VertexCover {
        left: (0..graph.left).filter(|&u| !seen_left[u]).collect(),
        right: (0..graph.right).filter(|&v| seen_right[v]).collect(),
    }
}

/// True when no augmenting path exists.
pub fn is_maximum(graph: &Bipartite, matching: &BipartiteMatching) -> bool {
    let cover = konig_cover(graph, matching);
    cover.covers(graph) && cover.size() == matching.size()
}
