//! Tree decompositions: validation, a min-fill heuristic, conversion to nice
//! form and the PACE `.td` text format.

mod heuristic;
mod nice;
mod pace;

use std::collections::BTreeSet;
use std::fmt;

use crate::instance::Instance;

pub use heuristic::{decomposition_from_order, heuristic_decomposition, min_degree_order, min_fill_order};
pub use nice::{make_nice, validate_nice, NiceNode, NiceTreeDecomposition, NodeKind};

/// Bags over 0-based vertex ids joined by tree edges between bag indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    /// Number of vertices of the decomposed graph.
    pub n: usize,
    /// Each bag sorted and free of duplicates.
    pub bags: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn new(n: usize, bags: Vec<Vec<usize>>, edges: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|b| b.into_iter().collect::<BTreeSet<_>>().into_iter().collect())
            .collect();
        TreeDecomposition { n, bags, edges }
    }

    /// Largest bag size minus one; `-1` for a decomposition without vertices.
    pub fn width(&self) -> i64 {
        self.bags.iter().map(|b| b.len() as i64).max().unwrap_or(0) - 1
    }

    pub fn max_bag_size(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub(crate) fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            if a < adj.len() && b < adj.len() {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        adj
    }

    /// True when the edges form a spanning tree over the bags.
    pub fn is_tree(&self) -> bool {
        let k = self.bags.len();
        if k == 0 {
            return self.edges.is_empty();
        }
        if self.edges.len() != k - 1 || self.edges.iter().any(|&(a, b)| a >= k || b >= k || a == b) {
            return false;
        }
        let seen = reach(&self.adjacency(), 0, |_| true);
        seen.iter().all(|&s| s)
    }
}

/// Vertices reachable from `start` through nodes accepted by `keep`.
pub(crate) fn reach(adj: &[Vec<usize>], start: usize, keep: impl Fn(usize) -> bool) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(a) = stack.pop() {
        for &b in &adj[a] {
            if !seen[b] && keep(b) {
                seen[b] = true;
                stack.push(b);
            }
        }
    }
    seen
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TdViolation {
    NotATree,
    VertexOutOfRange { bag: usize, vertex: usize },
    VertexUncovered(usize),
    EdgeUncovered(usize, usize),
    /// The bags containing the vertex do not form a connected subtree.
    Disconnected(usize),
    /// Nice-form rule broken at a node.
    Structure { node: usize, reason: String },
}

impl fmt::Display for TdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TdViolation::NotATree => write!(f, "bag graph is not a tree"),
            TdViolation::VertexOutOfRange { bag, vertex } => {
                write!(f, "bag {} holds unknown vertex {}", bag + 1, vertex + 1)
            }
            TdViolation::VertexUncovered(v) => write!(f, "vertex {} is in no bag", v + 1),
            TdViolation::EdgeUncovered(u, v) => {
                write!(f, "edge ({}, {}) is covered by no bag", u + 1, v + 1)
            }
            TdViolation::Disconnected(v) => {
                write!(f, "bags containing vertex {} are not connected", v + 1)
            }
            TdViolation::Structure { node, reason } => write!(f, "node {}: {reason}", node + 1),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TdReport {
    pub violations: Vec<TdViolation>,
}

impl TdReport {
    pub fn is_pass(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for TdReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_pass() {
            return writeln!(f, "PASS");
        }
        writeln!(f, "FAIL")?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

/// Checks vertex coverage, edge coverage, subtree connectivity and that the
/// bag graph is a tree.
pub fn validate_td(inst: &Instance, td: &TreeDecomposition) -> TdReport {
    let n = inst.n();
    let mut violations = Vec::new();
    if !td.is_tree() {
        violations.push(TdViolation::NotATree);
    }
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if v < n {
                holders[v].push(i);
            } else {
                violations.push(TdViolation::VertexOutOfRange { bag: i, vertex: v });
            }
        }
    }
    for (v, h) in holders.iter().enumerate() {
        if h.is_empty() {
            violations.push(TdViolation::VertexUncovered(v));
        }
    }
    for (u, v) in inst.edges() {
        let covered = holders[u]
            .iter()
            .any(|&i| td.bags[i].binary_search(&v).is_ok());
        if !covered {
            violations.push(TdViolation::EdgeUncovered(u, v));
        }
    }
    let adj = td.adjacency();
    for (v, h) in holders.iter().enumerate() {
        if h.len() < 2 {
            continue;
        }
        let seen = reach(&adj, h[0], |b| td.bags[b].binary_search(&v).is_ok());
        if h.iter().any(|&b| !seen[b]) {
            violations.push(TdViolation::Disconnected(v));
        }
    }
    TdReport { violations }
}
