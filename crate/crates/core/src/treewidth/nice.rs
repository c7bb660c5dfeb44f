use std::collections::VecDeque;

use super::{validate_td, TdReport, TdViolation, TreeDecomposition};
use crate::error::{Error, Result};
use crate::instance::Instance;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Leaf(usize),
    Introduce(usize),
    Forget(usize),
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NodeKind,
    /// Sorted.
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

/// Rooted nice decomposition. Children always precede their parent in
/// `nodes`, so a forward scan is a bottom-up traversal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    pub n: usize,
    pub nodes: Vec<NiceNode>,
    pub root: usize,
}

impl NiceTreeDecomposition {
    pub fn width(&self) -> i64 {
        self.nodes.iter().map(|t| t.bag.len() as i64).max().unwrap_or(0) - 1
    }

    /// The same bags and tree with types and root forgotten.
    pub fn project(&self) -> TreeDecomposition {
        let edges = self
            .nodes
            .iter()
            .enumerate()
            .flat_map(|(i, t)| t.children.iter().map(move |&c| (c, i)))
            .collect();
        TreeDecomposition {
            n: self.n,
            bags: self.nodes.iter().map(|t| t.bag.clone()).collect(),
            edges,
        }
    }
}

struct Builder {
    nodes: Vec<NiceNode>,
}

impl Builder {
    fn push(&mut self, kind: NodeKind, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { kind, bag, children });
        self.nodes.len() - 1
    }

    fn leaf_chain(&mut self, bag: &[usize]) -> usize {
        let mut top = self.push(NodeKind::Leaf(bag[0]), vec![bag[0]], vec![]);
        for i in 1..bag.len() {
            top = self.push(NodeKind::Introduce(bag[i]), bag[..=i].to_vec(), vec![top]);
        }
        top
    }

    /// Forgets `from \ to`, then introduces `to \ from`, both in id order.
    fn morph(&mut self, mut top: usize, from: &[usize], to: &[usize]) -> usize {
        let mut cur = from.to_vec();
        for &v in from {
            if to.binary_search(&v).is_err() {
                cur.retain(|&u| u != v);
                top = self.push(NodeKind::Forget(v), cur.clone(), vec![top]);
            }
        }
        for &v in to {
            if from.binary_search(&v).is_err() {
                let at = cur.binary_search(&v).unwrap_err();
                cur.insert(at, v);
                top = self.push(NodeKind::Introduce(v), cur.clone(), vec![top]);
            }
        }
        top
    }
}

/// Converts a decomposition to nice form of the same width.
///
/// The root is the bag holding the lowest vertex id. Tree edges become
/// forget-then-introduce chains, bags with several children get a binary
/// spine of join nodes, and a forget chain above the root empties its bag.
/// Empty bags without non-empty descendants are dropped.
pub fn make_nice(td: &TreeDecomposition) -> Result<NiceTreeDecomposition> {
    if !td.is_tree() {
        return Err(Error::InvalidDecomposition("bag graph is not a tree".into()));
    }
    if td.bags.iter().all(Vec::is_empty) {
        return Err(Error::InvalidDecomposition("no bag holds a vertex".into()));
    }
    let root_bag = (0..td.bags.len())
        .filter(|&i| !td.bags[i].is_empty())
        .min_by_key(|&i| (td.bags[i][0], i))
        .expect("some bag is non-empty");

    let adj = td.adjacency();
    let mut parent = vec![usize::MAX; td.bags.len()];
    let mut order = Vec::with_capacity(td.bags.len());
    let mut queue = VecDeque::from([root_bag]);
    parent[root_bag] = root_bag;
    while let Some(b) = queue.pop_front() {
        order.push(b);
        for &c in &adj[b] {
            if parent[c] == usize::MAX {
                parent[c] = b;
                queue.push_back(c);
            }
        }
    }

    let mut builder = Builder { nodes: Vec::new() };
    // node whose bag equals bag b, once b's subtree is built
    let mut built: Vec<Option<usize>> = vec![None; td.bags.len()];
    for &b in order.iter().rev() {
        let bag = &td.bags[b];
        let mut branches = Vec::new();
        for &c in &adj[b] {
            if c == parent[b] {
                continue;
            }
            if let Some(top) = built[c] {
                branches.push(builder.morph(top, &td.bags[c], bag));
            }
        }
        built[b] = match branches.len() {
            0 if bag.is_empty() => None,
            0 => Some(builder.leaf_chain(bag)),
            _ => Some(
                branches
                    .into_iter()
                    .reduce(|l, r| builder.push(NodeKind::Join, bag.clone(), vec![l, r]))
                    .expect("non-empty"),
            ),
        };
    }
    let top = built[root_bag].expect("root bag is non-empty");
    let root = builder.morph(top, &td.bags[root_bag], &[]);
    Ok(NiceTreeDecomposition {
        n: td.n,
        nodes: builder.nodes,
        root,
    })
}

/// Nice-form structure plus validity of the projected decomposition.
pub fn validate_nice(inst: &Instance, ntd: &NiceTreeDecomposition) -> TdReport {
    let mut violations = Vec::new();
    let mut bad = |node: usize, reason: String| violations.push(TdViolation::Structure { node, reason });
    let nodes = &ntd.nodes;
    if ntd.root >= nodes.len() {
        bad(ntd.root, "root out of range".into());
        return TdReport { violations };
    }
    if !nodes[ntd.root].bag.is_empty() {
        bad(ntd.root, "root bag is not empty".into());
    }
    for (i, t) in nodes.iter().enumerate() {
        if t.bag.windows(2).any(|w| w[0] >= w[1]) {
            bad(i, "bag is not sorted".into());
        }
        if t.children.iter().any(|&c| c >= i) {
            bad(i, "child does not precede its parent".into());
            continue;
        }
        let child_bag = |k: usize| &nodes[t.children[k]].bag;
        let ok = match t.kind {
            NodeKind::Leaf(v) => t.children.is_empty() && t.bag == [v],
            NodeKind::Introduce(v) => {
                t.children.len() == 1 && {
                    let mut expect = child_bag(0).clone();
                    !expect.contains(&v) && {
                        expect.push(v);
                        expect.sort_unstable();
                        expect == t.bag
                    }
                }
            }
            NodeKind::Forget(v) => {
                t.children.len() == 1 && child_bag(0).contains(&v) && {
                    let expect: Vec<usize> = child_bag(0).iter().copied().filter(|&u| u != v).collect();
                    expect == t.bag
                }
            }
            NodeKind::Join => t.children.len() == 2 && *child_bag(0) == t.bag && *child_bag(1) == t.bag,
        };
        if !ok {
            bad(i, format!("{:?} rule violated", t.kind));
        }
    }
    let mut parents = vec![0usize; nodes.len()];
    for t in nodes {
        for &c in &t.children {
            if c < nodes.len() {
                parents[c] += 1;
            }
        }
    }
    for (i, &p) in parents.iter().enumerate() {
        let expected = usize::from(i != ntd.root);
        if p != expected {
            bad(i, format!("{p} parents"));
        }
    }
    violations.extend(validate_td(inst, &ntd.project()).violations);
    TdReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treewidth::heuristic_decomposition;
    use crate::VertexAttrs;

    fn graph_of(n: usize, edges: &[(usize, usize)]) -> Instance {
        Instance::new(vec![VertexAttrs::new(1, 1, 1); n], edges.iter().copied()).unwrap()
    }

    #[test]
    fn single_bag() {
        let inst = graph_of(1, &[]);
        let td = TreeDecomposition::new(1, vec![vec![0]], vec![]);
        let ntd = make_nice(&td).unwrap();
        let kinds: Vec<_> = ntd.nodes.iter().map(|t| t.kind).collect();
        assert_eq!(kinds, vec![NodeKind::Leaf(0), NodeKind::Forget(0)]);
        assert!(validate_nice(&inst, &ntd).is_pass());
    }

    #[test]
    fn path_decomposition() {
        let inst = graph_of(3, &[(0, 1), (1, 2)]);
        let td = TreeDecomposition::new(3, vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        let ntd = make_nice(&td).unwrap();
        assert!(validate_nice(&inst, &ntd).is_pass());
        assert_eq!(ntd.width(), 1);
    }

    #[test]
    fn star_of_bags_gets_join_spine() {
        let inst = graph_of(4, &[(0, 1), (0, 2), (0, 3)]);
        let td = TreeDecomposition::new(
            4,
            vec![vec![0], vec![0, 1], vec![0, 2], vec![0, 3]],
            vec![(0, 1), (0, 2), (0, 3)],
        );
        let ntd = make_nice(&td).unwrap();
        assert!(validate_nice(&inst, &ntd).is_pass());
        assert_eq!(ntd.nodes.iter().filter(|t| t.kind == NodeKind::Join).count(), 2);
        assert_eq!(ntd.width(), 1);
    }

    #[test]
    fn heuristic_then_nice() {
        let inst = graph_of(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (4, 5)]);
        let td = heuristic_decomposition(&inst);
        let ntd = make_nice(&td).unwrap();
        assert!(validate_nice(&inst, &ntd).is_pass());
        assert_eq!(ntd.width(), td.width());
    }

    #[test]
    fn broken_structure_detected() {
        let inst = graph_of(2, &[(0, 1)]);
        let td = TreeDecomposition::new(2, vec![vec![0, 1]], vec![]);
        let mut ntd = make_nice(&td).unwrap();
        ntd.nodes[1].kind = NodeKind::Forget(1);
        assert!(!validate_nice(&inst, &ntd).is_pass());
    }

    #[test]
    fn rejects_non_tree() {
        let td = TreeDecomposition::new(2, vec![vec![0], vec![1]], vec![]);
        assert!(make_nice(&td).is_err());
    }
}
