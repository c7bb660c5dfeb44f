use std::collections::BTreeSet;

use super::TreeDecomposition;
use crate::instance::Instance;

fn graph(inst: &Instance) -> Vec<BTreeSet<usize>> {
    (0..inst.n())
        .map(|v| inst.neighbors(v).iter().copied().collect())
        .collect()
}

fn fill_in(adj: &[BTreeSet<usize>], v: usize) -> usize {
    let nb: Vec<usize> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in nb.iter().enumerate() {
        for &b in &nb[i + 1..] {
            if !adj[a].contains(&b) {
                missing += 1;
            }
        }
    }
    missing
}

fn eliminate(adj: &mut [BTreeSet<usize>], v: usize) {
    let nb: Vec<usize> = adj[v].iter().copied().collect();
    for &a in &nb {
        adj[a].remove(&v);
        for &b in &nb {
            if a != b {
                adj[a].insert(b);
            }
        }
    }
    adj[v].clear();
}

/// Greedy elimination order picking the vertex whose neighborhood needs the
/// fewest fill edges, then the smallest degree, then the lowest id.
pub fn min_fill_order(inst: &Instance) -> Vec<usize> {
    greedy_order(inst, |adj, v| (fill_in(adj, v), adj[v].len()))
}

/// Greedy elimination order by current degree, lowest id on ties.
pub fn min_degree_order(inst: &Instance) -> Vec<usize> {
    greedy_order(inst, |adj, v| (adj[v].len(), 0))
}

fn greedy_order<F>(inst: &Instance, score: F) -> Vec<usize>
where
    F: Fn(&[BTreeSet<usize>], usize) -> (usize, usize),
{
    let n = inst.n();
    let mut adj = graph(inst);
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (score(&adj, v), v))
            .expect("a vertex remains");
        eliminate(&mut adj, v);
        alive[v] = false;
        order.push(v);
    }
    order
}

/// Decomposition induced by an elimination order: vertex `v` gets the bag
/// `{v} ∪ N(v)` in the graph at the time it is eliminated, attached to the
/// bag of its first-eliminated remaining neighbor.
pub fn decomposition_from_order(inst: &Instance, order: &[usize]) -> TreeDecomposition {
    let n = inst.n();
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut adj = graph(inst);
    let mut bags = Vec::with_capacity(n);
    let mut edges = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        let mut bag: Vec<usize> = adj[v].iter().copied().collect();
        let parent = bag.iter().map(|&u| pos[u]).min();
        match parent {
            Some(p) => edges.push((i, p)),
            None if i + 1 < order.len() => edges.push((i, i + 1)),
            None => {}
        }
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        eliminate(&mut adj, v);
    }
    TreeDecomposition { n, bags, edges }
}

/// Min-fill decomposition; deterministic, no optimality claim.
pub fn heuristic_decomposition(inst: &Instance) -> TreeDecomposition {
    decomposition_from_order(inst, &min_fill_order(inst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treewidth::validate_td;
    use crate::VertexAttrs;

    fn graph_of(n: usize, edges: &[(usize, usize)]) -> Instance {
        Instance::new(vec![VertexAttrs::new(1, 1, 1); n], edges.iter().copied()).unwrap()
    }

    #[test]
    fn tree_has_width_one() {
        let inst = graph_of(6, &[(0, 1), (0, 2), (2, 3), (2, 4), (4, 5)]);
        let td = heuristic_decomposition(&inst);
        assert!(validate_td(&inst, &td).is_pass());
        assert_eq!(td.width(), 1);
    }

    #[test]
    fn complete_graph() {
        let inst = graph_of(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let td = heuristic_decomposition(&inst);
        assert!(validate_td(&inst, &td).is_pass());
        assert_eq!(td.width(), 3);
    }

    #[test]
    fn cycle_any_order() {
        let inst = graph_of(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]);
        for td in [
            heuristic_decomposition(&inst),
            decomposition_from_order(&inst, &min_degree_order(&inst)),
            decomposition_from_order(&inst, &[2, 0, 4, 1, 3]),
        ] {
            assert!(validate_td(&inst, &td).is_pass());
            assert_eq!(td.width(), 2);
        }
    }

    #[test]
    fn disconnected_and_isolated() {
        let inst = graph_of(5, &[(0, 1), (3, 4)]);
        let td = heuristic_decomposition(&inst);
        assert!(validate_td(&inst, &td).is_pass());
        assert_eq!(td.width(), 1);
    }
}
