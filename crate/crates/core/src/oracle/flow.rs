use petgraph::algo::dinics;
use petgraph::graph::{DiGraph, EdgeIndex};

use crate::instance::Instance;
use crate::solution::Assignment;

/// Max flow from demands to server capacities `server_cap[u]` over
/// closed-neighborhood arcs. Returns the flow value and the per-pair amounts.
pub(crate) fn max_flow(inst: &Instance, server_cap: &[i64]) -> (i64, Assignment) {
    let n = inst.n();
    let total = inst.total_demand() as u64;
    let mut g = DiGraph::<(), u64>::with_capacity(2 * n + 2, 4 * n);
    let source = g.add_node(());
    let sink = g.add_node(());
    let consumers: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    let servers: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    let mut arcs: Vec<(usize, usize, EdgeIndex)> = Vec::new();
    for v in 0..n {
        if inst.demand(v) == 0 {
            continue;
        }
        g.add_edge(source, consumers[v], inst.demand(v) as u64);
        for u in inst.closed_neighborhood(v) {
            if server_cap[u] > 0 {
                let e = g.add_edge(consumers[v], servers[u], total);
                arcs.push((v, u, e));
            }
        }
    }
    for u in 0..n {
        if server_cap[u] > 0 {
            g.add_edge(servers[u], sink, server_cap[u] as u64);
        }
    }
    let (value, flows) = dinics(&g, source, sink);
    let mut asg = Assignment::new();
    for (v, u, e) in arcs {
        asg.add(v, u, flows[e.index()] as i64);
    }
    (value as i64, asg)
}

/// An assignment meeting every demand with at most `c(u)·x(u)` on each
/// server, if one exists.
pub fn feasibility_flow(inst: &Instance, x: &[i64]) -> Option<Assignment> {
    let caps: Vec<i64> = (0..inst.n()).map(|u| inst.capacity(u) * x[u]).collect();
    let (value, asg) = max_flow(inst, &caps);
    (value == inst.total_demand()).then_some(asg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::VertexAttrs;

    fn p3() -> Instance {
        "p capdom 3 2\nv 1 1 1 1\nv 2 3 10 1\nv 3 1 1 1\ne 1 2\ne 2 3\n"
            .parse()
            .unwrap()
    }

    #[test]
    fn center_copy_carries_path() {
        let asg = feasibility_flow(&p3(), &[0, 1, 0]).unwrap();
        assert_eq!(asg.loads(3), vec![0, 3, 0]);
    }

    #[test]
    fn no_copies_no_flow() {
        assert!(feasibility_flow(&p3(), &[0, 0, 0]).is_none());
    }

    #[test]
    fn lone_vertex() {
        let inst = Instance::new(vec![VertexAttrs::new(2, 3, 7)], []).unwrap();
        let asg = feasibility_flow(&inst, &[3]).unwrap();
        assert_eq!(asg.get(0, 0), 7);
        assert!(feasibility_flow(&inst, &[2]).is_none());
    }
}
