//! Exact dynamic program over a nice tree decomposition.
//!
//! A table row is keyed by one `(rd, rc)` pair per bag vertex in id order:
//! `rd` is the demand not yet assigned and `rc` the spare capacity left in
//! the copies bought so far (`0 ≤ rc < c`, always 0 when `c = 0`). In the
//! unsplittable model `rd` is either `d` or 0, so the key encodes the served
//! set. Copies are bought lazily: serving `δ` units from a server with spare
//! `rc` buys `⌈max(0, δ − rc)/c⌉` new copies and leaves `(rc − δ) mod c`.
//!
//! Assignments between a vertex and its bag neighbors happen when the vertex
//! is introduced, one ordered pair at a time. Joins merge the spare capacity
//! of both sides and refund the copies that become redundant.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::solution::{minimum_multiplicities, Assignment, DemandModel, Solution};
use crate::treewidth::{heuristic_decomposition, make_nice, validate_nice, NiceTreeDecomposition, NodeKind};

/// `(rd, rc)` for each bag vertex, in bag order.
pub type Key = Vec<(i64, i64)>;

/// `(consumer, server, amount)`.
pub type Transfer = (usize, usize, i64);

#[derive(Clone, Debug, PartialEq, Eq)]
enum Back {
    Introduce { child: Key, transfers: Vec<Transfer> },
    Forget { child: Key },
    Join { left: Key, right: Key },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub cost: i64,
    back: Back,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    /// Sorted bag.
    pub bag: Vec<usize>,
    pub rows: BTreeMap<Key, Row>,
}

impl Table {
    /// The table of an empty bag below any leaf: one empty configuration.
    pub fn empty() -> Self {
        let mut rows = BTreeMap::new();
        rows.insert(
            Vec::new(),
            Row {
                cost: 0,
                back: Back::Forget { child: Vec::new() },
            },
        );
        Table { bag: Vec::new(), rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn cost(&self, key: &[(i64, i64)]) -> Option<i64> {
        self.rows.get(key).map(|r| r.cost)
    }

    fn offer(&mut self, key: Key, cost: i64, back: Back) {
        match self.rows.get(&key) {
            Some(r) if r.cost <= cost => {}
            _ => {
                self.rows.insert(key, Row { cost, back });
            }
        }
    }
}

/// Largest table the key domain allows for this bag.
pub fn table_bound(inst: &Instance, bag: &[usize], model: DemandModel) -> u128 {
    bag.iter()
        .map(|&u| {
            let rd = match model {
                DemandModel::Unsplittable => 2,
                DemandModel::Splittable => inst.demand(u) as u128 + 1,
            };
            rd * inst.capacity(u).max(1) as u128
        })
        .product()
}

/// Serves `amount` of the consumer at key position `ci` from the server at
/// `si`. Returns the added cost.
fn serve(inst: &Instance, key: &mut Key, bag: &[usize], ci: usize, si: usize, amount: i64) -> i64 {
    let server = bag[si];
    let c = inst.capacity(server);
    key[ci].0 -= amount;
    let spare = key[si].1;
    let fresh = (amount - spare).max(0);
    key[si].1 = (spare - amount).rem_euclid(c);
    inst.weight(server) * ((fresh + c - 1) / c)
}

/// Table for a leaf bag `{v}`.
pub fn dp_leaf(inst: &Instance, v: usize, model: DemandModel) -> Table {
    dp_introduce(inst, &Table::empty(), v, model)
}

/// Adds `v` to the child bag, then for `v` itself and every bag neighbor `u`
/// optionally lets `v` serve `u` and `u` serve `v`.
pub fn dp_introduce(inst: &Instance, child: &Table, v: usize, model: DemandModel) -> Table {
    let at = child.bag.binary_search(&v).expect_err("introduced vertex already in bag");
    let mut bag = child.bag.clone();
    bag.insert(at, v);

    let mut steps = vec![(at, at)];
    for (i, &u) in bag.iter().enumerate() {
        if u != v && inst.is_adjacent(u, v) {
            steps.push((i, at));
            steps.push((at, i));
        }
    }

    // each layer maps a key to (cost, key in the previous layer, transfer)
    type Layer = BTreeMap<Key, (i64, Key, Option<Transfer>)>;
    let mut layers: Vec<Layer> = Vec::with_capacity(steps.len() + 1);
    let mut first = Layer::new();
    for (ck, row) in &child.rows {
        let mut key = ck.clone();
        key.insert(at, (inst.demand(v), 0));
        first.insert(key, (row.cost, ck.clone(), None));
    }
    layers.push(first);

    for &(ci, si) in &steps {
        let (consumer, server) = (bag[ci], bag[si]);
        let mut next = Layer::new();
        let mut offer = |key: Key, cost: i64, prev: &Key, t: Option<Transfer>| match next.get(&key) {
            Some(e) if e.0 <= cost => {}
            _ => {
                next.insert(key, (cost, prev.clone(), t));
            }
        };
        for (key, &(cost, _, _)) in layers.last().expect("first layer") {
            offer(key.clone(), cost, key, None);
            let rd = key[ci].0;
            if rd == 0 || inst.capacity(server) == 0 {
                continue;
            }
            let amounts = match model {
                DemandModel::Unsplittable => rd..=rd,
                DemandModel::Splittable => 1..=rd,
            };
            for amount in amounts {
                let mut k = key.clone();
                let extra = serve(inst, &mut k, &bag, ci, si, amount);
                offer(k, cost + extra, key, Some((consumer, server, amount)));
            }
        }
        layers.push(next);
    }

    let mut table = Table {
        bag,
        rows: BTreeMap::new(),
    };
    for (key, &(cost, _, _)) in layers.last().expect("layers") {
        let mut transfers = Vec::new();
        let mut cur = key.clone();
        for layer in layers.iter().rev() {
            let (_, prev, t) = &layer[&cur];
            transfers.extend(*t);
            cur = prev.clone();
        }
        transfers.reverse();
        table.offer(key.clone(), cost, Back::Introduce { child: cur, transfers });
    }
    table
}

/// Drops `v`, keeping only rows where its demand is fully assigned.
pub fn dp_forget(child: &Table, v: usize) -> Result<Table> {
    let at = child.bag.binary_search(&v).expect("forgotten vertex in bag");
    let mut bag = child.bag.clone();
    bag.remove(at);
    let mut table = Table {
        bag,
        rows: BTreeMap::new(),
    };
    for (ck, row) in &child.rows {
        if ck[at].0 != 0 {
            continue;
        }
        let mut key = ck.clone();
        key.remove(at);
        table.offer(key, row.cost, Back::Forget { child: ck.clone() });
    }
    if table.is_empty() {
        return Err(Error::EmptyTable(v));
    }
    Ok(table)
}

/// Combines two tables over the same bag. Rows are compatible when together
/// they assign no vertex more than its demand; spare capacity is pooled and
/// every full copy it adds up to is refunded.
pub fn dp_join(inst: &Instance, left: &Table, right: &Table) -> Table {
    assert_eq!(left.bag, right.bag, "join children must share the bag");
    let bag = left.bag.clone();
    let mut table = Table {
        bag,
        rows: BTreeMap::new(),
    };
    for (lk, lr) in &left.rows {
        'pair: for (rk, rr) in &right.rows {
            let mut key = Vec::with_capacity(lk.len());
            let mut refund = 0;
            for (i, &u) in table.bag.iter().enumerate() {
                let d = inst.demand(u);
                let rd = lk[i].0 + rk[i].0 - d;
                if rd < 0 {
                    continue 'pair;
                }
                let c = inst.capacity(u);
                let rc = if c == 0 {
                    0
                } else {
                    let pooled = lk[i].1 + rk[i].1;
                    refund += inst.weight(u) * (pooled / c);
                    pooled % c
                };
                key.push((rd, rc));
            }
            let back = Back::Join {
                left: lk.clone(),
                right: rk.clone(),
            };
            table.offer(key, lr.cost + rr.cost - refund, back);
        }
    }
    table
}

/// Result of a full DP run.
#[derive(Clone, Debug)]
pub struct DpRun {
    pub solution: Solution,
    /// Minimum over the root table.
    pub cost: i64,
    /// Row count of every node's table, by node index.
    pub table_sizes: Vec<usize>,
}

/// Runs the DP bottom-up and reconstructs an optimal solution.
pub fn run_dp(inst: &Instance, ntd: &NiceTreeDecomposition, model: DemandModel) -> Result<DpRun> {
    inst.check_feasible()?;
    if ntd.n != inst.n() {
        return Err(Error::InvalidDecomposition(format!(
            "decomposition is for {} vertices, instance has {}",
            ntd.n,
            inst.n()
        )));
    }
    let report = validate_nice(inst, ntd);
    if let Some(v) = report.violations.first() {
        return Err(Error::InvalidDecomposition(v.to_string()));
    }

    let mut tables: Vec<Table> = Vec::with_capacity(ntd.nodes.len());
    for node in &ntd.nodes {
        let t = match node.kind {
            NodeKind::Leaf(v) => dp_leaf(inst, v, model),
            NodeKind::Introduce(v) => dp_introduce(inst, &tables[node.children[0]], v, model),
            NodeKind::Forget(v) => dp_forget(&tables[node.children[0]], v).map_err(|e| match e {
                Error::EmptyTable(_) => Error::Infeasible(v),
                e => e,
            })?,
            NodeKind::Join => dp_join(inst, &tables[node.children[0]], &tables[node.children[1]]),
        };
        debug_assert!(t.len() as u128 <= table_bound(inst, &t.bag, model));
        tables.push(t);
    }

    let root_table = &tables[ntd.root];
    let cost = root_table.cost(&[]).ok_or(Error::Infeasible(0))?;

    let mut asg = Assignment::new();
    let mut stack = vec![(ntd.root, Vec::new())];
    while let Some((node, key)) = stack.pop() {
        let children = &ntd.nodes[node].children;
        match &tables[node].rows[&key].back {
            Back::Introduce { child, transfers } => {
                for &(consumer, server, amount) in transfers {
                    asg.add(consumer, server, amount);
                }
                if let Some(&c) = children.first() {
                    stack.push((c, child.clone()));
                }
            }
            Back::Forget { child } => stack.push((children[0], child.clone())),
            Back::Join { left, right } => {
                stack.push((children[0], left.clone()));
                stack.push((children[1], right.clone()));
            }
        }
    }
    let solution = minimum_multiplicities(inst, asg)?;
    assert_eq!(solution.cost, cost, "reconstruction must match the table optimum");
    Ok(DpRun {
        solution,
        cost,
        table_sizes: tables.iter().map(Table::len).collect(),
    })
}

pub fn solve_td(inst: &Instance, ntd: &NiceTreeDecomposition, model: DemandModel) -> Result<Solution> {
    run_dp(inst, ntd, model).map(|r| r.solution)
}

/// DP over the min-fill decomposition.
pub fn solve_dp(inst: &Instance, model: DemandModel) -> Result<Solution> {
    if inst.n() == 0 {
        return Ok(Solution::empty(0));
    }
    let ntd = make_nice(&heuristic_decomposition(inst))?;
    solve_td(inst, &ntd, model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::VertexAttrs;
    use crate::oracle::{exact, SearchBudget};
    use crate::treewidth::TreeDecomposition;
    use crate::verify::verify_solution;

    const U: DemandModel = DemandModel::Unsplittable;
    const S: DemandModel = DemandModel::Splittable;

    fn rows(t: &Table) -> Vec<(Key, i64)> {
        t.rows.iter().map(|(k, r)| (k.clone(), r.cost)).collect()
    }

    #[test]
    fn leaf_rows() {
        let inst = Instance::new(vec![VertexAttrs::new(2, 3, 7)], []).unwrap();
        // three copies hold 9, two units spare
        assert_eq!(rows(&dp_leaf(&inst, 0, U)), vec![(vec![(0, 2)], 6), (vec![(7, 0)], 0)]);

        let inst = Instance::new(vec![VertexAttrs::new(2, 5, 0)], []).unwrap();
        assert_eq!(rows(&dp_leaf(&inst, 0, U)), vec![(vec![(0, 0)], 0)]);

        let inst = Instance::new(vec![VertexAttrs::new(2, 0, 2)], []).unwrap();
        assert_eq!(rows(&dp_leaf(&inst, 0, U)), vec![(vec![(2, 0)], 0)]);
    }

    #[test]
    fn introduce_uses_spare_then_buys() {
        // u: w 1, c 5, already served elsewhere with 2 spare; v: d 3
        let inst = Instance::new(
            vec![VertexAttrs::new(1, 5, 0), VertexAttrs::new(9, 0, 3)],
            [(0, 1)],
        )
        .unwrap();
        let mut child = Table {
            bag: vec![0],
            rows: BTreeMap::new(),
        };
        child.offer(vec![(0, 2)], 0, Back::Forget { child: vec![] });
        let t = dp_introduce(&inst, &child, 1, U);
        assert_eq!(t.cost(&[(0, 4), (0, 0)]), Some(1));
        assert_eq!(t.cost(&[(0, 2), (3, 0)]), Some(0));

        let mut child = Table {
            bag: vec![0],
            rows: BTreeMap::new(),
        };
        child.offer(vec![(0, 4)], 0, Back::Forget { child: vec![] });
        let t = dp_introduce(&inst, &child, 1, U);
        assert_eq!(t.cost(&[(0, 1), (0, 0)]), Some(0));
    }

    #[test]
    fn forget_keeps_served_rows() {
        let inst = Instance::new(vec![VertexAttrs::new(2, 3, 7)], []).unwrap();
        let t = dp_forget(&dp_leaf(&inst, 0, U), 0).unwrap();
        assert_eq!(rows(&t), vec![(vec![], 6)]);

        let inst = Instance::new(vec![VertexAttrs::new(2, 0, 7)], []).unwrap();
        assert!(matches!(dp_forget(&dp_leaf(&inst, 0, U), 0), Err(Error::EmptyTable(0))));
    }

    #[test]
    fn forget_keeps_cheaper_duplicate() {
        let mut t = Table {
            bag: vec![0, 1],
            rows: BTreeMap::new(),
        };
        t.offer(vec![(0, 0), (0, 1)], 5, Back::Forget { child: vec![] });
        t.offer(vec![(0, 0), (0, 2)], 7, Back::Forget { child: vec![] });
        assert_eq!(rows(&dp_forget(&t, 1).unwrap()), vec![(vec![(0, 0)], 5)]);
    }

    #[test]
    fn join_refunds_pooled_copies() {
        let inst = Instance::new(vec![VertexAttrs::new(2, 5, 0)], []).unwrap();
        let mk = |rc: i64, cost: i64| {
            let mut t = Table {
                bag: vec![0],
                rows: BTreeMap::new(),
            };
            t.offer(vec![(0, rc)], cost, Back::Forget { child: vec![] });
            t
        };
        let t = dp_join(&inst, &mk(3, 4), &mk(4, 4));
        assert_eq!(rows(&t), vec![(vec![(0, 2)], 6)]);
        let t = dp_join(&inst, &mk(0, 4), &mk(0, 4));
        assert_eq!(rows(&t), vec![(vec![(0, 0)], 8)]);
    }

    #[test]
    fn join_rejects_double_service() {
        let inst = Instance::new(vec![VertexAttrs::new(1, 5, 2)], []).unwrap();
        let leaf = dp_leaf(&inst, 0, U);
        let t = dp_join(&inst, &leaf, &leaf);
        // served on both sides would assign 4 units of a demand of 2
        assert_eq!(t.cost(&[(0, 3)]), Some(1));
        assert_eq!(t.cost(&[(2, 0)]), Some(0));
        assert_eq!(t.len(), 2);
    }

    fn p3() -> Instance {
        "p capdom 3 2\nv 1 1 1 1\nv 2 3 10 1\nv 3 1 1 1\ne 1 2\ne 2 3\n"
            .parse()
            .unwrap()
    }

    #[test]
    fn path_of_three() {
        let inst = p3();
        let td = TreeDecomposition::new(3, vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        let ntd = make_nice(&td).unwrap();
        let sol = solve_td(&inst, &ntd, U).unwrap();
        assert_eq!(sol.cost, 3);
        assert!(verify_solution(&inst, &sol, U).is_pass());
    }

    #[test]
    fn single_vertex() {
        let inst = Instance::new(vec![VertexAttrs::new(2, 3, 7)], []).unwrap();
        assert_eq!(solve_dp(&inst, U).unwrap().cost, 6);
        assert_eq!(solve_dp(&inst, S).unwrap().cost, 6);
    }

    #[test]
    fn split_pair() {
        let inst = Instance::new(
            vec![VertexAttrs::new(1, 2, 3), VertexAttrs::new(1, 2, 0)],
            [(0, 1)],
        )
        .unwrap();
        let sol = solve_dp(&inst, S).unwrap();
        assert_eq!(sol.cost, 2);
        assert!(verify_solution(&inst, &sol, S).is_pass());
    }

    #[test]
    fn infeasible_reported() {
        let inst = Instance::new(vec![VertexAttrs::new(1, 0, 1)], []).unwrap();
        assert!(matches!(solve_dp(&inst, U), Err(Error::Infeasible(0))));
    }

    #[test]
    fn matches_oracle_on_small_random() {
        for seed in 0..40 {
            let params = crate::RandomParams::new(6, 0.4, 4, 4, 3);
            let inst = crate::random_instance(&params, seed);
            for model in [U, S] {
                let opt = exact(&inst, model, SearchBudget::default()).unwrap();
                let ntd = make_nice(&heuristic_decomposition(&inst)).unwrap();
                let run = run_dp(&inst, &ntd, model).unwrap();
                assert_eq!(run.cost, opt.cost, "seed {seed} {model}");
                assert!(verify_solution(&inst, &run.solution, model).is_pass());
                for (t, node) in run.table_sizes.iter().zip(&ntd.nodes) {
                    assert!(*t as u128 <= table_bound(&inst, &node.bag, model));
                }
            }
        }
    }
}
