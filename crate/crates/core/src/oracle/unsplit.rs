use super::{lex_less, SearchBudget};
use crate::error::{Error, Result};
use crate::greedy::greedy_unsplittable;
use crate::instance::Instance;
use crate::solution::{ceil_div, minimum_multiplicities, Assignment, Solution};

struct Search<'a> {
    inst: &'a Instance,
    /// Consumers with positive demand, largest demand first.
    order: Vec<usize>,
    /// Positive-capacity servers in each consumer's closed neighborhood.
    servers: Vec<Vec<usize>>,
    /// `⌊d(v)·min_u w(u)/c(u)⌋`, the least any server can charge for `v`.
    floor_share: Vec<i64>,
    load: Vec<i64>,
    x: Vec<i64>,
    cost: i64,
    choice: Vec<usize>,
    limit: i64,
    best: Option<(i64, Vec<i64>, Vec<usize>)>,
    nodes: u64,
    max_nodes: u64,
}

impl Search<'_> {
    /// Never exceeds the cost of any completion: the current copies stay
    /// bought, and every completion pays at least `w/c` per demand unit.
    fn lower_bound(&self, depth: usize) -> i64 {
        let mut frac = 0i128;
        for (u, &l) in self.load.iter().enumerate() {
            if l > 0 {
                frac += self.inst.weight(u) as i128 * l as i128 / self.inst.capacity(u) as i128;
            }
        }
        for &v in &self.order[depth..] {
            frac += self.floor_share[v] as i128;
        }
        self.cost.max(frac as i64)
    }

    fn pruned(&self, lb: i64) -> bool {
        if lb > self.limit {
            return true;
        }
        match &self.best {
            // copies only grow deeper in the tree, so a prefix that is already
            // lexicographically no smaller cannot produce a smaller vector
            Some((cost, bx, _)) => lb == *cost && !lex_less(&self.x, bx),
            None => false,
        }
    }

    fn dfs(&mut self, depth: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::BudgetExhausted {
                nodes: self.nodes,
                incumbent: None,
            });
        }
        if self.pruned(self.lower_bound(depth)) {
            return Ok(());
        }
        if depth == self.order.len() {
            let better = match &self.best {
                None => self.cost <= self.limit,
                Some((c, bx, _)) => self.cost < *c || (self.cost == *c && lex_less(&self.x, bx)),
            };
            if better {
                self.limit = self.cost;
                self.best = Some((self.cost, self.x.clone(), self.choice.clone()));
            }
            return Ok(());
        }
        let v = self.order[depth];
        let d = self.inst.demand(v);
        let mut options: Vec<(i64, usize)> = self.servers[v]
            .iter()
            .map(|&u| {
                let c = self.inst.capacity(u);
                let extra = ceil_div(self.load[u] + d, c) - self.x[u];
                (self.inst.weight(u) * extra, u)
            })
            .collect();
        options.sort_unstable();
        for (delta, u) in options {
            let old_x = self.x[u];
            self.load[u] += d;
            self.x[u] = ceil_div(self.load[u], self.inst.capacity(u));
            self.cost += delta;
            self.choice[depth] = u;
            let r = self.dfs(depth + 1);
            self.cost -= delta;
            self.x[u] = old_x;
            self.load[u] -= d;
            r?;
        }
        Ok(())
    }
}

/// Optimal solution for the unsplittable model by branch and bound over the
/// server of each consumer (largest demand first, cheapest extension first).
///
/// The greedy solution seeds the incumbent. Among optimal solutions the one
/// with the lexicographically smallest multiplicity vector is returned.
pub fn exact_unsplittable(inst: &Instance, budget: SearchBudget) -> Result<Solution> {
    inst.check_feasible()?;
    let n = inst.n();
    let mut order: Vec<usize> = (0..n).filter(|&v| inst.demand(v) > 0).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(inst.demand(v)), v));
    let servers: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            inst.closed_neighborhood(v)
                .into_iter()
                .filter(|&u| inst.capacity(u) > 0)
                .collect()
        })
        .collect();
    let floor_share = (0..n)
        .map(|v| {
            servers[v]
                .iter()
                .map(|&u| {
                    (inst.demand(v) as i128 * inst.weight(u) as i128 / inst.capacity(u) as i128)
                        as i64
                })
                .min()
                .unwrap_or(0)
        })
        .collect();

    let limit = budget.upper_bound.unwrap_or(i64::MAX);
    let mut search = Search {
        inst,
        choice: vec![usize::MAX; order.len()],
        order,
        servers,
        floor_share,
        load: vec![0; n],
        x: vec![0; n],
        cost: 0,
        limit,
        best: None,
        nodes: 0,
        max_nodes: budget.max_nodes,
    };

    let greedy = greedy_unsplittable(inst)?.solution;
    if greedy.cost <= limit {
        let choice = search
            .order
            .iter()
            .map(|&v| {
                greedy
                    .assignment
                    .triples()
                    .find(|&(c, _, _)| c == v)
                    .map(|(_, s, _)| s)
                    .expect("greedy serves every consumer")
            })
            .collect();
        search.limit = greedy.cost;
        search.best = Some((greedy.cost, greedy.multiplicity.clone(), choice));
    }

    if let Err(Error::BudgetExhausted { nodes, .. }) = search.dfs(0) {
        let incumbent = search
            .best
            .map(|(_, _, choice)| Box::new(build(inst, &search.order, &choice)));
        return Err(Error::BudgetExhausted { nodes, incumbent });
    }
    match search.best {
        Some((_, _, choice)) => Ok(build(inst, &search.order, &choice)),
        None => Err(Error::AboveBound(limit)),
    }
}

fn build(inst: &Instance, order: &[usize], choice: &[usize]) -> Solution {
    let mut asg = Assignment::new();
    for (&v, &u) in order.iter().zip(choice) {
        asg.add(v, u, inst.demand(v));
    }
    minimum_multiplicities(inst, asg).expect("servers have positive capacity")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::VertexAttrs;

    fn solve(inst: &Instance) -> Solution {
        exact_unsplittable(inst, SearchBudget::default()).unwrap()
    }

    #[test]
    fn lone_vertex() {
        let inst = Instance::new(vec![VertexAttrs::new(2, 3, 7)], []).unwrap();
        assert_eq!(solve(&inst).cost, 6);
    }

    #[test]
    fn path_of_three() {
        let inst: Instance = "p capdom 3 2\nv 1 1 1 1\nv 2 3 10 1\nv 3 1 1 1\ne 1 2\ne 2 3\n"
            .parse()
            .unwrap();
        let sol = solve(&inst);
        assert_eq!(sol.cost, 3);
        // greedy finds x = (2, 0, 1) at the same cost
        assert_eq!(sol.multiplicity, vec![0, 1, 0]);
    }

    #[test]
    fn star_into_center() {
        let mut attrs = vec![VertexAttrs::new(1, 10, 0)];
        attrs.extend([VertexAttrs::new(5, 1, 2); 3]);
        let inst = Instance::new(attrs, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let sol = solve(&inst);
        assert_eq!(sol.cost, 1);
        assert_eq!(sol.assignment.loads(4)[0], 6);
    }

    #[test]
    fn bound_and_budget() {
        let inst: Instance = "p capdom 3 2\nv 1 1 1 1\nv 2 3 10 1\nv 3 1 1 1\ne 1 2\ne 2 3\n"
            .parse()
            .unwrap();
        let b = SearchBudget {
            upper_bound: Some(2),
            ..Default::default()
        };
        assert!(matches!(exact_unsplittable(&inst, b), Err(Error::AboveBound(2))));
        let b = SearchBudget {
            upper_bound: Some(3),
            ..Default::default()
        };
        assert_eq!(exact_unsplittable(&inst, b).unwrap().cost, 3);
        let r = exact_unsplittable(&inst, SearchBudget::with_max_nodes(1));
        assert!(matches!(r, Err(Error::BudgetExhausted { incumbent: Some(_), .. })));
    }
}
