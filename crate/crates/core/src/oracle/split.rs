use super::flow::{feasibility_flow, max_flow};
use super::{lex_less, SearchBudget};
use crate::error::{Error, Result};
use crate::greedy::greedy_splittable;
use crate::instance::Instance;
use crate::solution::{ceil_div, minimum_multiplicities, Solution};

struct Search<'a> {
    inst: &'a Instance,
    /// Positive-capacity vertices in id order; the search fixes their copies
    /// one at a time.
    servers: Vec<usize>,
    /// Copies beyond this never help: they would exceed the whole closed
    /// neighborhood's demand.
    max_x: Vec<i64>,
    total: i64,
    x: Vec<i64>,
    cost: i64,
    limit: i64,
    best: Option<(i64, Vec<i64>)>,
    nodes: u64,
    max_nodes: u64,
}

impl Search<'_> {
    fn caps(&self, depth: usize, open_at_max: bool) -> Vec<i64> {
        let mut caps = vec![0; self.inst.n()];
        for (i, &u) in self.servers.iter().enumerate() {
            let copies = if i < depth {
                self.x[u]
            } else if open_at_max {
                self.max_x[u]
            } else {
                0
            };
            caps[u] = self.inst.capacity(u) * copies;
        }
        caps
    }

    /// `None` when no completion is feasible, otherwise a lower bound on the
    /// cost of every completion.
    fn bound(&self, depth: usize) -> Option<i64> {
        if max_flow(self.inst, &self.caps(depth, true)).0 < self.total {
            return None;
        }
        let deficit = self.total - max_flow(self.inst, &self.caps(depth, false)).0;
        if deficit == 0 {
            return Some(self.cost);
        }
        let extra = self.servers[depth..]
            .iter()
            .map(|&u| {
                let w = self.inst.weight(u) as i128;
                let c = self.inst.capacity(u) as i128;
                (deficit as i128 * w + c - 1) / c
            })
            .min()?;
        Some(self.cost + extra as i64)
    }

    fn pruned(&self, depth: usize, lb: i64) -> bool {
        if lb > self.limit {
            return true;
        }
        match &self.best {
            Some((cost, bx)) if lb == *cost => {
                let fixed: Vec<usize> = self.servers[..depth].to_vec();
                let cur: Vec<i64> = fixed.iter().map(|&u| self.x[u]).collect();
                let best: Vec<i64> = fixed.iter().map(|&u| bx[u]).collect();
                !lex_less(&cur, &best) && cur != best
            }
            _ => false,
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
        let Some(lb) = self.bound(depth) else {
            return Ok(());
        };
        if self.pruned(depth, lb) {
            return Ok(());
        }
        if depth == self.servers.len() {
            let better = match &self.best {
                None => self.cost <= self.limit,
                Some((c, bx)) => self.cost < *c || (self.cost == *c && lex_less(&self.x, bx)),
            };
            if better {
                self.limit = self.cost;
                self.best = Some((self.cost, self.x.clone()));
            }
            return Ok(());
        }
        let u = self.servers[depth];
        let w = self.inst.weight(u);
        let mut top = self.max_x[u];
        if w > 0 {
            top = top.min((self.limit - self.cost) / w);
        }
        for copies in 0..=top {
            self.x[u] = copies;
            self.cost += w * copies;
            let r = self.dfs(depth + 1);
            self.cost -= w * copies;
            self.x[u] = 0;
            r?;
        }
        Ok(())
    }
}

/// Optimal solution for the splittable model by depth-first search over the
/// multiplicity vector in id order, pruned by two max-flow bounds per node.
///
/// The greedy solution seeds the incumbent. Among optimal solutions the one
/// with the lexicographically smallest multiplicity vector is returned.
pub fn exact_splittable(inst: &Instance, budget: SearchBudget) -> Result<Solution> {
    inst.check_feasible()?;
    let n = inst.n();
    let servers: Vec<usize> = (0..n).filter(|&u| inst.capacity(u) > 0).collect();
    let max_x = (0..n)
        .map(|u| {
            let c = inst.capacity(u);
            if c == 0 {
                return 0;
            }
            let reach: i64 = inst.closed_neighborhood(u).iter().map(|&v| inst.demand(v)).sum();
            ceil_div(reach, c)
        })
        .collect();

    let limit = budget.upper_bound.unwrap_or(i64::MAX);
    let mut search = Search {
        inst,
        servers,
        max_x,
        total: inst.total_demand(),
        x: vec![0; n],
        cost: 0,
        limit,
        best: None,
        nodes: 0,
        max_nodes: budget.max_nodes,
    };

    let greedy = greedy_splittable(inst)?.solution;
    if greedy.cost <= limit {
        search.limit = greedy.cost;
        search.best = Some((greedy.cost, greedy.multiplicity));
    }

    if let Err(Error::BudgetExhausted { nodes, .. }) = search.dfs(0) {
        let incumbent = search.best.map(|(_, x)| Box::new(build(inst, &x)));
        return Err(Error::BudgetExhausted { nodes, incumbent });
    }
    match search.best {
        Some((_, x)) => Ok(build(inst, &x)),
        None => Err(Error::AboveBound(limit)),
    }
}

fn build(inst: &Instance, x: &[i64]) -> Solution {
    let asg = feasibility_flow(inst, x).expect("search only keeps feasible vectors");
    let sol = minimum_multiplicities(inst, asg).expect("flow uses positive-capacity servers");
    debug_assert!(sol.cost <= x.iter().enumerate().map(|(u, &k)| inst.weight(u) * k).sum());
    sol
}
