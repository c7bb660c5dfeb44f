use super::split::{apply_first_choice, plan};
use super::{best_quote, GreedyOutcome, GreedyState, Phase, Trace, TraceStep};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::solution::minimum_multiplicities;

/// Largest-capacity closed neighbor of every vertex, lowest id on ties.
fn largest_servers(inst: &Instance) -> Vec<usize> {
    (0..inst.n())
        .map(|u| {
            inst.closed_neighborhood(u)
                .into_iter()
                .fold(u, |best, v| {
                    let (cb, cv) = (inst.capacity(best), inst.capacity(v));
                    if cv > cb || (cv == cb && v < best) {
                        v
                    } else {
                        best
                    }
                })
        })
        .collect()
}

/// Ships `c(g_u)·⌊d(u)/c(g_u)⌋` of every demand to the largest-capacity
/// neighbor `g_u` and resets each working demand to what is left, so that
/// afterwards `d(u) < c(g_u)`. Returns the state, the `g_u` map, the pre-pass
/// cost and its trace steps.
pub fn unweighted_pre_pass(inst: &Instance) -> (GreedyState, Vec<usize>, i64, Vec<TraceStep>) {
    let g = largest_servers(inst);
    let mut state = GreedyState::new(inst);
    let mut cost = 0;
    let mut steps = Vec::new();
    let unsatisfied = state.unsatisfied();
    for u in 0..inst.n() {
        let d = inst.demand(u);
        let cap = inst.capacity(g[u]);
        if d == 0 || cap == 0 {
            continue;
        }
        let copies = d / cap;
        if copies > 0 {
            state.assignment.add(u, g[u], copies * cap);
            cost += inst.weight(g[u]) * copies;
            steps.push(TraceStep {
                iteration: 0,
                vertex: g[u],
                prefix_len: 1,
                cost: inst.weight(g[u]) * copies,
                phase: Phase::PrePass,
                remaining: unsatisfied,
            });
        }
        state.demand[u] = d - copies * cap;
    }
    state.residue = state.demand.clone();
    state.undominated = state.demand.iter().map(|&d| d > 0).collect();
    state.running_cost = cost;
    (state, g, cost, steps)
}

/// Greedy for the splittable model with unit weights.
///
/// After the pre-pass every residue fits in one copy of its largest neighbor,
/// so a partially served vertex is completed by sending its residue there.
pub fn greedy_unweighted_splittable(inst: &Instance) -> Result<GreedyOutcome> {
    if let Some(v) = (0..inst.n()).find(|&v| inst.weight(v) != 1) {
        return Err(Error::NotUnweighted {
            vertex: v,
            weight: inst.weight(v),
        });
    }
    inst.check_feasible()?;
    let (mut state, g, pre_pass_cost, steps) = unweighted_pre_pass(inst);
    let mut trace = Trace {
        steps,
        residues: vec![state.residue.clone()],
    };

    let mut iteration = 0;
    while state.residue.iter().any(|&r| r > 0) {
        iteration += 1;
        let remaining = state.unsatisfied();
        let plan = best_quote(inst.n(), |u| plan(inst, &state, u).ok())
            .expect("feasible instance always has a quotable server");
        let cost = apply_first_choice(inst, &mut state, &plan, false);
        state.running_cost += cost;
        trace.steps.push(TraceStep {
            iteration,
            vertex: plan.quote.vertex,
            prefix_len: plan.quote.prefix_len,
            cost,
            phase: Phase::First,
            remaining,
        });

        for v in 0..inst.n() {
            let rd = state.residue[v];
            if rd == 0 || rd >= state.demand[v] {
                continue;
            }
            let remaining = state.unsatisfied();
            state.assignment.add(v, g[v], rd);
            state.residue[v] = 0;
            state.running_cost += 1;
            trace.steps.push(TraceStep {
                iteration,
                vertex: v,
                prefix_len: 1,
                cost: 1,
                phase: Phase::Second,
                remaining,
            });
        }
        trace.residues.push(state.residue.clone());
    }

    let solution = minimum_multiplicities(inst, state.assignment)?;
    Ok(GreedyOutcome {
        solution,
        trace,
        pre_pass_cost,
    })
}
