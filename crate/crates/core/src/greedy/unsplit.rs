use std::cmp::Ordering;

use num_bigint::BigInt;

use super::{best_quote, EfficiencyQuote, GreedyOutcome, GreedyState, Phase, Trace, TraceStep, Unquoted};
use crate::error::Result;
use crate::instance::Instance;
use crate::solution::{ceil_div, minimum_multiplicities};

/// Undominated closed neighbors of `u`, by demand then id.
fn candidates(inst: &Instance, state: &GreedyState, u: usize) -> Vec<usize> {
    let mut c: Vec<usize> = inst
        .closed_neighborhood(u)
        .into_iter()
        .filter(|&v| state.undominated[v])
        .collect();
    c.sort_by_key(|&v| (state.demand[v], v));
    c
}

/// `max_i i / (w(u)·⌈Σ_{j≤i} d(v_j) / c(u)⌉)` over the sorted undominated
/// closed neighbors; ties prefer the longer prefix.
pub fn unsplit_efficiency(
    inst: &Instance,
    state: &GreedyState,
    u: usize,
) -> std::result::Result<EfficiencyQuote, Unquoted> {
    let c = inst.capacity(u);
    if c == 0 {
        return Err(Unquoted::ZeroCapacity);
    }
    let cands = candidates(inst, state, u);
    if cands.is_empty() {
        return Err(Unquoted::NoCandidates);
    }
    let w = inst.weight(u) as i128;
    let mut prefix = 0i64;
    let mut best: Option<EfficiencyQuote> = None;
    for (i, &v) in cands.iter().enumerate() {
        prefix += state.demand[v];
        let q = EfficiencyQuote {
            vertex: u,
            prefix_len: i + 1,
            numerator: BigInt::from(i + 1),
            denominator: BigInt::from(w * ceil_div(prefix, c) as i128),
        };
        if best
            .as_ref()
            .is_none_or(|b| q.cmp_ratio(b) != Ordering::Less)
        {
            best = Some(q);
        }
    }
    Ok(best.expect("nonempty candidates"))
}

/// Greedy for the unsplittable model: each pick serves the first `k`
/// candidates of the most efficient vertex with fresh copies of it.
/// Multiplicities are recomputed from the final loads.
pub fn greedy_unsplittable(inst: &Instance) -> Result<GreedyOutcome> {
    inst.check_feasible()?;
    let mut state = GreedyState::new(inst);
    let mut trace = Trace::default();
    trace.residues.push(state.residue.clone());

    let mut iteration = 0;
    while state.undominated.iter().any(|&b| b) {
        iteration += 1;
        let remaining = state.undominated.iter().filter(|&&b| b).count();
        let quote = best_quote(inst.n(), |u| unsplit_efficiency(inst, &state, u).ok())
            .expect("feasible instance always has a quotable server");
        let u = quote.vertex;
        let chosen = &candidates(inst, &state, u)[..quote.prefix_len];
        let mut load = 0;
        for &v in chosen {
            state.assignment.add(v, u, state.demand[v]);
            load += state.demand[v];
            state.undominated[v] = false;
            state.residue[v] = 0;
        }
        let cost = inst.weight(u) * ceil_div(load, inst.capacity(u));
        state.running_cost += cost;
        trace.steps.push(TraceStep {
            iteration,
            vertex: u,
            prefix_len: quote.prefix_len,
            cost,
            phase: Phase::First,
            remaining,
        });
        trace.residues.push(state.residue.clone());
    }

    let solution = minimum_multiplicities(inst, state.assignment)?;
    Ok(GreedyOutcome {
        solution,
        trace,
        pre_pass_cost: 0,
    })
}
