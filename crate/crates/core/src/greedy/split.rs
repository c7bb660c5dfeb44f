use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{best_quote, EfficiencyQuote, GreedyOutcome, GreedyState, Phase, Trace, TraceStep, Unquoted};
use crate::error::Result;
use crate::instance::Instance;
use crate::solution::{ceil_div, minimum_multiplicities};

/// A quote together with the candidate order it was computed on.
pub(super) struct SplitPlan {
    pub quote: EfficiencyQuote,
    pub candidates: Vec<usize>,
}

impl AsRef<EfficiencyQuote> for SplitPlan {
    fn as_ref(&self) -> &EfficiencyQuote {
        &self.quote
    }
}

/// Unsatisfied closed neighbors of `u`, by original demand then id.
fn candidates(inst: &Instance, state: &GreedyState, u: usize) -> Vec<usize> {
    let mut c: Vec<usize> = inst
        .closed_neighborhood(u)
        .into_iter()
        .filter(|&v| state.residue[v] > 0)
        .collect();
    c.sort_by_key(|&v| (state.demand[v], v));
    c
}

pub(super) fn plan(
    inst: &Instance,
    state: &GreedyState,
    u: usize,
) -> std::result::Result<SplitPlan, Unquoted> {
    let cap = inst.capacity(u);
    if cap == 0 {
        return Err(Unquoted::ZeroCapacity);
    }
    let cands = candidates(inst, state, u);
    if cands.is_empty() {
        return Err(Unquoted::NoCandidates);
    }
    // j_u: longest prefix whose residues fit in one copy
    let mut used = 0i64;
    let mut j = 0;
    let mut covered = BigRational::zero();
    while j < cands.len() && used + state.residue[cands[j]] <= cap {
        let v = cands[j];
        used += state.residue[v];
        covered += BigRational::new(state.residue[v].into(), state.demand[v].into());
        j += 1;
    }
    if j < cands.len() {
        covered += BigRational::new((cap - used).into(), state.demand[cands[j]].into());
    }
    let quote = EfficiencyQuote {
        vertex: u,
        prefix_len: j,
        numerator: covered.numer().clone(),
        denominator: covered.denom() * BigInt::from(inst.weight(u)),
    };
    Ok(SplitPlan {
        quote,
        candidates: cands,
    })
}

/// `(X(u) + Y(u)) / w(u)`: effectiveness fully covered by one copy of `u`
/// plus the fraction of the next candidate that the leftover capacity covers.
pub fn split_efficiency(
    inst: &Instance,
    state: &GreedyState,
    u: usize,
) -> std::result::Result<EfficiencyQuote, Unquoted> {
    plan(inst, state, u).map(|p| p.quote)
}

/// Serves the chosen plan with fresh copies of its vertex and returns the
/// weight bought. Shared with the unit-weight variant, which never reaches the
/// multi-copy branch because its demands fit in one copy of the best server.
pub(super) fn apply_first_choice(
    inst: &Instance,
    state: &mut GreedyState,
    plan: &SplitPlan,
    multi_copy: bool,
) -> i64 {
    let u = plan.quote.vertex;
    let cap = inst.capacity(u);
    let j = plan.quote.prefix_len;
    let cands = &plan.candidates;
    if j == 0 && multi_copy {
        let v = cands[0];
        let r = state.residue[v];
        assert!(r > cap, "empty prefix implies the first residue exceeds one copy");
        let copies = r / cap;
        state.assignment.add(v, u, copies * cap);
        state.residue[v] -= copies * cap;
        state.map_sets[v] = [u].into();
        return inst.weight(u) * copies;
    }
    let mut used = 0;
    for &v in &cands[..j] {
        used += state.residue[v];
        state.assignment.add(v, u, state.residue[v]);
        state.residue[v] = 0;
    }
    if j < cands.len() && cap > used {
        let v = cands[j];
        state.assignment.add(v, u, cap - used);
        state.residue[v] -= cap - used;
        state.map_sets[v].insert(u);
    }
    inst.weight(u)
}

/// Greedy for the weighted splittable model.
///
/// Each iteration makes the efficiency pick, then completes any vertex whose
/// residue fell below half its demand by doubling what its partial servers
/// already carry for it. Multiplicities come from the final loads.
pub fn greedy_splittable(inst: &Instance) -> Result<GreedyOutcome> {
    inst.check_feasible()?;
    let mut state = GreedyState::new(inst);
    let mut trace = Trace::default();
    trace.residues.push(state.residue.clone());

    let mut iteration = 0;
    while state.residue.iter().any(|&r| r > 0) {
        iteration += 1;
        let remaining = state.unsatisfied();
        let plan = best_quote(inst.n(), |u| plan(inst, &state, u).ok())
            .expect("feasible instance always has a quotable server");
        let cost = apply_first_choice(inst, &mut state, &plan, true);
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
            if rd == 0 || 2 * rd >= state.demand[v] {
                continue;
            }
            let remaining = state.unsatisfied();
            let mut extra = 0;
            let mut cost = 0;
            for &s in &state.map_sets[v] {
                let f = state.assignment.get(v, s);
                state.assignment.set(v, s, 2 * f);
                extra += f;
                cost += inst.weight(s) * ceil_div(f, inst.capacity(s));
            }
            assert!(extra >= rd, "doubling must complete vertex {}", v + 1);
            state.residue[v] = 0;
            state.running_cost += cost;
            trace.steps.push(TraceStep {
                iteration,
                vertex: v,
                prefix_len: state.map_sets[v].len(),
                cost,
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
        pre_pass_cost: 0,
    })
}
