mod common;

use capdom::greedy::unweighted_pre_pass;
use capdom::oracle::feasibility_flow;
use capdom::treewidth::{decomposition_from_order, min_degree_order, min_fill_order, validate_nice};
use capdom::{
    exact, greedy_splittable, greedy_unsplittable, greedy_unweighted_splittable, heuristic_decomposition,
    make_nice, minimum_multiplicities, solve_td, verify_solution, Assignment, DemandModel, Instance, SearchBudget,
    VertexAttrs,
};
use common::{mixed, unit_weight};
use num_rational::BigRational;
use proptest::prelude::*;

fn opt(inst: &Instance, model: DemandModel) -> i64 {
    exact(inst, model, SearchBudget::default()).unwrap().cost
}

fn instance(max_n: usize, max: i64) -> impl Strategy<Value = Instance> {
    (1..=max_n, 0.0..0.7f64, any::<u64>()).prop_map(move |(n, p, seed)| mixed(n, p, max, seed))
}

fn unit_instance(max_n: usize, max: i64) -> impl Strategy<Value = Instance> {
    (1..=max_n, 0.0..0.7f64, any::<u64>()).prop_map(move |(n, p, seed)| unit_weight(n, p, max, seed))
}

/// Splittable feasibility by the supply–demand condition: every consumer
/// set's demand fits in the capacity bought in its closed neighborhood.
fn hall_feasible(inst: &Instance, x: &[i64]) -> bool {
    let n = inst.n();
    (1..1usize << n).all(|set| {
        let members: Vec<usize> = (0..n).filter(|v| set >> v & 1 == 1).collect();
        let demand: i64 = members.iter().map(|&v| inst.demand(v)).sum();
        let supply: i64 = (0..n)
            .filter(|&u| members.iter().any(|&v| inst.can_serve(u, v)))
            .map(|u| x[u] * inst.capacity(u))
            .sum();
        demand <= supply
    })
}

fn copies_cap(inst: &Instance, u: usize) -> i64 {
    let c = inst.capacity(u);
    if c == 0 {
        return 0;
    }
    let reach: i64 = inst.closed_neighborhood(u).iter().map(|&v| inst.demand(v)).sum();
    (reach + c - 1) / c
}

/// Exhaustive splittable optimum over multiplicity vectors.
fn brute_split(inst: &Instance) -> Option<i64> {
    let n = inst.n();
    let caps: Vec<i64> = (0..n).map(|u| copies_cap(inst, u)).collect();
    let mut x = vec![0i64; n];
    let mut best = None;
    loop {
        let cost: i64 = (0..n).map(|u| x[u] * inst.weight(u)).sum();
        if best.is_none_or(|b| cost < b) && hall_feasible(inst, &x) {
            best = Some(cost);
        }
        let mut i = 0;
        while i < n && x[i] == caps[i] {
            x[i] = 0;
            i += 1;
        }
        if i == n {
            return best;
        }
        x[i] += 1;
    }
}

/// Exhaustive unsplittable optimum over server choices.
fn brute_unsplit(inst: &Instance) -> Option<i64> {
    let n = inst.n();
    let consumers: Vec<usize> = (0..n).filter(|&v| inst.demand(v) > 0).collect();
    let options: Vec<Vec<usize>> = consumers
        .iter()
        .map(|&v| inst.closed_neighborhood(v).into_iter().filter(|&u| inst.capacity(u) > 0).collect())
        .collect();
    if options.iter().any(Vec::is_empty) {
        return None;
    }
    let mut pick = vec![0usize; consumers.len()];
    let mut best: Option<i64> = None;
    loop {
        let mut load = vec![0i64; n];
        for (j, &v) in consumers.iter().enumerate() {
            load[options[j][pick[j]]] += inst.demand(v);
        }
        let cost: i64 = (0..n)
            .filter(|&u| load[u] > 0)
            .map(|u| inst.weight(u) * ((load[u] + inst.capacity(u) - 1) / inst.capacity(u)))
            .sum();
        best = Some(best.map_or(cost, |b| b.min(cost)));
        let mut i = 0;
        while i < pick.len() && pick[i] + 1 == options[i].len() {
            pick[i] = 0;
            i += 1;
        }
        if i == pick.len() {
            return best;
        }
        pick[i] += 1;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn text_round_trip(inst in instance(10, 6)) {
        let back: Instance = inst.to_text().parse().unwrap();
        prop_assert_eq!(back, inst);
    }

    #[test]
    fn greedy_outputs_are_feasible_and_deterministic(inst in instance(10, 5)) {
        let a = greedy_unsplittable(&inst).unwrap();
        prop_assert!(verify_solution(&inst, &a.solution, DemandModel::Unsplittable).is_pass());
        let b = greedy_unsplittable(&inst).unwrap();
        prop_assert_eq!(&a.solution, &b.solution);
        prop_assert_eq!(&a.trace, &b.trace);

        let a = greedy_splittable(&inst).unwrap();
        prop_assert!(verify_solution(&inst, &a.solution, DemandModel::Splittable).is_pass());
        let b = greedy_splittable(&inst).unwrap();
        prop_assert_eq!(&a.solution, &b.solution);
        prop_assert_eq!(&a.trace, &b.trace);
    }

    #[test]
    fn minimum_multiplicities_are_minimal(inst in instance(8, 5)) {
        let sol = greedy_splittable(&inst).unwrap().solution;
        let again = minimum_multiplicities(&inst, sol.assignment.clone()).unwrap();
        prop_assert!(again.cost <= sol.cost);
        prop_assert!(verify_solution(&inst, &again, DemandModel::Splittable).is_pass());
        for u in 0..inst.n() {
            if again.multiplicity[u] > 0 {
                let mut fewer = again.clone();
                fewer.multiplicity[u] -= 1;
                fewer.cost -= inst.weight(u);
                prop_assert!(!verify_solution(&inst, &fewer, DemandModel::Splittable).is_pass());
            }
        }
    }

    #[test]
    fn splitting_never_costs_more(inst in instance(7, 4)) {
        let split = opt(&inst, DemandModel::Splittable);
        let unsplit = opt(&inst, DemandModel::Unsplittable);
        prop_assert!(split <= unsplit);
        prop_assert!(greedy_unsplittable(&inst).unwrap().solution.cost >= unsplit);
        prop_assert!(greedy_splittable(&inst).unwrap().solution.cost >= split);
    }

    #[test]
    fn flow_feasibility_matches_supply_condition(
        inst in instance(6, 3),
        xs in proptest::collection::vec(0i64..3, 6),
    ) {
        let x = &xs[..inst.n()];
        let flow = feasibility_flow(&inst, x);
        prop_assert_eq!(flow.is_some(), hall_feasible(&inst, x));
        if let Some(asg) = flow {
            let loads = asg.loads(inst.n());
            for u in 0..inst.n() {
                prop_assert!(loads[u] <= x[u] * inst.capacity(u));
            }
            prop_assert_eq!(asg.served(inst.n()), (0..inst.n()).map(|v| inst.demand(v)).collect::<Vec<_>>());
        }
    }

    #[test]
    fn effectiveness_halves_every_split_iteration(inst in instance(10, 6)) {
        let out = greedy_splittable(&inst).unwrap();
        let eff = |res: &[i64]| -> BigRational {
            res.iter()
                .enumerate()
                .filter(|&(v, _)| inst.demand(v) > 0)
                .map(|(v, &rd)| BigRational::new(rd.into(), inst.demand(v).into()))
                .sum()
        };
        let half = BigRational::new(1.into(), 2.into());
        for pair in out.trace.residues.windows(2) {
            prop_assert!(eff(&pair[0]) - eff(&pair[1]) >= half);
        }
        for res in &out.trace.residues {
            for (v, &rd) in res.iter().enumerate() {
                prop_assert!(rd == 0 || rd >= (inst.demand(v) + 1) / 2);
            }
        }
    }

    #[test]
    fn unweighted_pre_pass_leaves_residue_below_capacity(inst in unit_instance(9, 8)) {
        let (state, g, cost, _) = unweighted_pre_pass(&inst);
        for u in 0..inst.n() {
            prop_assert!(inst.can_serve(g[u], u));
            prop_assert!(state.demand[u] < inst.capacity(g[u]).max(1) || inst.capacity(g[u]) == 0);
        }
        prop_assert!(cost <= opt(&inst, DemandModel::Splittable));
        let full = greedy_unweighted_splittable(&inst).unwrap();
        prop_assert_eq!(full.pre_pass_cost, cost);
    }

    #[test]
    fn nice_form_keeps_width(inst in instance(10, 3)) {
        let td = heuristic_decomposition(&inst);
        let ntd = make_nice(&td).unwrap();
        prop_assert_eq!(ntd.width(), td.width());
        prop_assert!(validate_nice(&inst, &ntd).is_pass());
    }

    #[test]
    fn dp_cost_independent_of_decomposition(inst in instance(9, 3)) {
        for model in [DemandModel::Unsplittable, DemandModel::Splittable] {
            let a = make_nice(&decomposition_from_order(&inst, &min_fill_order(&inst))).unwrap();
            let b = make_nice(&decomposition_from_order(&inst, &min_degree_order(&inst))).unwrap();
            let ca = solve_td(&inst, &a, model).unwrap().cost;
            let cb = solve_td(&inst, &b, model).unwrap().cost;
            prop_assert_eq!(ca, cb);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn oracle_matches_exhaustive_search(inst in instance(5, 2)) {
        prop_assert_eq!(Some(opt(&inst, DemandModel::Splittable)), brute_split(&inst));
        prop_assert_eq!(Some(opt(&inst, DemandModel::Unsplittable)), brute_unsplit(&inst));
    }

    /// Each unsplittable pick pays at most its share of the residual optimum:
    /// `S_j · n_j ≤ k_j · OPT_j`, where `OPT_j` is the optimum of the instance
    /// restricted to the still-undominated demands.
    #[test]
    fn unsplit_steps_pay_their_share(inst in instance(7, 4)) {
        let out = greedy_unsplittable(&inst).unwrap();
        for step in &out.trace.steps {
            let residue = &out.trace.residues[step.iteration - 1];
            let residual = Instance::new(
                (0..inst.n())
                    .map(|v| VertexAttrs { demand: residue[v], ..inst.attrs(v) })
                    .collect(),
                inst.edges(),
            )
            .unwrap();
            let opt_j = opt(&residual, DemandModel::Unsplittable);
            let n_j = residue.iter().filter(|&&r| r > 0).count() as i64;
            prop_assert_eq!(n_j, step.remaining as i64);
            prop_assert!(step.cost * n_j <= step.prefix_len as i64 * opt_j,
                "step {:?}: opt_j {}", step, opt_j);
        }
    }
}

#[test]
fn empty_assignment_needs_no_copies() {
    let inst: Instance = "p capdom 2 1\nv 1 3 2 0\nv 2 1 1 0\ne 1 2\n".parse().unwrap();
    let sol = minimum_multiplicities(&inst, Assignment::new()).unwrap();
    assert_eq!((sol.cost, sol.multiplicity), (0, vec![0, 0]));
}
