//! Seeded random instances.

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::{Instance, VertexAttrs};

#[derive(Clone, Debug, PartialEq)]
pub struct RandomParams {
    pub n: usize,
    pub edge_prob: f64,
    pub weight: RangeInclusive<i64>,
    pub capacity: RangeInclusive<i64>,
    pub demand: RangeInclusive<i64>,
}

impl RandomParams {
    /// Attributes uniform in `[1, max]`.
    pub fn new(n: usize, edge_prob: f64, max_w: i64, max_c: i64, max_d: i64) -> Self {
        RandomParams {
            n,
            edge_prob,
            weight: 1..=max_w.max(1),
            capacity: 1..=max_c.max(1),
            demand: 1..=max_d.max(1),
        }
    }
}

/// Deterministic for a fixed `(params, seed)`. Any vertex left with demand but
/// no positive-capacity closed neighbor gets capacity 1.
pub fn random_instance(params: &RandomParams, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = params.n;
    let mut attrs: Vec<VertexAttrs> = (0..n)
        .map(|_| VertexAttrs {
            weight: rng.random_range(params.weight.clone()),
            capacity: rng.random_range(params.capacity.clone()),
            demand: rng.random_range(params.demand.clone()),
        })
        .collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(params.edge_prob.clamp(0.0, 1.0)) {
                edges.push((u, v));
            }
        }
    }
    let mut has_server = attrs.iter().map(|a| a.capacity > 0).collect::<Vec<_>>();
    for &(u, v) in &edges {
        has_server[u] |= attrs[v].capacity > 0;
        has_server[v] |= attrs[u].capacity > 0;
    }
    for (a, ok) in attrs.iter_mut().zip(has_server) {
        if a.demand > 0 && !ok {
            a.capacity = 1;
        }
    }
    Instance::new(attrs, edges).expect("random instance within 64-bit budget")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex_is_feasible() {
        for seed in 0..20 {
            let inst = random_instance(&RandomParams::new(1, 0.5, 3, 3, 3), seed);
            assert_eq!(inst.n(), 1);
            assert_eq!(inst.infeasible_vertex(), None);
        }
    }

    #[test]
    fn deterministic() {
        let p = RandomParams::new(12, 0.3, 5, 4, 4);
        assert_eq!(random_instance(&p, 99), random_instance(&p, 99));
        assert_ne!(random_instance(&p, 99), random_instance(&p, 100));
    }

    #[test]
    fn post_pass_restores_feasibility() {
        let p = RandomParams {
            n: 50,
            edge_prob: 0.1,
            weight: 1..=5,
            capacity: 0..=2,
            demand: 0..=4,
        };
        let inst = random_instance(&p, 7);
        for v in 0..inst.n() {
            if inst.demand(v) > 0 {
                assert!(inst.closed_neighborhood(v).iter().any(|&u| inst.capacity(u) > 0));
            }
        }
        let plain = random_instance(&RandomParams::new(50, 0.1, 5, 4, 4), 7);
        assert_eq!(plain.infeasible_vertex(), None);
    }
}
