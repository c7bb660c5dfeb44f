#![allow(dead_code)]

use capdom::baker::grid;
use capdom::{random_instance, Instance, RandomParams, VertexAttrs};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random instance whose attributes may be zero.
pub fn mixed(n: usize, p: f64, max: i64, seed: u64) -> Instance {
    let params = RandomParams {
        n,
        edge_prob: p,
        weight: 0..=max,
        capacity: 0..=max,
        demand: 0..=max,
    };
    random_instance(&params, seed)
}

/// Random instance with unit weights.
pub fn unit_weight(n: usize, p: f64, max: i64, seed: u64) -> Instance {
    let params = RandomParams {
        n,
        edge_prob: p,
        weight: 1..=1,
        capacity: 1..=max,
        demand: 0..=max,
    };
    random_instance(&params, seed)
}

pub fn random_attrs(rng: &mut ChaCha8Rng, max: i64) -> VertexAttrs {
    VertexAttrs {
        weight: rng.random_range(0..=max),
        capacity: rng.random_range(1..=max),
        demand: rng.random_range(0..=max),
    }
}

pub fn random_grid(rows: usize, cols: usize, max: i64, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let attrs: Vec<VertexAttrs> = (0..rows * cols).map(|_| random_attrs(&mut rng, max)).collect();
    grid(rows, cols, |v| attrs[v])
}

/// Cycle on `n` vertices with a random set of non-crossing chords.
pub fn random_outerplanar(n: usize, max: i64, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let attrs: Vec<VertexAttrs> = (0..n).map(|_| random_attrs(&mut rng, max)).collect();
    let mut edges: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    if n >= 3 {
        edges.push((0, n - 1));
    }
    let mut stack = vec![(0, n.saturating_sub(1))];
    while let Some((i, j)) = stack.pop() {
        if j < i + 2 {
            continue;
        }
        let m = rng.random_range(i + 1..j);
        for (a, b) in [(i, m), (m, j)] {
            if b > a + 1 && !(a == 0 && b == n - 1) && rng.random_bool(0.6) {
                edges.push((a, b));
            }
        }
        stack.push((i, m));
        stack.push((m, j));
    }
    Instance::new(attrs, edges).expect("valid outerplanar instance")
}
