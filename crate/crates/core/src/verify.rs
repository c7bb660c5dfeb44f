//! Feasibility check shared by every solver and by the `verify` command.

use std::fmt;

use crate::instance::Instance;
use crate::solution::{DemandModel, Solution};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `Σ f(v, ·) < d(v)`.
    Demand { vertex: usize, served: i64, demand: i64 },
    /// `Σ f(·, v) > c(v)·x(v)`.
    Capacity { vertex: usize, load: i64, capacity: i64 },
    /// Stated cost differs from `Σ w(u)·x(u)`.
    Cost { stated: i64, actual: i64 },
    /// Server outside the consumer's closed neighborhood.
    NotNeighbor { consumer: usize, server: usize },
    NegativeMultiplicity { vertex: usize },
    /// Multiplicity vector length differs from the vertex count.
    Shape { expected: usize, found: usize },
    /// Unsplittable model: consumer not served by a single full triple.
    Split { vertex: usize, triples: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::Demand { vertex, served, demand } => write!(
                f,
                "demand at vertex {}: served {served} < demand {demand}",
                vertex + 1
            ),
            Violation::Capacity { vertex, load, capacity } => write!(
                f,
                "capacity at vertex {}: load {load} > capacity {capacity}",
                vertex + 1
            ),
            Violation::Cost { stated, actual } => {
                write!(f, "cost: stated {stated} but multiplicities cost {actual}")
            }
            Violation::NotNeighbor { consumer, server } => write!(
                f,
                "assignment ({}, {}): server not in closed neighborhood",
                consumer + 1,
                server + 1
            ),
            Violation::NegativeMultiplicity { vertex } => {
                write!(f, "multiplicity at vertex {} is negative", vertex + 1)
            }
            Violation::Shape { expected, found } => {
                write!(f, "multiplicity vector has {found} entries, expected {expected}")
            }
            Violation::Split { vertex, triples } => write!(
                f,
                "unsplittable demand at vertex {}: {triples} triple(s) instead of one full triple",
                vertex + 1
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn is_pass(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_pass() {
            return writeln!(f, "PASS");
        }
        writeln!(f, "FAIL")?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

pub fn verify_solution(inst: &Instance, sol: &Solution, model: DemandModel) -> Report {
    let n = inst.n();
    let mut violations = Vec::new();
    if sol.multiplicity.len() != n {
        violations.push(Violation::Shape {
            expected: n,
            found: sol.multiplicity.len(),
        });
        return Report { violations };
    }

    let mut served = vec![0i64; n];
    let mut load = vec![0i64; n];
    let mut triples = vec![0usize; n];
    let mut full = vec![false; n];
    for (c, s, a) in sol.assignment.triples() {
        if c >= n || s >= n {
            violations.push(Violation::NotNeighbor { consumer: c, server: s });
            continue;
        }
        if !inst.can_serve(s, c) {
            violations.push(Violation::NotNeighbor { consumer: c, server: s });
        }
        served[c] += a;
        load[s] += a;
        triples[c] += 1;
        full[c] = a == inst.demand(c);
    }

    for v in 0..n {
        if served[v] < inst.demand(v) {
            violations.push(Violation::Demand {
                vertex: v,
                served: served[v],
                demand: inst.demand(v),
            });
        }
    }
    for (v, &x) in sol.multiplicity.iter().enumerate() {
        if x < 0 {
            violations.push(Violation::NegativeMultiplicity { vertex: v });
        }
        let capacity = inst.capacity(v) as i128 * x as i128;
        if load[v] as i128 > capacity {
            violations.push(Violation::Capacity {
                vertex: v,
                load: load[v],
                capacity: capacity.clamp(i64::MIN as i128, i64::MAX as i128) as i64,
            });
        }
    }
    let actual = sol
        .multiplicity
        .iter()
        .enumerate()
        .map(|(u, &x)| inst.weight(u) as i128 * x as i128)
        .sum::<i128>();
    if actual != sol.cost as i128 {
        violations.push(Violation::Cost {
            stated: sol.cost,
            actual: actual.clamp(i64::MIN as i128, i64::MAX as i128) as i64,
        });
    }
    if model == DemandModel::Unsplittable {
        for v in 0..n {
            let ok = if inst.demand(v) == 0 {
                triples[v] == 0
            } else {
                triples[v] == 1 && full[v]
            };
            if !ok {
                violations.push(Violation::Split {
                    vertex: v,
                    triples: triples[v],
                });
            }
        }
    }
    Report { violations }
}
