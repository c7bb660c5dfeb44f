//! Greedy logarithmic approximations.
//!
//! All three algorithms repeatedly pick the server with the best
//! coverage-per-cost ratio. Ratios are exact fractions compared by
//! cross-multiplication; ties go to the lowest vertex id, and within a vertex
//! to the longest prefix.

mod split;
mod unsplit;
mod unweighted;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::instance::Instance;
use crate::solution::{Assignment, Solution};

pub use split::{greedy_splittable, split_efficiency};
pub use unsplit::{greedy_unsplittable, unsplit_efficiency};
pub use unweighted::{greedy_unweighted_splittable, unweighted_pre_pass};

/// Mutable bookkeeping shared by the greedy runs.
#[derive(Clone, Debug)]
pub struct GreedyState {
    /// Demands the efficiency is measured against. Equal to the instance
    /// demands except after the unit-weight pre-pass.
    pub demand: Vec<i64>,
    pub residue: Vec<i64>,
    /// Unsplittable model: vertices that still await their single assignment.
    pub undominated: Vec<bool>,
    /// Servers that partially served each vertex since its last reset.
    pub map_sets: Vec<BTreeSet<usize>>,
    pub assignment: Assignment,
    pub running_cost: i64,
}

impl GreedyState {
    pub fn new(inst: &Instance) -> Self {
        let demand: Vec<i64> = (0..inst.n()).map(|v| inst.demand(v)).collect();
        GreedyState {
            residue: demand.clone(),
            undominated: demand.iter().map(|&d| d > 0).collect(),
            map_sets: vec![BTreeSet::new(); inst.n()],
            demand,
            assignment: Assignment::new(),
            running_cost: 0,
        }
    }

    /// `Σ rd(v)/d(v)` over vertices with positive demand.
    pub fn effectiveness(&self) -> BigRational {
        self.residue
            .iter()
            .zip(&self.demand)
            .filter(|(_, &d)| d > 0)
            .map(|(&rd, &d)| BigRational::new(rd.into(), d.into()))
            .fold(BigRational::zero(), |acc, x| acc + x)
    }

    pub(crate) fn unsatisfied(&self) -> usize {
        self.residue.iter().filter(|&&r| r > 0).count()
    }
}

/// Coverage-per-cost of serving a prefix of a vertex's sorted candidates.
///
/// The ratio is `numerator / denominator`, kept unreduced for the
/// unsplittable model. A zero denominator marks a zero-weight server, whose
/// ratio compares above every finite one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EfficiencyQuote {
    pub vertex: usize,
    pub prefix_len: usize,
    pub numerator: BigInt,
    pub denominator: BigInt,
}

impl EfficiencyQuote {
    pub fn cmp_ratio(&self, other: &Self) -> Ordering {
        (&self.numerator * &other.denominator).cmp(&(&other.numerator * &self.denominator))
    }

    /// The ratio as a reduced fraction; `None` for a zero-weight server.
    pub fn ratio(&self) -> Option<BigRational> {
        (!self.denominator.is_zero())
            .then(|| BigRational::new(self.numerator.clone(), self.denominator.clone()))
    }
}

/// Why a vertex has no quote in the current round.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Unquoted {
    ZeroCapacity,
    NoCandidates,
}

/// Best quote over all vertices: highest ratio, lowest id on ties.
fn best_quote<T, F>(n: usize, mut quote: F) -> Option<T>
where
    F: FnMut(usize) -> Option<T>,
    T: AsRef<EfficiencyQuote>,
{
    let mut best: Option<T> = None;
    for u in 0..n {
        if let Some(q) = quote(u) {
            let better = match &best {
                None => true,
                Some(b) => q.as_ref().cmp_ratio(b.as_ref()) == Ordering::Greater,
            };
            if better {
                best = Some(q);
            }
        }
    }
    best
}

impl AsRef<EfficiencyQuote> for EfficiencyQuote {
    fn as_ref(&self) -> &EfficiencyQuote {
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    /// Unit-weight pre-pass that ships whole copies to the largest neighbor.
    PrePass,
    /// The efficiency-driven pick.
    First,
    /// Completion of a vertex left partially served.
    Second,
}

impl Phase {
    pub fn code(self) -> u8 {
        match self {
            Phase::PrePass => 0,
            Phase::First => 1,
            Phase::Second => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    /// 1-based; pre-pass steps use 0.
    pub iteration: usize,
    pub vertex: usize,
    /// Prefix length `k` or `j_u` for first choices, the completed vertex's
    /// partial-server count for second choices, 1 for pre-pass shipments.
    pub prefix_len: usize,
    /// Weight of the copies bought by this step, counted as fresh copies.
    pub cost: i64,
    pub phase: Phase,
    /// Vertices still unsatisfied when the step started.
    pub remaining: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
    /// Residue demands at every iteration boundary, starting with the state
    /// before the first iteration.
    pub residues: Vec<Vec<i64>>,
}

impl Trace {
    pub fn iterations(&self) -> usize {
        self.residues.len().saturating_sub(1)
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(
                f,
                "t {} {} {} {} {}",
                s.iteration,
                s.vertex + 1,
                s.prefix_len,
                s.cost,
                s.phase.code()
            )?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct GreedyOutcome {
    pub solution: Solution,
    pub trace: Trace,
    /// Cost of the unit-weight pre-pass (zero for the other algorithms).
    pub pre_pass_cost: i64,
}

/// `H_n = Σ_{j=1..n} 1/j` as an exact fraction.
pub fn harmonic(n: usize) -> BigRational {
    (1..=n).fold(BigRational::zero(), |acc, j| {
        acc + BigRational::new(BigInt::one(), BigInt::from(j))
    })
}
