//! Exact solvers for small instances.
//!
//! These are the ground truth for approximation-ratio and DP tests. A search
//! that runs out of budget fails loudly with [`Error::BudgetExhausted`]
//! instead of passing off its incumbent as optimal.
//!
//! [`Error::BudgetExhausted`]: crate::Error::BudgetExhausted

mod flow;
mod split;
mod unsplit;

pub use flow::feasibility_flow;
pub use split::exact_splittable;
pub use unsplit::exact_unsplittable;

use crate::error::Result;
use crate::instance::Instance;
use crate::solution::{DemandModel, Solution};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Search nodes expanded before giving up.
    pub max_nodes: u64,
    /// Only solutions of at most this cost are searched for. When nothing
    /// qualifies the search reports [`crate::Error::AboveBound`].
    pub upper_bound: Option<i64>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 50_000_000,
            upper_bound: None,
        }
    }
}

impl SearchBudget {
    pub fn with_max_nodes(max_nodes: u64) -> Self {
        SearchBudget {
            max_nodes: max_nodes.max(1),
            upper_bound: None,
        }
    }
}

pub fn exact(inst: &Instance, model: DemandModel, budget: SearchBudget) -> Result<Solution> {
    match model {
        DemandModel::Unsplittable => exact_unsplittable(inst, budget),
        DemandModel::Splittable => exact_splittable(inst, budget),
    }
}

/// `a < b` in lexicographic order; equal-length slices.
fn lex_less(a: &[i64], b: &[i64]) -> bool {
    a.iter().lt(b.iter())
}
