use thiserror::Error;

use crate::solution::Solution;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("attribute sums overflow 64-bit arithmetic: {0}")]
    Overflow(&'static str),

    #[error("vertex {} has zero capacity but is assigned demand", .0 + 1)]
    ZeroCapacityServer(usize),

    #[error("vertex {} has demand but no closed neighbor with positive capacity", .0 + 1)]
    Infeasible(usize),

    #[error("vertex {} has weight {weight}; the unweighted algorithm needs unit weights", .vertex + 1)]
    NotUnweighted { vertex: usize, weight: i64 },

    #[error("search budget of {nodes} nodes exhausted")]
    BudgetExhausted {
        nodes: u64,
        incumbent: Option<Box<Solution>>,
    },

    #[error("no solution of cost at most {0} exists")]
    AboveBound(i64),

    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("dynamic programming table became empty after forgetting vertex {}", .0 + 1)]
    EmptyTable(usize),

    #[error("graph is disconnected: vertex {} unreachable from the root", .0 + 1)]
    Disconnected(usize),

    #[error("consumer {} is served in more than one slice", .0 + 1)]
    MergeConflict(usize),

    #[error("invalid multicolor clique instance: {0}")]
    InvalidClique(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn parse(line: usize, reason: impl Into<String>) -> Self {
        Error::Parse {
            line,
            reason: reason.into(),
        }
    }
}
