//! Solvers for the soft-capacitated domination problem on vertex-weighted
//! graphs.
//!
//! Every vertex `u` has a cost `w(u)`, a capacity `c(u)` and a demand `d(u)`.
//! A solution buys `x(u)` copies of each vertex and assigns every vertex's
//! demand to servers in its closed neighborhood so that no server receives
//! more than `c(u)·x(u)`. The objective is `Σ w(u)·x(u)`.
//!
//! The crate provides:
//!
//! * [`greedy`]: logarithmic-ratio greedy algorithms for the unsplittable,
//!   splittable and unit-weight splittable models.
//! * [`oracle`]: exact branch-and-bound solvers for small instances.
//! * [`treewidth`] and [`dp`]: tree decompositions and an exact dynamic
//!   program over nice tree decompositions.
//! * [`baker`]: the shifting scheme for planar graphs built on the DP.
//! * [`hardness`]: the multicolor-clique gadget generator and its verifiers.
//! * [`bench`]: seeded greedy-versus-optimum batches with CSV output.

pub mod baker;
pub mod bench;
pub mod dp;
pub mod error;
pub mod greedy;
pub mod hardness;
pub mod instance;
pub mod oracle;
pub mod random;
pub mod solution;
pub mod treewidth;
pub mod verify;

pub use baker::{baker_solve, BakerOutcome};
pub use dp::{solve_dp, solve_td};
pub use error::{Error, Result};
pub use greedy::{greedy_splittable, greedy_unsplittable, greedy_unweighted_splittable, GreedyOutcome};
pub use instance::{Instance, VertexAttrs};
pub use oracle::{exact, exact_splittable, exact_unsplittable, SearchBudget};
pub use random::{random_instance, RandomParams};
pub use solution::{minimum_multiplicities, Assignment, DemandModel, Solution};
pub use treewidth::{heuristic_decomposition, make_nice, NiceTreeDecomposition, TreeDecomposition};
pub use verify::{verify_solution, Report, Violation};
