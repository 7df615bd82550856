//! Exact community recovery in the symmetric stochastic block model with the
//! projected power method.
//!
//! The pieces, bottom up:
//!
//! - [`sbm`]: model parameters, planted partitions and graph sampling.
//! - [`assign`]: exact projection of a score matrix onto clusterings with
//!   fixed group sizes, its optimality certificate and test oracles.
//! - [`ppm`]: the iteration `H <- T(A H)` with its stopping rules.
//! - [`init`]: random and spectral starting points.
//! - [`eval`]: misclassification counts up to relabelling.
//! - [`bench`]: graph/label parsers and the experiment drivers behind the CLI.

pub mod adjacency;
pub mod assign;
pub mod bench;
pub mod clustering;
pub mod error;
pub mod eval;
pub mod init;
pub mod ppm;
pub mod rng;
pub mod sbm;

pub use adjacency::SparseAdjacency;
pub use assign::{
    project, project_k2, verify_certificate, DualPotential, ProjectionResult, ScoreMatrix,
};
pub use clustering::{balanced_capacities, Clustering};
pub use error::{Error, Result};
pub use eval::{align, exact_recovery, Alignment};
pub use ppm::{
    power_step, run, run_observed, score, theorem_budget, RunConfig, RunResult, StopReason,
    Stopping,
};
pub use sbm::{logarithmic_rates, planted_truth, sample_graph, SbmParams};
