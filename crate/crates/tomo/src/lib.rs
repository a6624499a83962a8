//! Maximum-likelihood quantum state tomography by projected gradient descent.
//!
//! The crate simulates photon-counting tomography experiments (random states,
//! product measurement ensembles, Poisson clicks) and reconstructs the state
//! from the counts by minimizing a negative log-likelihood over the physical
//! set of density matrices. Five solvers share one interface: plain projected
//! gradient descent, a momentum variant (PGDM), an accelerated variant
//! (FISTA), a monotone backtracking variant (PGDB), and the multiplicative
//! diluted iterative algorithm (DIA).
//!
//! The `examples/` directory walks through each capability; the `tomo` binary
//! exposes the same pipeline as `simulate`, `reconstruct`, and `bench`
//! subcommands with file-based inputs and outputs.

pub mod cli;
mod counters;
mod error;
pub mod likelihood;
pub mod metrics;
pub mod projection;
pub mod simulate;
pub mod solvers;
mod types;

pub use counters::{op_counts, reset_op_counts, OpCounts};
pub use error::{Error, Result};
pub use types::{
    estimate_scale, forward_probabilities, ClickVector, DensityMatrix, MeasurementEnsemble,
    ProbabilityVector,
};
