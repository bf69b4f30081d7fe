//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by the triple-system, domain, and harness layers.
#[derive(Error, Debug, Clone)]
pub enum Error {
    /// A vector or matrix did not match the ambient dimension of the system.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A precondition on the inputs was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Inputs sit in a numerically ambiguous region (e.g. two spectral values
    /// straddle a merge threshold, or a coefficient lies in the boundary
    /// dead zone). The payload describes the ambiguity.
    #[error("degeneracy: {0}")]
    Degeneracy(String),

    /// A numerical routine left its validated regime (ill-conditioned solve,
    /// eigenvalue outside its admissible cluster, ...).
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// A bounded search exhausted its budget without a certified hit.
    #[error("not found: {0}")]
    NotFound(String),
}

pub type Result<T> = std::result::Result<T, Error>;
