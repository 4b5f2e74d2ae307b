//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by construction, numerics, simulation, and I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// Hermiticity defect `max|A[i,j] - conj(A[j,i])|` exceeded the tolerance.
    #[error("matrix is not Hermitian (defect {0:.3e})")]
    NotHermitian(f64),

    /// A vector required to be unit-norm was not (`|norm - 1|` reported).
    #[error("vector is not normalized (deviation {0:.3e})")]
    NotNormalized(f64),

    /// Elimination hit a pivot below the singularity threshold.
    #[error("matrix is numerically singular (pivot {0:.3e})")]
    Singular(f64),

    /// An operation that needs a nonzero matrix was given all zeros.
    #[error("matrix is identically zero")]
    ZeroMatrix,

    /// A vector with zero norm cannot be normalized.
    #[error("vector has zero norm")]
    ZeroVector,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    /// `A Q_b A` vanished; the instance cannot support the new Hamiltonian pair.
    #[error("degenerate instance: |A Q_b A|_F below 1e-12")]
    DegenerateInstance,

    /// Rejection sampling exhausted its redraw budget.
    #[error("random instance generation failed after 1000 redraws")]
    GenerationFailed,

    /// Separator input whose top eigenvalue is not 1 within the guard tolerance.
    #[error("spectrum violation: top eigenvalue deviates from 1 by {0:.3e}")]
    SpectrumViolation(f64),

    /// Post-selection projected onto an (almost) zero-norm branch.
    #[error("projection annihilates the state")]
    ZeroProjection,

    #[error("problem too large: {0}")]
    TooLarge(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// A loaded file violates a structural invariant (Hermiticity, dims, ...).
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
