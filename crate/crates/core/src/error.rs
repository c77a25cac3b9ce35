//! Error type shared by all modules.

use thiserror::Error;

/// Errors reported by the design-optimization routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A matrix expected to be self-adjoint fails the symmetry tolerance.
    #[error("matrix is not Hermitian: max deviation {max_deviation:.3e} exceeds {tolerance:.1e}")]
    NonHermitianInput { max_deviation: f64, tolerance: f64 },

    /// Operands have incompatible shapes.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A weight vector violates its contract (positivity, ordering, totals).
    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    /// Problem data violates a structural invariant.
    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    /// A required majorization relation does not hold.
    #[error("majorization violated: {0}")]
    MajorizationViolated(String),

    /// A vector collapsed to zero during a retraction.
    #[error("degenerate vector at joint index {0}: norm vanished before rescaling")]
    DegenerateVector(usize),

    /// A state the underlying theory rules out was reached; indicates a bug.
    #[error("internal contradiction: {0}")]
    InternalContradiction(String),
}
