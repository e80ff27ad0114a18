use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian: max asymmetry {max_asymmetry:e}")]
    NotHermitian { max_asymmetry: f64 },

    #[error("form is not positive definite: smallest eigenvalue {min_eigenvalue:e}")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("point outside chart domain (distance to boundary {distance_to_boundary:e})")]
    Domain { distance_to_boundary: f64 },

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("zero vector")]
    ZeroVector,

    #[error("vector not in subspace: projection residual {residual:e}")]
    NotInSubspace { residual: f64 },

    #[error("vectors not orthogonal: |<X,Y>| = {inner:e}")]
    NotOrthogonal { inner: f64 },

    #[error("degenerate instance: {0}")]
    Degenerate(String),

    #[error("hypothesis not met: {0}")]
    Precondition(String),

    #[error("empty sample region")]
    EmptyRegion,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("no convergence: {0}")]
    NoConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
