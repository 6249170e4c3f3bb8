use thiserror::Error;

/// Errors raised when inputs violate a solver or matrix contract.
///
/// Iterative non-convergence is not an error: solvers report it through
/// [`SolveStatus`](crate::SolveStatus) alongside a best-effort iterate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index ({i}, {j}) out of range for dimension {n}")]
    IndexOutOfRange { i: usize, j: usize, n: usize },
    #[error("conflicting values for symmetric entries ({i}, {j})")]
    AsymmetricInput { i: usize, j: usize },
    #[error("diagonal entry {0} is missing or zero")]
    MissingDiagonal(usize),
    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is singular to working precision (pivot column {column})")]
    SingularMatrix { column: usize },
    #[error("optimal SOR weight undefined: Jacobi spectral radius {rho} >= 1")]
    OmegaUndefined { rho: f64 },
    #[error("solver did not converge: {0}")]
    NotConverged(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
