//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix must be nonempty, got {rows}x{cols}")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("entry count {got} does not match {rows}x{cols}")]
    BadEntryCount { rows: usize, cols: usize, got: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("entry at ({row}, {col}) is {value}, expected 0 or 1")]
    NonBooleanEntry { row: usize, col: usize, value: f64 },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("Jacobi iteration did not converge within {0} sweeps")]
    ConvergenceFailure(usize),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("matrix is not positive semidefinite (eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("state vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("decomposition does not match protocol: {0}")]
    DecompositionMismatch(String),

    #[error("decomposition has zero row or column width")]
    DegenerateWidth,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("no seed yielded a valid protocol after {0} attempts")]
    ValidationExhausted(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("certified lower bound {lower} exceeds best upper bound {upper}")]
    Consistency { lower: f64, upper: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
