use thiserror::Error;

/// Errors raised by the factorization, preprocessing and solver routines.
#[derive(Debug, Error)]
pub enum IldlError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("index ({row}, {col}) out of range for dimension {n}")]
    IndexOutOfRange { row: usize, col: usize, n: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("skew-symmetric factorization needs an even dimension, got {0}")]
    OddSkewDimension(usize),

    #[error("matrix kind mismatch: {0}")]
    KindMismatch(&'static str),

    #[error("row {0} is identically zero; the matrix has no support")]
    ZeroRow(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),

    #[error("preconditioner is not positive definite (r^T M^-1 r = {0:e})")]
    IndefinitePreconditioner(f64),
}

pub type Result<T> = std::result::Result<T, IldlError>;
