use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("coin matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("zero vector cannot be normalized")]
    ZeroVector,
    #[error("not enough usable points for a fit ({0} < 5)")]
    TooFewPoints(usize),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
