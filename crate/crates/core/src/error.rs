use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max asymmetry {asymmetry:e}")]
    NotHermitian { asymmetry: f64 },
    #[error("vectors are numerically dependent: smallest Gram eigenvalue {min_eigenvalue:e}")]
    RankDeficient { min_eigenvalue: f64 },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("target lies outside the range (distance {distance:e})")]
    OutsideRange { distance: f64 },
    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),
    #[error("tail exhausted: needed index {needed} but truncation is {truncation}")]
    ExhaustedTail { needed: usize, truncation: usize },
    #[error("endpoint not attained: distance {distance:e}")]
    EndpointNotAttained { distance: f64 },
    #[error("alpha and beta must satisfy alpha < 0 < beta (got alpha={alpha}, beta={beta})")]
    BadSignConfiguration { alpha: f64, beta: f64 },
    #[error("alpha and beta coincide")]
    DegeneratePair,
    #[error("sequence entry {entry} is outside [0, 1]")]
    OutOfRangeEntry { entry: String },
    #[error("sequences have incompatible stream structure: {0}")]
    IncompatibleStreams(String),
    #[error("sequence is not the diagonal of a projection")]
    NotADiagonal,
    #[error("i/o error: {0}")]
    Io(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
