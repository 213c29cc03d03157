use thiserror::Error;

/// Errors raised by constructions and solvers in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("antilinear commutant is empty (wrong sign pattern?)")]
    EmptySolutionSpace,

    #[error("solution space dimension {0}")]
    ReducibleInput(usize),

    #[error("matrix is singular to working precision")]
    Singular,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("operation requires even n, got n = {0}")]
    OddDimension(usize),

    #[error("operation requires n > 0")]
    EmptySignature,

    #[error("operation requires even s, got s = {0}")]
    OddSignature(u8),

    #[error("wrong signatures: {0}")]
    WrongSignatures(String),

    #[error("invalid module document: {0}")]
    Import(String),
}

pub type Result<T> = std::result::Result<T, Error>;
