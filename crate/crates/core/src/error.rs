use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error("invalid interval: lower bound must be below upper bound")]
    EmptyInterval,

    #[error("witness vector is zero")]
    ZeroWitness,

    #[error("witness pair is not proportional (some 2x2 minor of [x y] is nonzero)")]
    NotProportional,

    #[error("witness does not verify: {0}")]
    WitnessRejected(String),

    #[error("unsupported format {0:?}")]
    UnsupportedFormat([usize; 3]),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
