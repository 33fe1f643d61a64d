use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaborError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension must be at least 1")]
    EmptyDimension,

    #[error("vector is not unit norm: |norm^2 - 1| = {deviation:e}")]
    NotUnitNorm { deviation: f64 },

    #[error("cannot normalize the zero vector")]
    ZeroVector,

    #[error("dimension {d} exceeds the dense oracle limit {limit}")]
    OracleTooLarge { d: usize, limit: usize },

    #[error("{m} is not invertible modulo {d}")]
    NotInvertible { m: i64, d: usize },

    #[error("invalid tolerance policy: {0}")]
    InvalidTolerance(String),

    #[error("invalid transform: {0}")]
    InvalidTransform(String),

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("support of g is not contained in {kappa}Z_{d}")]
    UnsupportedVector { kappa: usize, d: usize },

    #[error("no full-rank vector on the support after {attempts} draws")]
    RetryBudgetExhausted { attempts: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = GaborError> = std::result::Result<T, E>;
