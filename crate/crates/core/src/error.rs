use thiserror::Error;

/// Errors produced while building systems, circuits, or running tests.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operator is not Hermitian (max |M - M^dag| = {max_dev:.3e})")]
    NotHermitian { max_dev: f64 },

    #[error("operator is not traceless (|tr| = {trace:.3e})")]
    NotTraceless { trace: f64 },

    #[error("invalid state vector: {0}")]
    InvalidState(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("system has no split drift; construct it with extend_bipartite")]
    MissingSplitDrift,
}

pub type Result<T> = std::result::Result<T, Error>;
