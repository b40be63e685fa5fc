use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("zero vector cannot be normalized")]
    ZeroVector,

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("{0}")]
    Numerical(String),

    #[error("truncation guard violated: weight {weight:e} above level {level}")]
    Truncation { weight: f64, level: usize },

    #[error("malformed state file: {0}")]
    Parse(#[from] serde_json::Error),
}
