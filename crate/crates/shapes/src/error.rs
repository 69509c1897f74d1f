use thiserror::Error;

#[derive(Debug, Error)]
pub enum ShapeError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("ill-conditioned fit: {0}")]
    IllConditioned(String),
    #[error("size limit exceeded: {0}")]
    SizeLimitExceeded(String),
    #[error("no admissible construction: {0}")]
    NoConstruction(String),
    #[error(transparent)]
    Core(#[from] gromon_core::Error),
}

pub type Result<T> = std::result::Result<T, ShapeError>;
