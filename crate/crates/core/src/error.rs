use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("map is not measure-preserving: {0}")]
    NotMeasurePreserving(String),
    #[error("invalid coupling: {0}")]
    InvalidCoupling(String),
    #[error("malformed partition: {0}")]
    MalformedPartition(String),
    #[error("size limit exceeded: {0}")]
    SizeLimitExceeded(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
