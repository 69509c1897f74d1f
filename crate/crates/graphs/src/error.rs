use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("invalid leaf: {0}")]
    InvalidLeaf(String),
    #[error("mesh {0} does not divide every edge length")]
    MeshMismatch(String),
    #[error("radius {0} is not below half the shortest edge")]
    RadiusTooLarge(String),
    #[error("node functions are not pairwise distinct")]
    DistinctnessViolated,
    #[error("inconsistent node multiset: {0}")]
    InconsistentMultiset(String),
    #[error("size limit exceeded: {0}")]
    SizeLimitExceeded(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Core(#[from] gromon_core::Error),
}

pub type Result<T> = std::result::Result<T, GraphError>;
