use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("value out of range: {0}")]
    Range(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("composition operator is unbounded: {0}")]
    Unbounded(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("numerical cross-check failed: {0}")]
    CrossCheck(String),
}
