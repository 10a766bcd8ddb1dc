use thiserror::Error;

/// Errors surfaced by grid construction, operator application, and I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two grids that must share domain, spacing, or length do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Probability mass escaped the truncated domain; widen it.
    #[error("truncation: {0}")]
    Truncation(String),

    /// A hard resource cap (tree depth, panel budget) was exceeded.
    #[error("resource limit: {0}")]
    Resource(String),

    /// A certified-bound precondition failed to verify.
    #[error("validity: {0}")]
    Validity(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
