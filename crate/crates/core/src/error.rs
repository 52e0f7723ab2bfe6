use thiserror::Error;

/// Errors raised by construction, refinement and the analysis routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid construction: {0}")]
    InvalidConstruction(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("indeterminate at current precision: {0}")]
    Indeterminate(String),
    #[error("insufficient depth: {0}")]
    InsufficientDepth(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("empty input: {0}")]
    Empty(String),
}

pub type Result<T> = std::result::Result<T, Error>;
