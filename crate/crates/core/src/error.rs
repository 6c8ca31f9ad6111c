use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("degree {degree} exceeds cap {cap}; use iterate_eval for deep iterates")]
    CapExceeded { degree: usize, cap: usize },
    #[error("numeric maximization did not converge: {0}")]
    NonConvergent(String),
    #[error("oracle failure: {0}")]
    Oracle(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
