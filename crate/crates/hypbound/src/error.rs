use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HypError {
    /// A point or parameter violates the invariant of its type.
    #[error("validation error: {0}")]
    Validation(String),
    /// Operands live in incompatible models, or a map is applied outside its domain.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// A computed value escaped the model it should stay in.
    #[error("integrity error: {0}")]
    Integrity(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = HypError> = std::result::Result<T, E>;

impl From<std::io::Error> for HypError {
    fn from(e: std::io::Error) -> Self {
        HypError::Io(e.to_string())
    }
}
