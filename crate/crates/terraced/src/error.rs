use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum TerracedError {
    /// The sequence family parameters put the coefficients outside l2 (or a
    /// derived series diverges), so the requested certified quantity does not
    /// exist as a finite number.
    #[error("sequence is not square-summable: {0}")]
    Divergent(String),

    #[error("atom node {value} at position {index} lies outside [0, 1]")]
    NodeOutOfRange { index: usize, value: f64 },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    /// A structural self-check failed; this signals an implementation fault,
    /// not a user error.
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl TerracedError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        TerracedError::InvalidArgument(msg.into())
    }
}
