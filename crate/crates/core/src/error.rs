use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violated its documented constraint.
    #[error("invalid `{field}`: {constraint}")]
    InvalidParameter {
        field: String,
        constraint: String,
    },

    #[error("dimension mismatch: expected d = {expected}, got d = {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("JSON error on {}: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub fn invalid(field: impl Into<String>, constraint: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            constraint: constraint.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
