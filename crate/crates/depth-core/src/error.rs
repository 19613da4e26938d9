//! Error type shared by all modules.

use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DepthError {
    #[error("parse error at row {row}, column {col}: {msg}")]
    Parse { row: usize, col: usize, msg: String },

    #[error("invalid data: {0}")]
    Data(String),

    #[error("singular scatter matrix: {0}")]
    SingularScatter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("numerical failure: {0}")]
    Numeric(String),
}

impl DepthError {
    pub fn data(msg: impl Into<String>) -> Self {
        DepthError::Data(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        DepthError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, DepthError>;
