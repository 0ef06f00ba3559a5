//! Error type shared across the crate.

use std::path::PathBuf;

/// Errors produced by any eegtf operation.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A caller-supplied value violates an operation's preconditions.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A configuration struct is internally inconsistent.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// Model training cannot proceed (too few rows, single class, ...).
    #[error("training error: {0}")]
    Training(String),

    /// A data or model file has the wrong shape or an unparsable entry.
    /// `line` is 1-based; 0 means the error is not tied to one line.
    #[error("{path}:{line}: {message}")]
    FileFormat {
        path: PathBuf,
        line: usize,
        message: String,
    },

    /// Filesystem failure with the path that caused it.
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn file_format(
        path: impl Into<PathBuf>,
        line: usize,
        message: impl Into<String>,
    ) -> Self {
        Error::FileFormat {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
