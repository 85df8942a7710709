use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by array construction, algebra and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("malformed triples: {0}")]
    MalformedTriples(String),

    #[error("value {value} is not valid under semiring {semiring}: {reason}")]
    Domain {
        value: f64,
        semiring: &'static str,
        reason: &'static str,
    },

    #[error("semiring mismatch: {left} vs {right}")]
    SemiringMismatch {
        left: &'static str,
        right: &'static str,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("format error: {0}")]
    Format(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
