use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{format}: {message}")]
    Format {
        format: &'static str,
        message: String,
    },

    #[error("shape mismatch: expected {expected:?}, got {found:?} (width, height)")]
    Shape {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("seed ({row}, {col}) outside {width}x{height} image")]
    SeedOutOfBounds {
        row: usize,
        col: usize,
        width: usize,
        height: usize,
    },

    #[error("invalid parameter {name}: {message}")]
    InvalidParameter { name: &'static str, message: String },

    #[error("accuracy undefined for zero-pixel masks")]
    UndefinedMetric,

    #[error("config file {}: {source}", path.display())]
    ConfigMissing {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("config syntax error: {0}")]
    ConfigSyntax(String),

    #[error("invalid config value for `{key}`: {message}")]
    ConfigInvalid { key: String, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(format: &'static str, message: impl Into<String>) -> Self {
        Error::Format {
            format,
            message: message.into(),
        }
    }

    pub(crate) fn invalid(name: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            message: message.into(),
        }
    }
}
