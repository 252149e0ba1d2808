use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid bounds: require {lo} < {hi} on the {axis} axis")]
    InvalidBounds { axis: char, lo: f64, hi: f64 },

    #[error("invalid point count {count} on the {axis} axis: must be even and at least 4")]
    InvalidPointCount { axis: char, count: usize },

    #[error("grid mismatch: operands live on different grids")]
    GridMismatch,

    #[error("expected {expected} samples, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("invalid {what}: {reason}")]
    InvalidSpec { what: &'static str, reason: String },

    #[error("hat initial data needs the [-8,8]x[-8,8] domain or an explicit half_width")]
    HatDomain,

    #[error("grids are not nested: {0}")]
    NotNested(String),

    #[error("config error at `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("snapshot format error: {0}")]
    Format(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn spec(what: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidSpec {
            what,
            reason: reason.into(),
        }
    }

    pub(crate) fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
