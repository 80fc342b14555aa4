use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("{what}: {value} exceeds the supported bound of {limit}")]
    Capacity {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("generation failed: {0}")]
    Generation(String),

    #[error("metric undefined: {0}")]
    MetricUndefined(String),

    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("config error at `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("network file {} not found; create it first with `netlearn gen-net {hint}`", path.display())]
    MissingNetwork { path: PathBuf, hint: String },

    #[error("{0}")]
    Analysis(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
