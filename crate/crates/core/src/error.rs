use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read scenario file {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed scenario JSON: {0}")]
    Parse(#[from] serde_json::Error),

    /// A configuration value violates a model invariant. `key` is the dotted
    /// path of the offending field in the scenario document.
    #[error("invalid value for `{key}`: {message}")]
    Config { key: String, message: String },

    /// A numerical precondition failed (zero distance, zero population, ...).
    #[error("domain error: {0}")]
    Domain(String),
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    pub(crate) fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }

    /// True for errors caused by the user's input rather than by the program.
    pub fn is_user_error(&self) -> bool {
        matches!(self, Error::Io { .. } | Error::Parse(_) | Error::Config { .. })
    }
}
