//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied argument violates a precondition.
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// A file being read does not conform to the expected text format.
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parameter(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}

pub(crate) fn format_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}
