use thiserror::Error;

/// Errors raised by path construction, parameter validation and file IO.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid path: {reason} at index {index}")]
    Validation { index: usize, reason: &'static str },

    #[error("invalid path: {0}")]
    EmptyPath(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("time {t} is outside the path domain: {reason}")]
    Domain { t: f64, reason: &'static str },

    #[error("paths are not defined on the same sample grid")]
    GridMismatch,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
