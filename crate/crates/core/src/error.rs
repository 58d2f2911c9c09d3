use thiserror::Error;

/// Errors produced by the analysis pipeline.
#[derive(Debug, Error)]
pub enum TfdError {
    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Not enough usable data to compute the requested quantity.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Malformed input file contents.
    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, TfdError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(TfdError::InvalidArgument(msg.into()))
}
