use thiserror::Error;

/// Errors raised by the engines and the CLI front end.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("membership error: {0}")]
    Membership(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("generator error: {0}")]
    Generator(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("capacity exceeded: {message}")]
    Capacity {
        message: String,
        /// Smallest input size that would likely succeed, when one can be estimated.
        required: Option<usize>,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub fn capacity(message: impl Into<String>, required: Option<usize>) -> Self {
        Error::Capacity { message: message.into(), required }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(format!("line {} column {}: {}", e.line(), e.column(), e))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
