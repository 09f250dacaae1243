use thiserror::Error;

/// Errors surfaced by the algebra, graph and harness layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Caller mixed incompatible operands or passed an invalid parameter.
    #[error("usage error: {0}")]
    Usage(String),
    /// The input lies outside the operation's domain (zero, unit, non-normal, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// The backend cannot perform this operation (e.g. infinite gauge fibers).
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    /// A declared document violates its schema; `path` is a JSON-pointer-like location.
    #[error("validation error at {path}: {msg}")]
    Validation { path: String, msg: String },
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    pub(crate) fn validation(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Validation {
            path: path.into(),
            msg: msg.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
