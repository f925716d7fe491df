use thiserror::Error;

/// Errors surfaced by the simulator library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("capacity exceeded: {requested} qubits requested, backend limit is {limit}")]
    Capacity { requested: usize, limit: usize },
    #[error("unsupported operation: {0}")]
    Unsupported(&'static str),
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
