use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("resource budget exceeded: {0}")]
    Resource(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, LinalgError>;
