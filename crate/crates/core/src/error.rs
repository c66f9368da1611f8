use pn_linalg::LinalgError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// A computed object violated an identity it must satisfy.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl From<LinalgError> for Error {
    fn from(e: LinalgError) -> Error {
        match e {
            LinalgError::Resource(m) => Error::Resource(m),
            LinalgError::InvalidInput(m) => Error::InvalidInput(m),
            e @ LinalgError::Parse { .. } => Error::InvalidInput(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
