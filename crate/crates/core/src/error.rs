use thiserror::Error;

/// Errors surfaced by the library. Verification failures are not errors;
/// they show up as failing records in a [`crate::report::Report`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("enumeration cap exceeded: {what} would need more than {cap} elements")]
    CapExceeded { what: String, cap: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no witness: {0}")]
    NoWitness(String),
    #[error("shadow rejected: {0}")]
    Inadmissible(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
