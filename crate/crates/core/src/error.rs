use thiserror::Error;

/// Failure modes shared by every module.
///
/// Searches that come up empty are not errors; they return `None`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input: a set specification, a parameter outside its range.
    #[error("validation error: {0}")]
    Validation(String),
    /// A precondition on the mathematical domain was violated, e.g. an
    /// element outside the window or intervals that are not big.
    #[error("domain error: {0}")]
    Domain(String),
    /// The request exceeds a supported horizon or overflows `u64`.
    #[error("capacity error: {0}")]
    Capacity(String),
    /// Reading an input file or writing a report failed.
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn from_io(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn validation(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn capacity(msg: impl Into<String>) -> Error {
    Error::Capacity(msg.into())
}
