use thiserror::Error;

/// Errors shared by every engine in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input violated a mathematical precondition (zero where a unit is
    /// required, a non-squarefree value, a non-homomorphism, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Integer factorization gave up on a cofactor it could not split.
    #[error("could not factor {0}: cofactor exceeds the supported range")]
    Unfactored(String),

    /// An exhaustive search was asked to run on an input that is too large.
    #[error("size error: {0}")]
    Size(String),

    /// Malformed textual input (group files, bit strings, numbers).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
