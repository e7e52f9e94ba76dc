use thiserror::Error;

/// Errors raised by every operation in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A family datum violates one of the cover invariants.
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// The input is well-formed but outside the operation's domain.
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    #[error("parse error: {0}")]
    Parse(String),
    /// An internal consistency check failed. Indicates a bug, not bad input.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// True for consistency failures that indicate a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

macro_rules! bail {
    ($variant:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::$variant(format!($($arg)*)))
    };
}

pub(crate) use bail;
