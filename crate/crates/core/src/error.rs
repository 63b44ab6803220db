use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A certified decision could not be made at the working precision.
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    /// Parameters describe an empty or mis-ordered object.
    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    /// Preconditions of an analytic bound are not met.
    #[error("method inapplicable: {0}")]
    Inapplicable(String),

    /// An identity that must hold for valid input failed.
    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn is_precision(&self) -> bool {
        matches!(self, Error::InsufficientPrecision(_))
    }
}
