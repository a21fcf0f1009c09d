use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A root datum, group or descriptor could not be built from the given data.
    #[error("construction error: {0}")]
    Construction(String),
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Input data violate an admissibility rule.
    #[error("validation error: {0}")]
    Validation(String),
    /// Integers that must share a parity (or be even) do not.
    #[error("parity error: {0}")]
    Parity(String),
    /// Two objects built over different descriptors were combined.
    #[error("descriptor mismatch: {0}")]
    Mismatch(String),
    /// An internal invariant failed; this always indicates a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! bail {
    ($kind:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::$kind(format!($($arg)*)))
    };
}
pub(crate) use bail;
