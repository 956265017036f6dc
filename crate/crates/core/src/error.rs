use num_complex::Complex64;
use thiserror::Error;

/// Errors and singularity signals raised by evaluations in this crate.
///
/// `Pole` and `Zero` are not failures in the usual sense: they report that the
/// requested point sits (within a fixed tolerance) on a known singular lattice
/// of the function, and carry the offending argument.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole at {location}")]
    Pole { location: Complex64 },
    #[error("zero at {location}")]
    Zero { location: Complex64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

impl Error {
    /// True for `Pole` and `Zero`, the two singularity signals.
    pub fn is_singular(&self) -> bool {
        matches!(self, Error::Pole { .. } | Error::Zero { .. })
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
