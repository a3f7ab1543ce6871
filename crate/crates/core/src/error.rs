use alloc::boxed::Box;
use alloc::string::String;

use crate::characteristic::IntegralVerdict;

/// Errors raised by the analysis routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A predicate that should be closed under adding positive matrices is not.
    #[error("positivity violation: {0}")]
    PositivityViolation(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// The counterexample constructor refused because the integral test did not
    /// certify convergence.
    #[error("refused: integral test returned {:?}", .0.verdict)]
    Refused(Box<IntegralVerdict>),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::error::Error::InvalidInput(alloc::format!($($arg)*))
    };
}
pub(crate) use invalid;
