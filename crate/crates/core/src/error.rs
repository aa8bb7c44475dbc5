use thiserror::Error;

use crate::density::Support;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("support mismatch: expected {expected:?}, found {found:?}")]
    SupportMismatch { expected: Support, found: Support },

    /// A term outside the symbolic rule table; callers fall back to the numeric path.
    #[error("unsupported term: {0}")]
    Unsupported(String),

    /// Quadrature did not reach its tolerance; carries the best estimate.
    #[error("accuracy error: best estimate {estimate:e} with error {error:e}")]
    Accuracy { estimate: f64, error: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid density spec: {0}")]
    Spec(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
