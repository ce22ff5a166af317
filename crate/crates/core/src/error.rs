use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A hypothesis of the requested inequality (or an operation precondition)
    /// is violated. The message names the hypothesis, e.g. `requires N > 2k`.
    #[error("{0}")]
    Domain(String),
    #[error("quadrature failed: {0}")]
    Quadrature(QuadratureFailure),
    /// Raised when an exact recursion or a jet pipeline produces something that
    /// can only be an implementation bug (e.g. a nonpositive chain coefficient).
    #[error("internal consistency error: {0}")]
    Internal(String),
    #[error("suite manifest: {0}")]
    Manifest(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

/// Diagnostics attached to a quadrature that did not settle under panel doubling.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureFailure {
    pub label: String,
    pub panels_tried: Vec<usize>,
    pub last_values: Vec<f64>,
    pub last_change: f64,
    pub allowed_change: f64,
}

impl fmt::Display for QuadratureFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: panel doubling {:?} still changes the result by {:.3e} (allowed {:.3e}); last values {:?}",
            self.label, self.panels_tried, self.last_change, self.allowed_change, self.last_values
        )
    }
}
