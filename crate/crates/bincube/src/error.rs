//! Error type shared by all verification modules.

use crate::integrate::IntegralEstimate;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the verification toolkit.
///
/// `Domain` and `Usage` are caller errors (map to exit code 2 in the CLI);
/// `Numerical` means an algorithm ran out of budget or produced a
/// non-finite value (exit code 3). A mathematical violation is *not* an
/// error: it is a failing [`crate::report::Report`].
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation was invoked with an unsupported configuration.
    #[error("usage error: {0}")]
    Usage(String),

    /// A numerical procedure failed to converge or produced NaN/Inf.
    /// Carries the best estimate available when one exists.
    #[error("numerical failure: {message}")]
    Numerical {
        message: String,
        best: Option<IntegralEstimate>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical {
            message: msg.into(),
            best: None,
        }
    }
}

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::domain(format!("{name} must be finite, got {value}")))
    }
}
