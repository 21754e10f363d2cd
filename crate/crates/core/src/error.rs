use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A model or grid parameter violates its domain constraint.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// An argument lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The request exceeds a configured capability limit.
    #[error("capability limit exceeded: {0}")]
    Capability(String),

    /// A statistic is undefined for the requested state (for example a
    /// ratio with zero mean photon number).
    #[error("undefined statistics: {0}")]
    UndefinedStatistics(String),

    /// A numerical procedure could not reach the requested accuracy.
    #[error("accuracy failure: estimated error {estimate:e} exceeds {tolerance:e} ({context})")]
    Accuracy {
        estimate: f64,
        tolerance: f64,
        context: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
