use thiserror::Error;

/// Errors raised across the library.
///
/// Each variant maps onto one machine-readable class via [`Error::class`],
/// which the CLI prints on failure.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("observation {index} has non-positive error {value}")]
    NonPositiveObservation { index: usize, value: f64 },

    #[error("prediction for observation {index} is non-positive ({value})")]
    NonPositivePrediction { index: usize, value: f64 },

    #[error("degenerate coverage: only one distinct value of `{axis}`")]
    DegenerateCoverage { axis: &'static str },

    #[error("domain error: {0}")]
    Domain(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Short stable identifier for the error family.
    pub fn class(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid-parameter",
            Error::InvalidInput(_) => "invalid-input",
            Error::InsufficientData(_) => "insufficient-data",
            Error::NonPositiveObservation { .. } => "non-positive-observation",
            Error::NonPositivePrediction { .. } => "non-positive-prediction",
            Error::DegenerateCoverage { .. } => "degenerate-coverage",
            Error::Domain(_) => "domain",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
