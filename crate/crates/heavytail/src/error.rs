//! Error taxonomy.
//!
//! Callers can distinguish domain errors (parameters outside preconditions),
//! data errors (empty, non-finite, or negative input), numerical failures
//! (non-convergence, ill-conditioning), and I/O or parse failures.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter violates a documented precondition.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The input data violate a precondition (empty, NaN, negative, ...).
    #[error("invalid data: {0}")]
    InvalidData(String),

    /// A requested quantity is outside the regime where it is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The quantity exists but was not computed by the producing call.
    #[error("statistic not available: {0}")]
    MissingStatistic(String),

    /// The quantity is undefined for this sample (e.g. no upper excesses).
    #[error("undefined for this sample: {0}")]
    Undefined(String),

    /// The estimate exists but the evaluation is numerically meaningless.
    #[error("ill-conditioned: {0}")]
    IllConditioned(String),

    /// An iterative routine failed to converge.
    #[error("no convergence after {iterations} iterations: {context}")]
    NoConvergence { iterations: usize, context: String },

    /// Graph regeneration budget exhausted under a degree cap.
    #[error("degree cap {cap} not satisfied after {attempts} attempts")]
    DegreeCapExhausted { cap: u32, attempts: u32 },

    /// A line of an input file could not be parsed.
    #[error("parse error at line {line}: {reason}")]
    Parse { line: u64, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid_parameter(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
