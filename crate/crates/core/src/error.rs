use thiserror::Error;

/// Errors raised by the series engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FracError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("value {value} is not on the exponent lattice (alpha = {alpha}, beta = {beta:?})")]
    Lattice {
        value: f64,
        alpha: f64,
        beta: Option<f64>,
    },

    #[error("incompatible series: {0}")]
    Incompatible(String),

    #[error("series is singular at its base point {base}")]
    Singularity { base: f64 },

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("series did not converge within {terms} terms")]
    NonConvergence { terms: usize },

    #[error("no series solution: equation at exponent {exponent} is inconsistent (mismatch {mismatch:e})")]
    NoSeriesSolution { exponent: f64, mismatch: f64 },

    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, FracError>;

impl From<serde_json::Error> for FracError {
    fn from(err: serde_json::Error) -> Self {
        FracError::Format(err.to_string())
    }
}
