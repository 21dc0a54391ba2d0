use thiserror::Error;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("{what} did not converge: {detail}")]
    NonConvergence { what: &'static str, detail: String },

    #[error("series diverged: terms grew for {streak} consecutive indices up to r = {last_index}")]
    SeriesDiverged { streak: usize, last_index: usize },

    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),

    #[error("spectrum tail too fat: |S| = {magnitude:e} near k = {k_max} exceeds {tail_tol:e}")]
    TailTooFat {
        k_max: f64,
        magnitude: f64,
        tail_tol: f64,
    },

    #[error("contour failure: {0}")]
    ContourFailure(String),

    #[error("oracle failure: {0}")]
    OracleFailure(String),

    #[error("stability failure: {0}")]
    StabilityFailure(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }

    pub(crate) fn no_conv(what: &'static str, detail: impl Into<String>) -> Self {
        Error::NonConvergence {
            what,
            detail: detail.into(),
        }
    }

    /// `true` for errors caused by the caller's inputs rather than by numerics.
    pub fn is_invalid_params(&self) -> bool {
        matches!(self, Error::InvalidParams(_))
    }

    /// Short machine-readable tag, stable across releases.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParams(_) => "invalid_params",
            Error::NonConvergence { .. } => "non_convergence",
            Error::SeriesDiverged { .. } => "series_diverged",
            Error::QuadratureFailure(_) => "quadrature_failure",
            Error::TailTooFat { .. } => "tail_too_fat",
            Error::ContourFailure(_) => "contour_failure",
            Error::OracleFailure(_) => "oracle_failure",
            Error::StabilityFailure(_) => "stability_failure",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
