use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("limit product did not converge after {n_terms} terms (best {value}, gap {gap:e})")]
    NonConvergence { value: f64, gap: f64, n_terms: usize },

    #[error("quadrature did not converge (partial {partial}, error estimate {err_estimate:e})")]
    Quadrature { partial: f64, err_estimate: f64 },

    #[error("overflow: log-value {0} is not representable")]
    Overflow(f64),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("routes disagree: {0}")]
    Consistency(String),

    #[error("bad input shape: {0}")]
    Shape(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("cannot parse entry id: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors that come from a numerical procedure failing to
    /// converge, as opposed to bad input.
    pub fn is_nonconvergence(&self) -> bool {
        matches!(self, Error::NonConvergence { .. } | Error::Quadrature { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
