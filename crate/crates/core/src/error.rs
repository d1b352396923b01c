use thiserror::Error;

pub type Result<T> = std::result::Result<T, HjtsError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HjtsError {
    /// An iterative kernel hit its iteration cap.
    #[error("numerical failure in {routine}: no convergence, residual {residual:.3e}")]
    Numerical { routine: &'static str, residual: f64 },

    /// The point lies outside the bounded domain, or an operator that must be
    /// positive definite is not.
    #[error("domain error: {0}")]
    Domain(String),

    /// Caller violated a precondition (shape, kind mismatch, bad parameters).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Two routes that must agree did not.
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl HjtsError {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Self::Contract(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Self::Domain(msg.into())
    }
}
