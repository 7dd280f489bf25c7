use thiserror::Error;

/// Errors raised by lattice, kernel and special-function routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of the Gamma function at x = {0}")]
    Pole(f64),
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("kernel is singular at x = {0}")]
    Singularity(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("quadrature did not converge: {0}")]
    QuadratureNonConvergence(String),
    #[error("tolerance not met: residual {residual:e} exceeds bound {bound:e}")]
    ToleranceNotMet { residual: f64, bound: f64 },
    #[error("resource limit: {sites} sites exceeds the cap of {cap}")]
    ResourceLimit { sites: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
