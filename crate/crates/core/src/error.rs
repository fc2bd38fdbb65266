use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("root finding did not converge: {0}")]
    Convergence(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("point outside the domain: {0}")]
    OutOfDomain(String),

    #[error("resonance-degenerate denominator: {0}")]
    Resonance(String),

    #[error("time grid too coarse: {0}")]
    GridResolution(String),

    #[error("empty truncation set: {0}")]
    EmptyTruncation(String),

    #[error("coincident roots in census: {0}")]
    Tie(String),

    #[error("unstable step size: {0}")]
    Stability(String),

    #[error("invalid parameter: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
