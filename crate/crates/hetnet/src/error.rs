use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("constraint violated: {0}")]
    ConstraintViolation(String),

    #[error("point is not an axis equilibrium: {0}")]
    NotAxisEquilibrium(String),

    #[error("eigenvalues do not realize the cycle: {0}")]
    InvalidCycleRealization(String),

    #[error("incomplete eigen data: {0}")]
    IncompleteEigenData(String),

    #[error("non-generic parameters: {0}")]
    NonGeneric(String),

    #[error("unsupported network: {0}")]
    UnsupportedNetwork(String),

    #[error("integration failed (step size underflow at t = {t}, h = {h:e})")]
    StiffnessFailure { t: f64, h: f64 },

    #[error("missing connection: {0}")]
    MissingConnection(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
