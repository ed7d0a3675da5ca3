use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parameter constraint violated: {0}")]
    Constraint(String),

    #[error("root beyond search bound {bound}")]
    RootBeyondBound { bound: f64 },

    #[error("root >= alpha: largest root {theta} is not below alpha = {alpha}")]
    RootNotBelowAlpha { theta: f64, alpha: f64 },

    #[error("overflow at argument {0}")]
    Overflow(f64),

    #[error("non-convergent at z = {z} after {terms} terms")]
    NonConvergent { z: f64, terms: usize },

    #[error("parameter pole: {0}")]
    ParameterPole(String),

    #[error("inversion unreliable at x = {x}: node self-check differs by {relative:e} (relative)")]
    InversionUnreliable { x: f64, relative: f64 },

    #[error("quadrature failed: achieved error {achieved:e}, requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Coarse classification used for process exit codes and C status codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Validation,
    Numeric,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidArgument(_)
            | Error::Constraint(_)
            | Error::RootNotBelowAlpha { .. }
            | Error::Unsupported(_)
            | Error::ParameterPole(_)
            | Error::Json(_)
            | Error::Io(_) => ErrorClass::Validation,
            Error::RootBeyondBound { .. }
            | Error::Overflow(_)
            | Error::NonConvergent { .. }
            | Error::InversionUnreliable { .. }
            | Error::Quadrature { .. }
            | Error::Inconsistent(_) => ErrorClass::Numeric,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Constraint(_) => "constraint",
            Error::RootBeyondBound { .. } => "root_beyond_search_bound",
            Error::RootNotBelowAlpha { .. } => "root_not_below_alpha",
            Error::Overflow(_) => "overflow",
            Error::NonConvergent { .. } => "non_convergent",
            Error::ParameterPole(_) => "parameter_pole",
            Error::InversionUnreliable { .. } => "inversion_unreliable",
            Error::Quadrature { .. } => "quadrature",
            Error::Inconsistent(_) => "inconsistent",
            Error::Unsupported(_) => "unsupported",
            Error::Json(_) => "json",
            Error::Io(_) => "io",
        }
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
