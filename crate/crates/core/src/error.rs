use thiserror::Error;

use crate::geometry::Regime;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{field}: {reason}")]
    InvalidInput { field: String, reason: String },

    #[error("angle function nu = {0} lies outside [-1, 1]")]
    AngleOutOfRange(f64),

    #[error("curvature data contains a non-finite value")]
    NonFinite,

    #[error("{what}: sample list is empty")]
    Empty { what: &'static str },

    #[error("length mismatch: {left} has {left_len} samples, {right} has {right_len}")]
    LengthMismatch {
        left: &'static str,
        left_len: usize,
        right: &'static str,
        right_len: usize,
    },

    #[error("field has {got} samples, at least {min} required")]
    TooFewSamples { got: usize, min: usize },

    #[error("period mismatch: expected {expected}, got {got}")]
    PeriodMismatch { expected: f64, got: f64 },

    #[error("model has noncompact fibers; a Hopf torus needs closed fibers")]
    NoncompactFibers,

    #[error("horizontal slice requires tau = 0 along the slice")]
    TwistedSlice,

    #[error("Gauss-Bonnet inconsistency: integral of kappa is {integral}, 2*pi*chi is {expected}")]
    GaussBonnet { integral: f64, expected: f64 },

    #[error("{0} must be strictly positive")]
    NonPositive(&'static str),

    #[error("bound requires regime {required:?}, surface data is {found:?}")]
    RegimeMismatch { required: Regime, found: Regime },

    #[error("ambient gradient of tau is not available for this surface")]
    AmbientGradientUnavailable,

    #[error("solver not converged: estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    NotConverged { estimate: f64, tolerance: f64 },

    #[error("internal error: {0}")]
    Internal(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("scenario is invalid:\n  {}", .0.join("\n  "))]
    Schema(Vec<String>),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidInput {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
