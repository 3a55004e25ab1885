use alloc::string::String;

use crate::angular::HalfInt;

/// Errors raised by the simulation kernel.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("angular momentum {j} cannot carry projection {m}")]
    InvalidProjection { j: HalfInt, m: HalfInt },

    #[error("negative angular momentum {0}")]
    NegativeMomentum(HalfInt),

    #[error("species schema error at `{field}`: {reason}")]
    Schema { field: String, reason: String },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("negative evolution duration {0}")]
    NegativeDuration(f64),

    #[error("integration failed at t = {time:e} s: {reason}")]
    Integration { time: f64, reason: &'static str },

    #[error("fidelity undefined when no collectable photons are emitted")]
    UndefinedFidelity,

    #[error("shot sequence did not reach steady state after {shots} shots (last distance {distance:e})")]
    NotConverged { shots: usize, distance: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn schema(field: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::Schema { field: field.into(), reason: reason.into() }
}
