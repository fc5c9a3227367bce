use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZetaError {
    #[error("pole of {function} at {at}")]
    Pole { function: &'static str, at: Complex64 },

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("{0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("calibration: {0}")]
    Calibration(String),
}

impl ZetaError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        ZetaError::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        ZetaError::Config(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, ZetaError>;
