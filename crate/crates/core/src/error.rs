use thiserror::Error;

use crate::outcome::Cell;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("probability for outcome {cell} is negative ({value})")]
    NegativeProbability { cell: Cell, value: f64 },

    #[error("probabilities sum to {sum}, not 1")]
    NotNormalized { sum: f64 },

    #[error("{what} is not finite")]
    NonFinite { what: &'static str },

    #[error("{what} = {value} lies outside [-1, 1]")]
    OutOfRange { what: &'static str, value: f64 },

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("state vector has zero norm")]
    ZeroVector,

    #[error("marginal source uses settings {marginal} but correlation source uses {correlation}")]
    SettingMismatch { marginal: String, correlation: String },

    #[error("sample size must be at least 1")]
    InvalidSampleSize,

    #[error("z = {0} must be positive and finite")]
    InvalidZ(f64),

    #[error("lattice denominator must be at least 1")]
    InvalidDenominator,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
