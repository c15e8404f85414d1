use thiserror::Error;

/// Errors raised by the tensor Hermite library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported tensor dimension {0} (expected 3 or 6)")]
    UnsupportedDim(usize),

    #[error("axis label {label} out of range for dimension {dim}")]
    LabelOutOfRange { label: usize, dim: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("rank {rank} out of range (maximum {max})")]
    RankOutOfRange { rank: usize, max: usize },

    #[error("quadrature order {order} out of range 1..={max}")]
    OrderOutOfRange { order: usize, max: usize },

    #[error("quadrature order {order} is insufficient, at least {required} required")]
    InsufficientOrder { order: usize, required: usize },

    #[error("non-finite value {value} at point {point:?}")]
    NonFinite { value: f64, point: Vec<f64> },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("point is in the {found} frame, expected the {expected} frame")]
    FrameMismatch {
        expected: &'static str,
        found: &'static str,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
