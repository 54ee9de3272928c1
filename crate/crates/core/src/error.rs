use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left_w}x{left_h} vs {right_w}x{right_h}")]
    DimensionMismatch {
        left_w: usize,
        left_h: usize,
        right_w: usize,
        right_h: usize,
    },

    #[error("plane is {width}x{height}, metric needs at least {min_width}x{min_height}")]
    PlaneTooSmall {
        width: usize,
        height: usize,
        min_width: usize,
        min_height: usize,
    },

    #[error("entropy denominator is zero (all planes constant)")]
    DegenerateEntropy,

    #[error("metric undefined on this input: {0}")]
    Degenerate(&'static str),

    #[error("invalid plane: {0}")]
    InvalidPlane(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("image decode failed: {0}")]
    Decode(String),

    #[error("image encode failed: {0}")]
    Encode(String),
}

pub type Result<T> = std::result::Result<T, Error>;
