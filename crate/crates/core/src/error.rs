use thiserror::Error;

/// Errors produced by the frame toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error("vector {index} has {found} coordinates, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("ambient dimension must be positive")]
    ZeroDimension,
    #[error("non-finite coordinate in vector {index}")]
    NonFinite { index: usize },
    #[error("invalid tolerance {name} = {value}: must lie in (0, 1e-2]")]
    InvalidTolerance { name: &'static str, value: f64 },
    #[error("matrix is not positive semidefinite (eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("frame required: sequence has deficit {deficit}")]
    FrameRequired { deficit: usize },
    #[error("no finite upper bound scale: every vector is zero")]
    DegenerateScale,
    #[error("upper bound exceeds 1: B = {bound}")]
    UpperBoundExceedsOne { bound: f64 },
    #[error("below minimal count: {slots} slots requested, at least {k} required")]
    BelowMinimalCount { k: usize, slots: usize },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("upper bound exceeds 1 at truncation size {size}: B = {bound}")]
    TruncationBoundExceedsOne { size: usize, bound: f64 },
    #[error("parse error: {0}")]
    Parse(String),
}

impl FrameError {
    /// Whether the error reflects malformed input rather than a violated
    /// mathematical precondition.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            FrameError::DimensionMismatch { .. }
                | FrameError::ZeroDimension
                | FrameError::NonFinite { .. }
                | FrameError::InvalidTolerance { .. }
                | FrameError::UnknownGenerator(_)
                | FrameError::InvalidSchedule(_)
                | FrameError::Parse(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, FrameError>;
