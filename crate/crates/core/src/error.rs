use thiserror::Error;

pub type Result<T> = std::result::Result<T, WalkError>;

/// Numerical and contract failures raised while building or evolving states.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error("lattice half-width must be at least 1, got {0}")]
    EmptyWindow(usize),

    #[error("coin amplitudes are not normalized (|a|^2 + |b|^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("position {position} lies outside the window [-{half_width}, {half_width}]")]
    OutsideWindow { position: i64, half_width: usize },

    #[error("lattice windows differ (half-widths {left} and {right})")]
    WindowMismatch { left: usize, right: usize },

    #[error("amplitude {magnitude:e} reached boundary site x = {position}; the window is too small")]
    BoundaryReached { position: i64, magnitude: f64 },

    #[error("angle field covers {available} steps but step {requested} was requested")]
    FieldTooShort { requested: usize, available: usize },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid disorder specification: {0}")]
    InvalidDisorder(String),

    #[error("single-particle evolutions disagree on step count ({left} vs {right})")]
    StepMismatch { left: usize, right: usize },

    #[error("interference formula produced {0}")]
    InconsistentInterference(String),

    #[error("amplitude array has length {got}, expected {expected}")]
    ShapeMismatch { got: usize, expected: usize },
}
