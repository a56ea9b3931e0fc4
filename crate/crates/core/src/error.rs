use thiserror::Error;

/// Errors raised by the geometry engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("theta = {theta} lies outside the open chart (0, pi)")]
    OutsideChart { theta: f64 },

    #[error("theta = {theta} is within {epsilon} of a pole; the frame is singular there")]
    PoleProximity { theta: f64, epsilon: f64 },

    #[error("frame index {0} out of range (expected 0..4)")]
    FrameIndex(usize),

    #[error("degenerate plane: wedge norm squared {wedge_norm_sq} below {threshold}")]
    DegeneratePlane { wedge_norm_sq: f64, threshold: f64 },

    #[error("pair is not orthonormal (defect {defect})")]
    NotOrthonormal { defect: f64 },

    #[error("form degree {lhs} + {rhs} exceeds the dimension 4")]
    DegreeOverflow { lhs: usize, rhs: usize },

    #[error("operation needs degree {expected}, got {found}")]
    WrongDegree {
        expected: &'static str,
        found: usize,
    },

    #[error("quadrature grid {0} is too small (each size must be >= 8)")]
    GridTooSmall(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("numerical failure in {claim}: {detail}")]
    Numerical { claim: String, detail: String },
}

pub type Result<T> = std::result::Result<T, GeometryError>;
