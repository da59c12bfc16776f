//! Error type shared by all cone-geometry operations.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConeError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("points belong to different cones")]
    ConeMismatch,

    #[error("operands belong to different Jordan algebras")]
    AlgebraMismatch,

    #[error("{what} must lie in the interior of the cone")]
    NotInterior { what: &'static str },

    #[error("{what} lies outside the cone beyond tolerance")]
    OutsideCone { what: &'static str },

    #[error("zero vector where a nonzero cone point is required")]
    ZeroVector,

    #[error("element is singular (eigenvalue below clipping threshold)")]
    SingularElement,

    #[error("non-finite coordinate encountered")]
    NonFinite,

    #[error("invalid cone descriptor: {0}")]
    InvalidCone(String),

    #[error("invalid map specification: {0}")]
    InvalidMap(String),

    #[error("operation `{op}` is not supported on this cone kind")]
    UnsupportedCone { op: &'static str },

    #[error("inputs are proportional; chord endpoints are undefined")]
    ProportionalInputs,

    #[error("gauge evaluated to a non-positive value (map left the cone)")]
    GaugeCollapse,

    #[error("iteration did not converge: {what}")]
    NonConvergence { what: String },
}

pub type Result<T> = std::result::Result<T, ConeError>;
