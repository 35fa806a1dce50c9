//! Orthogonal group actions used by the nematic free-energy model.
//!
//! * D₃ on ℝ² and the 72-element wreath product D₃≀Z₂ on ℝ⁴ with exact
//!   entries in ℚ(√3),
//! * Molien series by exact finite sums, from closed forms, and for SO(3)
//!   acting on traceless symmetric matrices by circle quadrature,
//! * the conjugation operator `Q ↦ RQRᵀ` and a rank test showing that such
//!   operators span (affinely) all of L(V).

mod finite;
mod molien;
mod qsqrt3;
mod so3;

pub use finite::{
    closure, d3_elements, d3_generators, d3tilde_elements, d3tilde_generators, d3xd3_elements, left_d3_elements,
    reynolds_dimension, trivial_group, ExactMatrix, OrthogonalElement,
};
pub use molien::{molien_finite, molien_rational, molien_so3_conjugacy, MolienSeries, So3Molien};
pub use qsqrt3::QSqrt3;
pub use so3::{
    appendix_basis, appendix_rotations, conjugation_operator, haar_rotation, haar_rotations, orthonormal_basis,
    spanning_check, Matrix5, SpanningReport,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GroupError {
    #[error("closure exceeded {limit} elements")]
    ClosureOverflow { limit: usize },
    #[error("closure has {got} elements, expected {expected}")]
    UnexpectedOrder { expected: usize, got: usize },
    #[error("element {label} reached with both τ-parities")]
    ParityClash { label: String },
    #[error("Molien coefficient at degree {degree} is not a nonnegative integer: {value}")]
    NonIntegralMolien { degree: usize, value: String },
    #[error("quadrature underresolved at degree {degree}: {value}")]
    Underresolved { degree: usize, value: f64 },
    #[error("quadrature grid {grid} below the exact minimum {min}")]
    GridTooSmall { grid: usize, min: usize },
    #[error("not a rotation: ‖RᵀR−I‖ = {orthogonality:e}, det = {det}")]
    NotRotation { orthogonality: f64, det: f64 },
    #[error("spanning check needs at least {need} samples, got {got}")]
    TooFewSamples { got: usize, need: usize },
}
