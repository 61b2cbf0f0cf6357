//! Error type shared across the solver pipeline.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PlateError {
    /// Model inputs violate one or more invariants (all collected).
    #[error("invalid model specification:\n{}", .0.join("\n"))]
    InvalidSpec(Vec<String>),

    /// A basis family degenerated beyond what the fallback spans handle.
    #[error("degenerate basis: {0}")]
    DegenerateBasis(String),

    /// Derivative order outside what a basis family supports.
    #[error("derivative order {requested} exceeds cap {cap} for {family}")]
    DerivativeCap {
        family: &'static str,
        requested: usize,
        cap: usize,
    },

    /// Boundary-coefficient square block is numerically singular.
    #[error("boundary reduction matrix is numerically singular (rcond ~ {rcond:.3e})")]
    SingularReduction { rcond: f64 },

    /// Stiffness system is numerically singular.
    #[error("discrete system is numerically singular (rcond ~ {rcond:.3e}): {context}")]
    SingularSystem { rcond: f64, context: String },

    /// Quadrature grading would exceed the panel cap.
    #[error(
        "quadrature needs {needed} panels (cap {cap}); increase the cap, \
         thicken the plate, or reduce the truncation"
    )]
    RefinementCap { needed: usize, cap: usize },

    /// A non-finite number appeared during assembly.
    #[error("non-finite value during assembly: {0}")]
    NonFinite(String),
}
