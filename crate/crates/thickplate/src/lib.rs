//! Static bending of Reissner (shear-deformable) rectangular plates resting on a
//! two-parameter (Pasternak) elastic foundation.
//!
//! The deflection field is expanded in a composite basis: corner interpolation
//! polynomials, an interior double sine series, and four families of exponential
//! boundary-layer profiles built from the characteristic roots of the governing
//! operator. A shear stress function carries the rotation boundary layers. Edge
//! traces of deflection and rotations are re-expanded in half-range Fourier series,
//! which turns the raw boundary-family coefficients into physically meaningful edge
//! coefficients; boundary conditions are imposed on those directly. The discrete
//! system is obtained from the potential energy functional by Gauss quadrature on
//! panels graded into the boundary layers.
//!
//! Modules follow the pipeline order:
//! [`model`] -> [`spectra`] -> [`basis`] -> [`reduction`] -> [`assembly`] ->
//! [`solve_post`], with [`validation`] providing closed-form oracles, error
//! metrics and the convergence / parameter-sweep experiments.

pub mod assembly;
pub mod basis;
pub mod error;
pub mod fields;
pub mod linalg;
pub mod model;
pub mod profile;
pub mod quadrature;
pub mod reduction;
pub mod solve_post;
pub mod spectra;
pub mod validation;

pub use error::PlateError;

pub type Result<T> = std::result::Result<T, PlateError>;
