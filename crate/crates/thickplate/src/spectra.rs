//! Characteristic roots of the homogeneous deflection operator.
//!
//! Separated solutions w = X(x1) sin(beta x2) with X = exp(eta x1) satisfy
//!
//!   D_h (eta^2 - beta^2)^2 - G_ph (eta^2 - beta^2) + k = 0,
//!
//! a quadratic in s = eta^2 - beta^2 with discriminant delta_h. Its sign --
//! measured against a relative floor tau -- selects one of three root
//! structures, each of which spans the decaying solution space differently:
//!
//!   delta_h > tau:   two real rates        alpha1 > alpha2 > 0
//!   |delta_h| <= tau: one real double rate alpha3 (profiles pick up x-factors)
//!   delta_h < -tau:  complex pair          alpha5 +/- i alpha6, alpha5 > alpha6 > 0
//!
//! The stress-function operator (Laplacian - 10/h^2) always yields the single
//! real rate alpha7 = sqrt(beta^2 + 10/h^2).

use num_complex::Complex64;

use crate::model::DerivedConstants;
use crate::{PlateError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeCase {
    RealDistinct,
    RealDouble,
    ComplexPair,
}

impl RegimeCase {
    pub fn name(&self) -> &'static str {
        match self {
            RegimeCase::RealDistinct => "real-distinct",
            RegimeCase::RealDouble => "real-double",
            RegimeCase::ComplexPair => "complex-pair",
        }
    }
}

/// Decay rates of the four decaying homogeneous solutions for one tangential
/// wavenumber beta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WRoots {
    RealDistinct { alpha1: f64, alpha2: f64 },
    RealDouble { alpha3: f64 },
    ComplexPair { alpha5: f64, alpha6: f64 },
}

impl WRoots {
    /// Largest real part among the rates; controls boundary-layer width.
    pub fn max_rate(&self) -> f64 {
        match *self {
            WRoots::RealDistinct { alpha1, .. } => alpha1,
            WRoots::RealDouble { alpha3 } => alpha3,
            WRoots::ComplexPair { alpha5, .. } => alpha5,
        }
    }

    /// Distinct roots in the right half plane (conjugates omitted).
    pub fn etas(&self) -> Vec<Complex64> {
        match *self {
            WRoots::RealDistinct { alpha1, alpha2 } => vec![
                Complex64::new(alpha1, 0.0),
                Complex64::new(alpha2, 0.0),
            ],
            WRoots::RealDouble { alpha3 } => vec![Complex64::new(alpha3, 0.0)],
            WRoots::ComplexPair { alpha5, alpha6 } => vec![Complex64::new(alpha5, alpha6)],
        }
    }
}

/// Relative floor below which the discriminant is treated as zero.
pub fn tau_delta(c: &DerivedConstants) -> f64 {
    1e-9 * (c.g_ph * c.g_ph).max(4.0 * c.d_h * c.k).max(1.0)
}

pub fn classify_regime(c: &DerivedConstants) -> RegimeCase {
    let tau = tau_delta(c);
    if c.delta_h > tau {
        RegimeCase::RealDistinct
    } else if c.delta_h < -tau {
        RegimeCase::ComplexPair
    } else {
        RegimeCase::RealDouble
    }
}

/// Decay rates for tangential wavenumber beta. The regime is a global property
/// of the constants; only the rates depend on beta.
pub fn w_roots_at(c: &DerivedConstants, beta: f64) -> Result<WRoots> {
    let b2 = beta * beta;
    match classify_regime(c) {
        RegimeCase::RealDistinct => {
            let sq = c.delta_h.sqrt();
            // Larger quadratic root directly; smaller one as 2k / (G_ph + sq),
            // which avoids cancellation and is exactly beta at k = 0.
            let s1 = (c.g_ph + sq) / (2.0 * c.d_h);
            let s2 = 2.0 * c.k / (c.g_ph + sq);
            Ok(WRoots::RealDistinct {
                alpha1: (b2 + s1).sqrt(),
                alpha2: (b2 + s2).sqrt(),
            })
        }
        RegimeCase::RealDouble => {
            let alpha3 = (b2 + c.g_ph / (2.0 * c.d_h)).sqrt();
            if alpha3 <= 0.0 {
                return Err(PlateError::DegenerateBasis(format!(
                    "double characteristic root vanishes at beta = {beta}"
                )));
            }
            Ok(WRoots::RealDouble { alpha3 })
        }
        RegimeCase::ComplexPair => {
            let s = Complex64::new(c.g_ph, (-c.delta_h).sqrt()) / (2.0 * c.d_h);
            let eta = (s + b2).sqrt();
            // Re(eta^2) >= 0 puts eta within 45 degrees of the real axis.
            debug_assert!(eta.re >= eta.im && eta.im > 0.0, "eta = {eta}");
            Ok(WRoots::ComplexPair {
                alpha5: eta.re,
                alpha6: eta.im,
            })
        }
    }
}

/// Decay rate of the stress-function boundary solution for tangential
/// wavenumber beta = n pi / tangent_len (n = 0 is admissible).
pub fn psi_root(h: f64, tangent_len: f64, n: usize) -> f64 {
    let beta = mode_wavenumber(tangent_len, n);
    (beta * beta + 10.0 / (h * h)).sqrt()
}

/// n-th sine/cosine wavenumber on an interval of the given length.
pub fn mode_wavenumber(len: f64, n: usize) -> f64 {
    n as f64 * std::f64::consts::PI / len
}

/// Relative residual of the characteristic quartic at eta, scaled so a root
/// computed to machine precision scores near machine epsilon regardless of
/// parameter magnitudes.
pub fn char_residual(c: &DerivedConstants, beta: f64, eta: Complex64) -> f64 {
    let b2 = beta * beta;
    let e2 = eta * eta;
    let p = c.d_h * e2 * e2 - (2.0 * c.d_h * b2 + c.g_ph) * e2
        + (c.d_h * b2 * b2 + c.g_ph * b2 + c.k);
    let m = eta.norm().max(beta.abs()).max(1.0);
    p.norm() / (c.d_h * m.powi(4))
}
