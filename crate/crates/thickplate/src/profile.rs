//! One-dimensional building blocks for separable basis columns.
//!
//! Every basis column is X(x1) * Y(x2); this module supplies the direction
//! factors X and Y together with their derivatives up to order four:
//!
//! * corner interpolation cubics (value / second derivative carriers),
//! * sines and cosines of the interior series,
//! * boundary-layer profiles built from hyperbolic ratios, evaluated in an
//!   overflow-safe form so decay rates of order 1e3 .. 1e4 per unit length
//!   stay finite and accurate.

use crate::spectra::WRoots;

const BINOM: [[f64; 5]; 5] = [
    [1.0, 0.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 0.0, 0.0, 0.0],
    [1.0, 2.0, 1.0, 0.0, 0.0],
    [1.0, 3.0, 3.0, 1.0, 0.0],
    [1.0, 4.0, 6.0, 4.0, 1.0],
];

/// Highest derivative order any caller may request.
pub const MAX_DERIV: usize = 4;

/// sinh(alpha y) / sinh(alpha len) without forming either sinh.
///
/// Both the numerator and denominator overflow for alpha * len beyond ~710;
/// the quotient never does for 0 <= y <= len. expm1 keeps the small-alpha
/// limit (y / len) accurate as well.
fn sinh_ratio(alpha: f64, y: f64, len: f64) -> f64 {
    (alpha * (y - len)).exp() * (-2.0 * alpha * y).exp_m1() / (-2.0 * alpha * len).exp_m1()
}

/// cosh(alpha y) / sinh(alpha len), same regularization.
fn cosh_ratio(alpha: f64, y: f64, len: f64) -> f64 {
    (alpha * (y - len)).exp() * (1.0 + (-2.0 * alpha * y).exp())
        / -(-2.0 * alpha * len).exp_m1()
}

/// amp * sin(omega x + phase), closed under differentiation.
///
/// omega = 0 with phase pi/2 encodes a constant. A reflected argument
/// f(len - x) is encoded by negating omega and shifting the phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trig {
    pub omega: f64,
    pub phase: f64,
    pub amp: f64,
}

impl Trig {
    pub fn sine(omega: f64) -> Self {
        Trig { omega, phase: 0.0, amp: 1.0 }
    }

    pub fn cosine(omega: f64) -> Self {
        Trig { omega, phase: std::f64::consts::FRAC_PI_2, amp: 1.0 }
    }

    pub fn constant(c: f64) -> Self {
        Trig { omega: 0.0, phase: std::f64::consts::FRAC_PI_2, amp: c }
    }

    /// Same shape evaluated at (len - x).
    pub fn reflected(&self, len: f64) -> Self {
        Trig {
            omega: -self.omega,
            phase: self.phase + self.omega * len,
            amp: self.amp,
        }
    }

    pub fn eval(&self, x: f64, d: usize) -> f64 {
        // Quadrant table instead of a phase rotation: all derivative orders
        // then share one sin/cos evaluation, so their roundoff cancels
        // coherently in Laplacian-like combinations.
        let (s, c) = (self.omega * x + self.phase).sin_cos();
        let base = match d % 4 {
            0 => s,
            1 => c,
            2 => -s,
            _ => -c,
        };
        self.amp * self.omega.powi(d as i32) * base
    }
}

/// One factor of a boundary-layer profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfFactor {
    One,
    /// sinh(alpha x)/sinh(alpha len), or the same at (len - x).
    SinhRatio { alpha: f64, reflected: bool },
    /// x / len, or (len - x) / len.
    Ramp { reflected: bool },
    Trig(Trig),
}

impl ProfFactor {
    fn eval(&self, x: f64, d: usize, len: f64) -> f64 {
        match *self {
            ProfFactor::One => {
                if d == 0 {
                    1.0
                } else {
                    0.0
                }
            }
            ProfFactor::SinhRatio { alpha, reflected } => {
                let (y, sign) = if reflected {
                    (len - x, if d % 2 == 0 { 1.0 } else { -1.0 })
                } else {
                    (x, 1.0)
                };
                let ratio = if d % 2 == 0 {
                    sinh_ratio(alpha, y, len)
                } else {
                    cosh_ratio(alpha, y, len)
                };
                sign * alpha.powi(d as i32) * ratio
            }
            ProfFactor::Ramp { reflected } => match (d, reflected) {
                (0, false) => x / len,
                (0, true) => (len - x) / len,
                (1, false) => 1.0 / len,
                (1, true) => -1.0 / len,
                _ => 0.0,
            },
            ProfFactor::Trig(t) => t.eval(x, d),
        }
    }

    fn sinh_rate(&self) -> Option<f64> {
        match *self {
            ProfFactor::SinhRatio { alpha, .. } => Some(alpha),
            _ => None,
        }
    }
}

/// Product of two factors on [0, len]; derivatives by the Leibniz rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Profile1d {
    pub f1: ProfFactor,
    pub f2: ProfFactor,
    pub len: f64,
}

impl Profile1d {
    pub fn new(f1: ProfFactor, f2: ProfFactor, len: f64) -> Self {
        Profile1d { f1, f2, len }
    }

    pub fn single(f: ProfFactor, len: f64) -> Self {
        Profile1d { f1: f, f2: ProfFactor::One, len }
    }

    pub fn eval(&self, x: f64, d: usize) -> f64 {
        assert!(d <= MAX_DERIV, "derivative order {d} beyond cap");
        let mut acc = 0.0;
        for j in 0..=d {
            let a = self.f1.eval(x, j, self.len);
            if a != 0.0 {
                acc += BINOM[d][j] * a * self.f2.eval(x, d - j, self.len);
            }
        }
        acc
    }

    /// Largest hyperbolic decay rate in the product, if any.
    pub fn sinh_rate(&self) -> Option<f64> {
        match (self.f1.sinh_rate(), self.f2.sinh_rate()) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (Some(a), None) | (None, Some(a)) => Some(a),
            (None, None) => None,
        }
    }
}

/// The four decaying deflection profiles for one tangential mode, in the
/// order (far-localized first pair, near-localized second pair) matching the
/// boundary-coefficient layout.
#[derive(Debug, Clone)]
pub struct WProfileFamily {
    pub profiles: [Profile1d; 4],
    /// True when the complex-pair span had to drop its endpoint normalization
    /// because sin(alpha6 len) was near zero.
    pub degenerate_span: bool,
}

/// Threshold on |sin(alpha6 len)| below which the normalized complex-pair
/// span is ill-conditioned and the raw span is used instead.
pub const COMPLEX_SPAN_FLOOR: f64 = 0.1;

pub fn w_profile_family(roots: &WRoots, len: f64) -> WProfileFamily {
    use ProfFactor::*;
    match *roots {
        WRoots::RealDistinct { alpha1, alpha2 } => WProfileFamily {
            profiles: [
                Profile1d::single(SinhRatio { alpha: alpha1, reflected: false }, len),
                Profile1d::single(SinhRatio { alpha: alpha1, reflected: true }, len),
                Profile1d::single(SinhRatio { alpha: alpha2, reflected: false }, len),
                Profile1d::single(SinhRatio { alpha: alpha2, reflected: true }, len),
            ],
            degenerate_span: false,
        },
        WRoots::RealDouble { alpha3 } => WProfileFamily {
            profiles: [
                Profile1d::single(SinhRatio { alpha: alpha3, reflected: false }, len),
                Profile1d::new(
                    Ramp { reflected: false },
                    SinhRatio { alpha: alpha3, reflected: false },
                    len,
                ),
                Profile1d::single(SinhRatio { alpha: alpha3, reflected: true }, len),
                Profile1d::new(
                    Ramp { reflected: true },
                    SinhRatio { alpha: alpha3, reflected: true },
                    len,
                ),
            ],
            degenerate_span: false,
        },
        WRoots::ComplexPair { alpha5, alpha6 } => {
            let s = (alpha6 * len).sin();
            let grow = SinhRatio { alpha: alpha5, reflected: false };
            let decay = SinhRatio { alpha: alpha5, reflected: true };
            if s.abs() >= COMPLEX_SPAN_FLOOR {
                let osc = Trig(crate::profile::Trig { omega: alpha6, phase: 0.0, amp: 1.0 / s });
                let osc_r = Trig(crate::profile::Trig {
                    omega: alpha6,
                    phase: 0.0,
                    amp: 1.0 / s,
                }
                .reflected(len));
                WProfileFamily {
                    profiles: [
                        Profile1d::new(grow, osc, len),
                        Profile1d::new(grow, osc_r, len),
                        Profile1d::new(decay, osc, len),
                        Profile1d::new(decay, osc_r, len),
                    ],
                    degenerate_span: false,
                }
            } else {
                // sin(alpha6 x) and cos(alpha6 x) against each hyperbolic
                // envelope: same span, no 1/sin normalization.
                let sn = Trig(crate::profile::Trig::sine(alpha6));
                let cs = Trig(crate::profile::Trig::cosine(alpha6));
                let sn_r = Trig(crate::profile::Trig::sine(alpha6).reflected(len));
                let cs_r = Trig(crate::profile::Trig::cosine(alpha6).reflected(len));
                WProfileFamily {
                    profiles: [
                        Profile1d::new(grow, sn, len),
                        Profile1d::new(grow, cs, len),
                        Profile1d::new(decay, sn_r, len),
                        Profile1d::new(decay, cs_r, len),
                    ],
                    degenerate_span: true,
                }
            }
        }
    }
}

/// The two decaying stress-function profiles for one tangential mode.
pub fn psi_profile_pair(alpha7: f64, len: f64) -> [Profile1d; 2] {
    [
        Profile1d::single(ProfFactor::SinhRatio { alpha: alpha7, reflected: false }, len),
        Profile1d::single(ProfFactor::SinhRatio { alpha: alpha7, reflected: true }, len),
    ]
}

/// Corner interpolation cubics on [0, len], indexed 0..=3.
///
/// 0: carries the value at x = 0        (1 - x/len)
/// 1: carries the value at x = len      (x/len)
/// 2: carries f'' at x = 0, vanishing at both ends
/// 3: carries f'' at x = len, vanishing at both ends
///
/// Together they interpolate endpoint values and endpoint second derivatives,
/// which is exactly the data that limits sine-series convergence rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CornerPoly {
    pub index: usize,
    pub len: f64,
}

impl CornerPoly {
    pub fn eval(&self, x: f64, d: usize) -> f64 {
        let l = self.len;
        match (self.index, d) {
            (0, 0) => 1.0 - x / l,
            (0, 1) => -1.0 / l,
            (1, 0) => x / l,
            (1, 1) => 1.0 / l,
            (2, 0) => -x * x * x / (6.0 * l) + x * x / 2.0 - l * x / 3.0,
            (2, 1) => -x * x / (2.0 * l) + x - l / 3.0,
            (2, 2) => 1.0 - x / l,
            (2, 3) => -1.0 / l,
            (3, 0) => x * x * x / (6.0 * l) - l * x / 6.0,
            (3, 1) => x * x / (2.0 * l) - l / 6.0,
            (3, 2) => x / l,
            (3, 3) => 1.0 / l,
            (i, _) if i > 3 => panic!("corner index {i} out of range"),
            _ => 0.0,
        }
    }
}

/// One direction factor of a separable basis column.
#[derive(Debug, Clone)]
pub enum Factor1d {
    Poly(CornerPoly),
    Trig(Trig),
    Profile(Profile1d),
}

impl Factor1d {
    pub fn eval(&self, x: f64, d: usize) -> f64 {
        match self {
            Factor1d::Poly(p) => p.eval(x, d),
            Factor1d::Trig(t) => t.eval(x, d),
            Factor1d::Profile(p) => p.eval(x, d),
        }
    }

    pub fn sinh_rate(&self) -> Option<f64> {
        match self {
            Factor1d::Profile(p) => p.sinh_rate(),
            _ => None,
        }
    }
}
