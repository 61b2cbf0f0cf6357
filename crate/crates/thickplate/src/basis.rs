//! Catalog of separable basis columns.
//!
//! The trial space splits into four groups, stored in one fixed order that the
//! whole pipeline shares:
//!
//!   corner block    16        products of corner interpolation cubics
//!   interior block  M * N     sin x sin double series
//!   edge-w blocks   4N + 4M   decaying deflection profiles x tangential sines
//!   edge-psi blocks 2(N+1) + 2(M+1)  stress-function layers x tangential cosines
//!
//! The first two groups form the retained coefficients q03, the edge blocks
//! form q12 (later eliminated against prescribed boundary data). Every column
//! is X(x1) * Y(x2); the catalog stores deduplicated per-direction factor
//! lists and each column keeps indices into them, which is what lets stiffness
//! assembly factorize into 1D Gram matrices.

use crate::model::{Geometry, ModelSpec, Truncation};
use crate::profile::{
    psi_profile_pair, w_profile_family, CornerPoly, Factor1d, Profile1d, Trig,
};
use crate::spectra::{
    classify_regime, mode_wavenumber, psi_root, w_roots_at, RegimeCase, WRoots,
};
use crate::{PlateError, Result};

/// Hard ceiling on (decay rate) * (span length). Past this the profile is a
/// numerical step function and no quadrature budget resolves it.
pub const RATE_LEN_CAP: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dir {
    X1,
    X2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisId {
    /// Corner cubic x corner cubic, i (x1) and j (x2) in 0..=3.
    Corner { i: usize, j: usize },
    /// sin(m pi x1 / a) sin(n pi x2 / b), 1-based modes.
    Interior { m: usize, n: usize },
    /// Deflection boundary layer along `dir`, tangential mode (1-based),
    /// profile slot l in 0..=3.
    EdgeW { dir: Dir, mode: usize, l: usize },
    /// Stress-function boundary layer along `dir`, tangential mode (0-based,
    /// 0 = uniform), profile slot l in 0..=1.
    EdgePsi { dir: Dir, mode: usize, l: usize },
}

/// Which field a column carries; selects the derivative-row tables and caps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColKind {
    W,
    Psi,
}

impl ColKind {
    /// Highest total derivative order (d1 + d2) field rows may request.
    pub fn deriv_cap(&self) -> usize {
        match self {
            ColKind::W => 4,
            ColKind::Psi => 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BasisColumn {
    pub id: BasisId,
    pub kind: ColKind,
    /// Index into the catalog's x1 factor list.
    pub xf: usize,
    /// Index into the catalog's x2 factor list.
    pub yf: usize,
}

/// Index arithmetic for the shared coefficient layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub m: usize,
    pub n: usize,
}

impl Layout {
    pub fn n_corner(&self) -> usize {
        16
    }

    pub fn n_interior(&self) -> usize {
        self.m * self.n
    }

    /// Retained block: corners then interior modes.
    pub fn n03(&self) -> usize {
        self.n_corner() + self.n_interior()
    }

    /// Edge block: deflection layers then stress layers, x1 before x2.
    pub fn n12(&self) -> usize {
        4 * self.n + 4 * self.m + 2 * (self.n + 1) + 2 * (self.m + 1)
    }

    pub fn total(&self) -> usize {
        self.n03() + self.n12()
    }

    pub fn corner(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < 4 && j < 4);
        i * 4 + j
    }

    pub fn interior(&self, m: usize, n: usize) -> usize {
        debug_assert!((1..=self.m).contains(&m) && (1..=self.n).contains(&n));
        16 + (m - 1) * self.n + (n - 1)
    }

    pub fn edge_w(&self, dir: Dir, mode: usize, l: usize) -> usize {
        debug_assert!(l < 4);
        let base = self.n03();
        match dir {
            Dir::X1 => {
                debug_assert!((1..=self.n).contains(&mode));
                base + (mode - 1) * 4 + l
            }
            Dir::X2 => {
                debug_assert!((1..=self.m).contains(&mode));
                base + 4 * self.n + (mode - 1) * 4 + l
            }
        }
    }

    pub fn edge_psi(&self, dir: Dir, mode: usize, l: usize) -> usize {
        debug_assert!(l < 2);
        let base = self.n03() + 4 * self.n + 4 * self.m;
        match dir {
            Dir::X1 => {
                debug_assert!(mode <= self.n);
                base + mode * 2 + l
            }
            Dir::X2 => {
                debug_assert!(mode <= self.m);
                base + 2 * (self.n + 1) + mode * 2 + l
            }
        }
    }
}

/// Per-tangential-mode root report for one profile direction.
#[derive(Debug, Clone)]
pub struct DirectionRoots {
    /// Tangential wavenumbers, one per mode (1-based modes).
    pub taus: Vec<f64>,
    pub w_roots: Vec<WRoots>,
    /// Stress-layer rates for modes 0..=count.
    pub psi_rates: Vec<f64>,
    /// 1-based modes whose complex-pair span dropped its normalization.
    pub degenerate_modes: Vec<usize>,
    /// Largest hyperbolic rate over all profiles in this direction.
    pub max_rate: f64,
}

#[derive(Debug, Clone)]
pub struct Catalog {
    pub geom: Geometry,
    pub constants: crate::model::DerivedConstants,
    pub truncation: Truncation,
    pub layout: Layout,
    pub regime: RegimeCase,
    pub columns: Vec<BasisColumn>,
    pub x_factors: Vec<Factor1d>,
    pub y_factors: Vec<Factor1d>,
    /// Roots/rates of profiles running along x1 (layers on the x1 = const edges).
    pub x1_roots: DirectionRoots,
    pub x2_roots: DirectionRoots,
}

impl Catalog {
    pub fn column_value(&self, col: &BasisColumn, x1: f64, x2: f64, d1: usize, d2: usize) -> f64 {
        debug_assert!(d1 + d2 <= col.kind.deriv_cap());
        self.x_factors[col.xf].eval(x1, d1) * self.y_factors[col.yf].eval(x2, d2)
    }

    /// Cap-checked variant for callers driven by external input.
    pub fn column_value_checked(
        &self,
        idx: usize,
        x1: f64,
        x2: f64,
        d1: usize,
        d2: usize,
    ) -> Result<f64> {
        let col = &self.columns[idx];
        let cap = col.kind.deriv_cap();
        if d1 + d2 > cap {
            return Err(PlateError::DerivativeCap {
                family: match col.kind {
                    ColKind::W => "deflection column",
                    ColKind::Psi => "stress column",
                },
                requested: d1 + d2,
                cap,
            });
        }
        Ok(self.column_value(col, x1, x2, d1, d2))
    }
}

/// Per-direction factor construction: profiles normal to `dir`, trig factors
/// tangential to it. `normal_len` is the profile span, `tangent_len` the
/// other side.
fn direction_roots(
    c: &crate::model::DerivedConstants,
    n_modes: usize,
    normal_len: f64,
    tangent_len: f64,
) -> Result<(DirectionRoots, Vec<Profile1d>, Vec<Profile1d>)> {
    let mut taus = Vec::with_capacity(n_modes);
    let mut w_roots = Vec::with_capacity(n_modes);
    let mut degenerate = Vec::new();
    let mut max_rate = 0f64;
    let mut w_profiles = Vec::with_capacity(4 * n_modes);
    for mode in 1..=n_modes {
        let tau = mode_wavenumber(tangent_len, mode);
        let roots = w_roots_at(c, tau)?;
        check_rate(roots.max_rate(), normal_len, "deflection boundary layer")?;
        max_rate = max_rate.max(roots.max_rate());
        let fam = w_profile_family(&roots, normal_len);
        if fam.degenerate_span {
            degenerate.push(mode);
        }
        w_profiles.extend_from_slice(&fam.profiles);
        taus.push(tau);
        w_roots.push(roots);
    }
    let mut psi_rates = Vec::with_capacity(n_modes + 1);
    let mut psi_profiles = Vec::with_capacity(2 * (n_modes + 1));
    for mode in 0..=n_modes {
        let rate = psi_root(c.h, tangent_len, mode);
        check_rate(rate, normal_len, "stress boundary layer")?;
        max_rate = max_rate.max(rate);
        psi_profiles.extend_from_slice(&psi_profile_pair(rate, normal_len));
        psi_rates.push(rate);
    }
    Ok((
        DirectionRoots { taus, w_roots, psi_rates, degenerate_modes: degenerate, max_rate },
        w_profiles,
        psi_profiles,
    ))
}

fn check_rate(rate: f64, len: f64, what: &str) -> Result<()> {
    if !(rate * len).is_finite() || rate * len > RATE_LEN_CAP {
        return Err(PlateError::DegenerateBasis(format!(
            "{what} rate {rate:.3e} over span {len:.3e} exceeds the resolvable cap {RATE_LEN_CAP:.0e}"
        )));
    }
    Ok(())
}

pub fn build_catalog(spec: &ModelSpec) -> Result<Catalog> {
    let geom = spec.geometry;
    let c = spec.constants();
    let (m_count, n_count) = (spec.truncation.m, spec.truncation.n);
    let layout = Layout { m: m_count, n: n_count };
    let regime = classify_regime(&c);

    // x1 direction: profiles span [0, a], tangential modes run along x2.
    let (x1_roots, x1_wprof, x1_psiprof) = direction_roots(&c, n_count, geom.a, geom.b)?;
    let (x2_roots, x2_wprof, x2_psiprof) = direction_roots(&c, m_count, geom.b, geom.a)?;

    // Deduplicated factor lists. Offsets below must match push order.
    let build_factors = |len: f64,
                         trig_count: usize,
                         wprof: Vec<Profile1d>,
                         psiprof: Vec<Profile1d>| {
        let mut f: Vec<Factor1d> = Vec::new();
        for i in 0..4 {
            f.push(Factor1d::Poly(CornerPoly { index: i, len }));
        }
        for mode in 1..=trig_count {
            f.push(Factor1d::Trig(Trig::sine(mode_wavenumber(len, mode))));
        }
        f.extend(wprof.into_iter().map(Factor1d::Profile));
        f.extend(psiprof.into_iter().map(Factor1d::Profile));
        for mode in 0..=trig_count {
            f.push(Factor1d::Trig(Trig::cosine(mode_wavenumber(len, mode))));
        }
        f
    };
    let x_factors = build_factors(geom.a, m_count, x1_wprof, x1_psiprof);
    let y_factors = build_factors(geom.b, n_count, x2_wprof, x2_psiprof);

    // Offset helpers mirroring build_factors.
    let poly = |i: usize| i;
    let xsin = |m: usize| 4 + (m - 1);
    let ysin = |n: usize| 4 + (n - 1);
    let xwprof = |n: usize, l: usize| 4 + m_count + (n - 1) * 4 + l;
    let ywprof = |m: usize, l: usize| 4 + n_count + (m - 1) * 4 + l;
    let xpsiprof = |n: usize, l: usize| 4 + m_count + 4 * n_count + n * 2 + l;
    let ypsiprof = |m: usize, l: usize| 4 + n_count + 4 * m_count + m * 2 + l;
    let xcos = |m: usize| 4 + m_count + 4 * n_count + 2 * (n_count + 1) + m;
    let ycos = |n: usize| 4 + n_count + 4 * m_count + 2 * (m_count + 1) + n;

    let mut columns = Vec::with_capacity(layout.total());
    for i in 0..4 {
        for j in 0..4 {
            columns.push(BasisColumn {
                id: BasisId::Corner { i, j },
                kind: ColKind::W,
                xf: poly(i),
                yf: poly(j),
            });
        }
    }
    for m in 1..=m_count {
        for n in 1..=n_count {
            columns.push(BasisColumn {
                id: BasisId::Interior { m, n },
                kind: ColKind::W,
                xf: xsin(m),
                yf: ysin(n),
            });
        }
    }
    for n in 1..=n_count {
        for l in 0..4 {
            columns.push(BasisColumn {
                id: BasisId::EdgeW { dir: Dir::X1, mode: n, l },
                kind: ColKind::W,
                xf: xwprof(n, l),
                yf: ysin(n),
            });
        }
    }
    for m in 1..=m_count {
        for l in 0..4 {
            columns.push(BasisColumn {
                id: BasisId::EdgeW { dir: Dir::X2, mode: m, l },
                kind: ColKind::W,
                xf: xsin(m),
                yf: ywprof(m, l),
            });
        }
    }
    for n in 0..=n_count {
        for l in 0..2 {
            columns.push(BasisColumn {
                id: BasisId::EdgePsi { dir: Dir::X1, mode: n, l },
                kind: ColKind::Psi,
                xf: xpsiprof(n, l),
                yf: ycos(n),
            });
        }
    }
    for m in 0..=m_count {
        for l in 0..2 {
            columns.push(BasisColumn {
                id: BasisId::EdgePsi { dir: Dir::X2, mode: m, l },
                kind: ColKind::Psi,
                xf: xcos(m),
                yf: ypsiprof(m, l),
            });
        }
    }
    debug_assert_eq!(columns.len(), layout.total());

    Ok(Catalog {
        geom,
        constants: c,
        truncation: spec.truncation,
        layout,
        regime,
        columns,
        x_factors,
        y_factors,
        x1_roots,
        x2_roots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        DerivedConstants, EdgeKind, EdgeSet, Foundation, Load, Material, ModelSpec, ScaleFactors,
    };

    fn spec(kr: f64, gpr: f64, h: f64, m: usize, n: usize) -> ModelSpec {
        let mu = 0.3;
        ModelSpec {
            geometry: Geometry { a: 1.0, b: 1.0, h },
            material: Material { e: 12.0 * (1.0 - mu * mu) / h.powi(3), mu },
            foundation: Foundation::Nondimensional { k_r: kr, g_pr: gpr },
            edges: EdgeSet::uniform(EdgeKind::Clamped),
            load: Load::Uniform { q0: 1.0 },
            truncation: Truncation { m, n },
            scale: ScaleFactors::identity(),
        }
    }

    #[test]
    fn block_sizes() {
        let cat = build_catalog(&spec(1.0, 1.0, 0.1, 2, 2)).unwrap();
        assert_eq!(cat.layout.n03(), 20);
        assert_eq!(cat.layout.n12(), 28);
        assert_eq!(cat.columns.len(), 48);

        let cat = build_catalog(&spec(1.0, 1.0, 0.1, 20, 20)).unwrap();
        assert_eq!(cat.layout.n03(), 416);
        assert_eq!(cat.layout.n12(), 244);
        assert_eq!(cat.columns.len(), 660);
    }

    #[test]
    fn layout_indices_agree_with_column_order() {
        let cat = build_catalog(&spec(100.0, 10.0, 0.1, 3, 2)).unwrap();
        let lay = cat.layout;
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(cat.columns[lay.corner(i, j)].id, BasisId::Corner { i, j });
            }
        }
        for m in 1..=3 {
            for n in 1..=2 {
                assert_eq!(cat.columns[lay.interior(m, n)].id, BasisId::Interior { m, n });
            }
        }
        for n in 1..=2 {
            for l in 0..4 {
                assert_eq!(
                    cat.columns[lay.edge_w(Dir::X1, n, l)].id,
                    BasisId::EdgeW { dir: Dir::X1, mode: n, l }
                );
            }
        }
        for m in 1..=3 {
            for l in 0..4 {
                assert_eq!(
                    cat.columns[lay.edge_w(Dir::X2, m, l)].id,
                    BasisId::EdgeW { dir: Dir::X2, mode: m, l }
                );
            }
        }
        for n in 0..=2 {
            for l in 0..2 {
                assert_eq!(
                    cat.columns[lay.edge_psi(Dir::X1, n, l)].id,
                    BasisId::EdgePsi { dir: Dir::X1, mode: n, l }
                );
            }
        }
        for m in 0..=3 {
            for l in 0..2 {
                assert_eq!(
                    cat.columns[lay.edge_psi(Dir::X2, m, l)].id,
                    BasisId::EdgePsi { dir: Dir::X2, mode: m, l }
                );
            }
        }
        // Every factor index in range, kinds partitioned as expected.
        for col in &cat.columns {
            assert!(col.xf < cat.x_factors.len() && col.yf < cat.y_factors.len());
        }
    }

    #[test]
    fn interior_column_is_a_product_of_sines() {
        let cat = build_catalog(&spec(1.0, 1.0, 0.1, 3, 3)).unwrap();
        let idx = cat.layout.interior(2, 3);
        let col = &cat.columns[idx];
        let (x1, x2) = (0.37, 0.81);
        let pi = std::f64::consts::PI;
        let want = (2.0 * pi * x1).sin() * (3.0 * pi * x2).sin();
        assert!((cat.column_value(col, x1, x2, 0, 0) - want).abs() < 1e-14);
        // (2,2) derivative: (2 pi)^2 (3 pi)^2 * product of sines.
        let want22 = (2.0 * pi).powi(2) * (3.0 * pi).powi(2) * want;
        assert!((cat.column_value(col, x1, x2, 2, 2) - want22).abs() < 1e-9);
    }

    #[test]
    fn edge_columns_endpoint_normalized() {
        // Scheme with distinct real roots so the plain sinh-ratio span applies.
        let cat = build_catalog(&spec(1e4, 300.0, 0.1, 2, 2)).unwrap();
        assert_eq!(cat.regime, RegimeCase::RealDistinct);
        let x2 = 0.3;
        for n in 1..=2 {
            let tau = cat.x1_roots.taus[n - 1];
            let s = (tau * x2).sin();
            // Slot 0 grows toward x1 = a, slot 1 is its reflection.
            let c0 = &cat.columns[cat.layout.edge_w(Dir::X1, n, 0)];
            assert!((cat.column_value(c0, 1.0, x2, 0, 0) - s).abs() < 1e-12);
            assert!(cat.column_value(c0, 0.0, x2, 0, 0).abs() < 1e-12);
            let c1 = &cat.columns[cat.layout.edge_w(Dir::X1, n, 1)];
            assert!((cat.column_value(c1, 0.0, x2, 0, 0) - s).abs() < 1e-12);
        }
        // Stress layers: uniform tangential mode exists and is normalized.
        let p0 = &cat.columns[cat.layout.edge_psi(Dir::X2, 0, 0)];
        assert!((cat.column_value(p0, 0.4, 1.0, 0, 0) - 1.0).abs() < 1e-12);
        assert!(cat.column_value(p0, 0.4, 0.0, 0, 0).abs() < 1e-12);
    }

    #[test]
    fn derivative_cap_is_enforced() {
        let cat = build_catalog(&spec(1.0, 1.0, 0.1, 2, 2)).unwrap();
        let w_idx = cat.layout.interior(1, 1);
        assert!(cat.column_value_checked(w_idx, 0.5, 0.5, 2, 2).is_ok());
        assert!(matches!(
            cat.column_value_checked(w_idx, 0.5, 0.5, 3, 2),
            Err(PlateError::DerivativeCap { cap: 4, requested: 5, .. })
        ));
        let p_idx = cat.layout.edge_psi(Dir::X1, 0, 0);
        assert!(cat.column_value_checked(p_idx, 0.5, 0.5, 1, 1).is_ok());
        assert!(matches!(
            cat.column_value_checked(p_idx, 0.5, 0.5, 2, 1),
            Err(PlateError::DerivativeCap { cap: 2, .. })
        ));
    }

    #[test]
    fn unresolvable_layer_rate_is_rejected() {
        // h = 1e-5 puts the stress-layer rate near 3e5 per unit span.
        let err = build_catalog(&spec(1.0, 1.0, 1e-5, 2, 2)).unwrap_err();
        assert!(matches!(err, PlateError::DegenerateBasis(_)), "{err:?}");
    }

    /// Five-point first-derivative stencil.
    fn fd5(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
        (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
    }

    /// Check analytic order-d derivatives against stencils applied to analytic
    /// order d-1, in both directions, for every requested order.
    fn check_column_derivs(cat: &Catalog, idx: usize, pts: &[(f64, f64)], rate: f64) {
        let col = &cat.columns[idx];
        let cap = col.kind.deriv_cap();
        let h = (1e-4f64).min(0.03 / rate.max(1.0));
        for &(x1, x2) in pts {
            for d in 1..=cap {
                let an = cat.column_value(col, x1, x2, d, 0);
                let fd = fd5(|y| cat.column_value(col, y, x2, d - 1, 0), x1, h);
                let scale = rate.powi(d as i32).max(1.0);
                assert!(
                    (an - fd).abs() < 1e-6 * an.abs().max(scale),
                    "{:?} d1 = {d} at ({x1}, {x2}): analytic {an}, fd {fd}",
                    col.id
                );
                let an = cat.column_value(col, x1, x2, 0, d);
                let fd = fd5(|y| cat.column_value(col, x1, y, 0, d - 1), x2, h);
                assert!(
                    (an - fd).abs() < 1e-6 * an.abs().max(scale),
                    "{:?} d2 = {d} at ({x1}, {x2}): analytic {an}, fd {fd}",
                    col.id
                );
            }
            // One mixed order: d/dx1 of the (1, 1) entry against (0, 1).
            if cap >= 2 {
                let an = cat.column_value(col, x1, x2, 1, 1);
                let fd = fd5(|y| cat.column_value(col, y, x2, 0, 1), x1, h);
                assert!((an - fd).abs() < 1e-6 * an.abs().max(rate * rate));
            }
        }
    }

    #[test]
    fn derivatives_validated_by_stencils_all_regimes() {
        // Complex pair, real distinct, and a thin plate with fast psi layers.
        for (kr, gpr, h) in [(1.0, 1.0, 0.1), (1e4, 300.0, 0.1), (10.0, 5.0, 0.01)] {
            let cat = build_catalog(&spec(kr, gpr, h, 2, 2)).unwrap();
            let pts = [(0.31, 0.47), (0.87, 0.13), (0.5, 0.93)];
            let rate_x = cat.x1_roots.max_rate;
            let rate_y = cat.x2_roots.max_rate;
            let lay = cat.layout;
            check_column_derivs(&cat, lay.corner(2, 3), &pts, 1.0);
            check_column_derivs(&cat, lay.interior(2, 1), &pts, 2.0 * std::f64::consts::PI);
            for l in 0..4 {
                check_column_derivs(&cat, lay.edge_w(Dir::X1, 2, l), &pts, rate_x);
                check_column_derivs(&cat, lay.edge_w(Dir::X2, 1, l), &pts, rate_y);
            }
            for l in 0..2 {
                check_column_derivs(&cat, lay.edge_psi(Dir::X1, 1, l), &pts, rate_x);
                check_column_derivs(&cat, lay.edge_psi(Dir::X2, 2, l), &pts, rate_y);
            }
        }
    }

    /// The deflection layers must solve the homogeneous plate-on-foundation
    /// equation; the stress layers the screened Laplace equation.
    #[test]
    fn edge_columns_annihilated_by_their_operators() {
        for (kr, gpr, h) in [(1.0, 1.0, 0.1), (1e4, 300.0, 0.1), (1e6, 2000.0, 0.1)] {
            let sp = spec(kr, gpr, h, 3, 3);
            let cat = build_catalog(&sp).unwrap();
            let c = sp.constants();
            let pts = sample_points(&cat.geom);
            for n in 1..=3 {
                for l in 0..4 {
                    assert_w_annihilated(&cat, &c, cat.layout.edge_w(Dir::X1, n, l), &pts);
                    assert_w_annihilated(&cat, &c, cat.layout.edge_w(Dir::X2, n, l), &pts);
                }
            }
            for mode in 0..=3 {
                for l in 0..2 {
                    assert_psi_annihilated(&cat, &c, cat.layout.edge_psi(Dir::X1, mode, l), &pts);
                    assert_psi_annihilated(&cat, &c, cat.layout.edge_psi(Dir::X2, mode, l), &pts);
                }
            }
        }
    }

    fn sample_points(geom: &Geometry) -> Vec<(f64, f64)> {
        let mut pts = Vec::new();
        for &u in &[0.02, 0.1, 0.35, 0.5, 0.71, 0.9, 0.98] {
            for &v in &[0.07, 0.5, 0.95] {
                pts.push((u * geom.a, v * geom.b));
            }
        }
        pts
    }

    fn assert_w_annihilated(
        cat: &Catalog,
        c: &DerivedConstants,
        idx: usize,
        pts: &[(f64, f64)],
    ) {
        let col = &cat.columns[idx];
        let mut max_phi = 0f64;
        let mut max_res = 0f64;
        for &(x1, x2) in pts {
            let v = |d1, d2| cat.column_value(col, x1, x2, d1, d2);
            let lap = v(2, 0) + v(0, 2);
            let bilap = v(4, 0) + 2.0 * v(2, 2) + v(0, 4);
            let res = c.d_h * bilap - c.g_ph * lap + c.k * v(0, 0);
            max_phi = max_phi.max(v(0, 0).abs());
            max_res = max_res.max(res.abs());
        }
        let rate = match col.id {
            BasisId::EdgeW { dir: Dir::X1, mode, .. } => {
                cat.x1_roots.w_roots[mode - 1].max_rate().max(cat.x1_roots.taus[mode - 1])
            }
            BasisId::EdgeW { dir: Dir::X2, mode, .. } => {
                cat.x2_roots.w_roots[mode - 1].max_rate().max(cat.x2_roots.taus[mode - 1])
            }
            _ => panic!("not an edge-w column"),
        };
        let scale = c.d_h * rate.max(1.0).powi(4) * max_phi.max(1e-3);
        assert!(
            max_res <= 1e-8 * scale,
            "{:?}: residual {max_res:.3e} vs scale {scale:.3e}",
            col.id
        );
    }

    fn assert_psi_annihilated(
        cat: &Catalog,
        c: &DerivedConstants,
        idx: usize,
        pts: &[(f64, f64)],
    ) {
        let col = &cat.columns[idx];
        let shift = 10.0 / (c.h * c.h);
        let mut max_phi = 0f64;
        let mut max_res = 0f64;
        for &(x1, x2) in pts {
            let v = |d1, d2| cat.column_value(col, x1, x2, d1, d2);
            let res = v(2, 0) + v(0, 2) - shift * v(0, 0);
            max_phi = max_phi.max(v(0, 0).abs());
            max_res = max_res.max(res.abs());
        }
        let rate = match col.id {
            BasisId::EdgePsi { dir: Dir::X1, mode, .. } => cat.x1_roots.psi_rates[mode],
            BasisId::EdgePsi { dir: Dir::X2, mode, .. } => cat.x2_roots.psi_rates[mode],
            _ => panic!("not an edge-psi column"),
        };
        let scale = rate.powi(2) * max_phi.max(1e-3);
        assert!(
            max_res <= 1e-8 * scale,
            "{:?}: residual {max_res:.3e} vs scale {scale:.3e}",
            col.id
        );
    }

    /// Endpoint value/slope matrix of each deflection family must be usably
    /// conditioned; this is what boundary elimination ultimately inverts.
    #[test]
    fn profile_families_well_conditioned_at_endpoints() {
        for (kr, gpr) in [(1.0, 1.0), (100.0, 10.0), (1e4, 100.0), (1e6, 2000.0)] {
            let cat = build_catalog(&spec(kr, gpr, 0.1, 4, 4)).unwrap();
            for n in 1..=4 {
                let mut e = nalgebra::Matrix4::<f64>::zeros();
                for l in 0..4 {
                    let f = &cat.x_factors[cat.columns[cat.layout.edge_w(Dir::X1, n, l)].xf];
                    e[(0, l)] = f.eval(cat.geom.a, 0);
                    e[(1, l)] = f.eval(cat.geom.a, 1) / cat.x1_roots.max_rate;
                    e[(2, l)] = f.eval(0.0, 0);
                    e[(3, l)] = f.eval(0.0, 1) / cat.x1_roots.max_rate;
                }
                let svd = e.svd(false, false);
                let cond = svd.singular_values.max() / svd.singular_values.min();
                assert!(cond < 1e8, "kr = {kr}, gpr = {gpr}, n = {n}: cond = {cond:.3e}");
            }
        }
    }

    #[test]
    fn regime_reported_per_scheme() {
        assert_eq!(build_catalog(&spec(1.0, 1.0, 0.1, 2, 2)).unwrap().regime, RegimeCase::ComplexPair);
        assert_eq!(
            build_catalog(&spec(1e4, 300.0, 0.1, 2, 2)).unwrap().regime,
            RegimeCase::RealDistinct
        );
    }
}
