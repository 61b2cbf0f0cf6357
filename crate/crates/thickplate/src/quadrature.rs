//! Graded Gauss quadrature for integrands with boundary layers.
//!
//! Each direction gets a panelized Gauss-Legendre rule with three zones: a
//! layer zone at each end whose panel width tracks the fastest decay rate
//! (width 1.5 / alpha keeps the per-panel order-8 error below 1e-14 even for
//! products of two layers), and a core zone sized to the highest trig mode.
//! The layer zone extends to 45 / alpha, beyond which a unit-normalized layer
//! is below 3e-20 and the core panels take over.

use crate::basis::Catalog;
use crate::{PlateError, Result};

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub gauss_order: usize,
    /// Halve every panel width this many times (stability checks).
    pub refine: u32,
    pub panel_cap: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { gauss_order: 8, refine: 0, panel_cap: 512 }
    }
}

#[derive(Debug, Clone)]
pub struct Rule1d {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub len: f64,
    pub panels: usize,
}

impl Rule1d {
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Tensor rule over the rectangle; edge integrals reuse the 1D member running
/// along the edge.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub x: Rule1d,
    pub y: Rule1d,
}

/// Gauss-Legendre nodes and weights on [-1, 1] for any order, by Newton
/// iteration on the three-term recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Chebyshev-like initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_pair(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                let (p2, d2) = legendre_pair(n, x);
                dp = d2;
                x -= p2 / d2; // one polishing step
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, d) = legendre_pair(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    (nodes, weights)
}

/// (P_n(x), P_n'(x)) by upward recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Ratio of layer-panel width to 1/alpha.
const LAYER_PANEL_RATE: f64 = 1.5;
/// Layer zone reach in units of 1/alpha; e^-45 is below f64 resolution of a
/// unit-scale integrand.
const LAYER_REACH: f64 = 45.0;

/// Panel boundaries on [0, len] graded for `alpha_max` layers at both ends
/// and trig modes up to `modes`.
fn graded_edges(
    len: f64,
    modes: usize,
    alpha_max: Option<f64>,
    opts: &QuadOptions,
) -> Result<Vec<f64>> {
    let shrink = 2f64.powi(opts.refine as i32);
    let h_core = len / (2.0 * modes.max(2) as f64) / shrink;
    let (w_layer, x_cut) = match alpha_max {
        Some(a) if a > 0.0 => (
            (LAYER_PANEL_RATE / a / shrink).min(h_core),
            (LAYER_REACH / a).min(len / 2.0),
        ),
        _ => (h_core, 0.0),
    };

    let mut edges = vec![0.0];
    let push_zone = |from: f64, to: f64, width: f64, edges: &mut Vec<f64>| {
        if to - from < 1e-14 * len {
            return;
        }
        let count = ((to - from) / width).ceil() as usize;
        let w = (to - from) / count.max(1) as f64;
        for i in 1..=count {
            edges.push(from + w * i as f64);
        }
    };
    push_zone(0.0, x_cut, w_layer, &mut edges);
    push_zone(x_cut, len - x_cut, h_core, &mut edges);
    push_zone(len - x_cut, len, w_layer, &mut edges);
    *edges.last_mut().unwrap() = len;

    let panels = edges.len() - 1;
    if panels > opts.panel_cap {
        return Err(PlateError::RefinementCap { needed: panels, cap: opts.panel_cap });
    }
    Ok(edges)
}

pub fn build_rule(
    len: f64,
    modes: usize,
    alpha_max: Option<f64>,
    opts: &QuadOptions,
) -> Result<Rule1d> {
    let edges = graded_edges(len, modes, alpha_max, opts)?;
    let (gx, gw) = gauss_legendre(opts.gauss_order);
    let panels = edges.len() - 1;
    let mut nodes = Vec::with_capacity(panels * opts.gauss_order);
    let mut weights = Vec::with_capacity(panels * opts.gauss_order);
    for p in 0..panels {
        let (a, b) = (edges[p], edges[p + 1]);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (t, w) in gx.iter().zip(&gw) {
            nodes.push(mid + half * t);
            weights.push(half * w);
        }
    }
    Ok(Rule1d { nodes, weights, len, panels })
}

/// Rules for both directions of a catalog. `extra_modes` folds in trig content
/// beyond the basis itself (e.g. a high sinusoidal load mode).
pub fn build_quadrature(
    cat: &Catalog,
    extra_modes: (usize, usize),
    opts: &QuadOptions,
) -> Result<QuadratureRule> {
    let rate = |r: f64| if r > 0.0 { Some(r) } else { None };
    Ok(QuadratureRule {
        x: build_rule(
            cat.geom.a,
            cat.truncation.m.max(extra_modes.0),
            rate(cat.x1_roots.max_rate),
            opts,
        )?,
        y: build_rule(
            cat.geom.b,
            cat.truncation.n.max(extra_modes.1),
            rate(cat.x2_roots.max_rate),
            opts,
        )?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_interval_rule_is_standard() {
        let (x, w) = gauss_legendre(8);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        for i in 0..8 {
            assert!((x[i] + x[7 - i]).abs() < 1e-14);
            assert!((w[i] - w[7 - i]).abs() < 1e-14);
        }
        // Largest order-8 node, to published precision.
        assert!((x[7] - 0.960_289_856_497_536_2).abs() < 1e-14);
        // Degree-15 exactness: integral of x^14 is 2/15.
        let v: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(14)).sum();
        assert!((v - 2.0 / 15.0).abs() < 1e-14);
        // Odd order keeps the center node.
        let (x9, w9) = gauss_legendre(9);
        assert_eq!(x9[4], 0.0);
        assert!((w9.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn weights_cover_interval_and_stay_inside() {
        for (len, modes, alpha) in [(1.0, 20, Some(316.0)), (2.5, 4, None), (0.5, 40, Some(3162.0))] {
            let r = build_rule(len, modes, alpha, &QuadOptions::default()).unwrap();
            let sum: f64 = r.weights.iter().sum();
            assert!((sum - len).abs() < 1e-12 * len, "sum = {sum}");
            assert!(r.nodes.iter().all(|&x| x > 0.0 && x < len));
            assert!(r.weights.iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn resolves_highest_trig_mode() {
        let r = build_rule(1.0, 20, None, &QuadOptions::default()).unwrap();
        for m in [1, 7, 20] {
            let om = m as f64 * std::f64::consts::PI;
            let v = r.integrate(|x| (om * x).sin().powi(2));
            assert!((v - 0.5).abs() < 1e-13, "m = {m}: {v}");
        }
    }

    #[test]
    fn resolves_sharp_layers() {
        // alpha e^(-alpha x) integrates to 1 - e^(-alpha); relative 1e-13.
        for alpha in [50.0, 316.0, 3162.0] {
            let r = build_rule(1.0, 20, Some(alpha), &QuadOptions::default()).unwrap();
            let v = r.integrate(|x| alpha * (-alpha * x).exp());
            assert!((v - 1.0).abs() < 1e-13, "alpha = {alpha}: {v}");
            // Product of two layers, one per end: exact value
            // integral of alpha^2 e^(-alpha x) e^(-alpha (1-x)) = alpha^2 e^-alpha.
            let v2 = r.integrate(|x| (-alpha * x).exp() * (-alpha * (1.0 - x)).exp());
            let want = (-alpha).exp();
            assert!((v2 - want).abs() < 1e-13 * want.max(1e-300), "alpha = {alpha}");
        }
    }

    #[test]
    fn layer_times_oscillation() {
        // e^(-alpha x) sin(beta x): exact value beta / (alpha^2 + beta^2) minus tail.
        let (alpha, beta) = (316.0, 20.0 * std::f64::consts::PI);
        let r = build_rule(1.0, 20, Some(alpha), &QuadOptions::default()).unwrap();
        let v = r.integrate(|x| (-alpha * x).exp() * (beta * x).sin());
        let want = beta / (alpha * alpha + beta * beta); // tail < e^-316
        assert!((v - want).abs() < 1e-13 * want);
    }

    #[test]
    fn refinement_halves_panels_and_preserves_values() {
        let base = build_rule(1.0, 10, Some(100.0), &QuadOptions::default()).unwrap();
        let fine = build_rule(
            1.0,
            10,
            Some(100.0),
            &QuadOptions { refine: 1, ..QuadOptions::default() },
        )
        .unwrap();
        assert!(fine.panels >= 2 * base.panels - 2);
        let f = |x: f64| (-100.0 * x).exp() * (5.0 * x).cos() + x * x;
        assert!((base.integrate(f) - fine.integrate(f)).abs() < 1e-12);
    }

    #[test]
    fn panel_cap_reported() {
        let err = build_rule(
            1.0,
            20,
            Some(316.0),
            &QuadOptions { panel_cap: 10, ..QuadOptions::default() },
        )
        .unwrap_err();
        match err {
            PlateError::RefinementCap { needed, cap } => {
                assert!(needed > 10 && cap == 10);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tensor_rule_integrates_separable_products() {
        use crate::basis::build_catalog;
        use crate::model::*;
        let mu = 0.3;
        let spec = ModelSpec {
            geometry: Geometry { a: 1.0, b: 0.5, h: 0.05 },
            material: Material { e: 12.0 * (1.0 - mu * mu) / 0.05f64.powi(3), mu },
            foundation: Foundation::Nondimensional { k_r: 100.0, g_pr: 10.0 },
            edges: EdgeSet::uniform(EdgeKind::Clamped),
            load: Load::Uniform { q0: 1.0 },
            truncation: Truncation { m: 4, n: 4 },
            scale: ScaleFactors::identity(),
        };
        let cat = build_catalog(&spec).unwrap();
        let q = build_quadrature(&cat, (1, 1), &QuadOptions::default()).unwrap();
        let pi = std::f64::consts::PI;
        let mut acc = 0.0;
        for (&x, &wx) in q.x.nodes.iter().zip(&q.x.weights) {
            let sx = (pi * x).sin();
            let mut inner = 0.0;
            for (&y, &wy) in q.y.nodes.iter().zip(&q.y.weights) {
                inner += wy * (2.0 * pi * y / 0.5).sin().powi(2);
            }
            acc += wx * sx * sx * inner;
        }
        assert!((acc - 0.5 * 0.25).abs() < 1e-13);
    }
}
