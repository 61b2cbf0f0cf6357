//! Boundary elimination: swap raw edge-layer amplitudes for edge-trace
//! Fourier coefficients.
//!
//! For each edge (order x1 = a, x1 = 0, x2 = b, x2 = 0) the traces of three
//! fields are expanded along the edge: deflection w (sine series), normal
//! rotation (sine series), tangential rotation (cosine series, including the
//! mean). Stacking all coefficients gives q_b, with exactly as many entries
//! as there are edge-layer columns q12. The map R [q03; q12] = q_b is linear;
//! solving its q12 block turns the unknowns into the physically meaningful
//! q_b, so essential boundary conditions become "fix this coefficient".
//!
//!   q12 = A q03 + B q_b,  A = -R12^-1 R03,  B = R12^-1,
//!   q = T [q03; q_b],     T = [[I, 0], [A, B]].

use nalgebra::{DMatrix, DVector};

use crate::basis::{Catalog, ColKind};
use crate::fields::{field_row, FieldKind, Monomial};
use crate::linalg::PreparedSolver;
use crate::model::{Edge, EdgeCondition, ModelSpec, EDGES};
use crate::quadrature::{QuadratureRule, Rule1d};
use crate::Result;

/// Index arithmetic for the edge-coefficient vector q_b.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeLayout {
    pub m: usize,
    pub n: usize,
}

/// The three trace components of one edge, in storage order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceComponent {
    W,
    NormalRotation,
    TangentialRotation,
}

impl EdgeLayout {
    /// Sine-mode count along the given edge (modes 1..=count).
    pub fn sine_modes(&self, e: Edge) -> usize {
        if e.is_x1_edge() {
            self.n
        } else {
            self.m
        }
    }

    fn per_edge(&self, e: Edge) -> usize {
        3 * self.sine_modes(e) + 1
    }

    pub fn edge_offset(&self, e: Edge) -> usize {
        EDGES
            .iter()
            .take_while(|&&x| x != e)
            .map(|&x| self.per_edge(x))
            .sum()
    }

    /// Global q_b index. Sine components take 1-based modes; the tangential
    /// rotation takes 0-based modes (0 = mean).
    pub fn index(&self, e: Edge, comp: TraceComponent, mode: usize) -> usize {
        let s = self.sine_modes(e);
        let base = self.edge_offset(e);
        match comp {
            TraceComponent::W => {
                debug_assert!((1..=s).contains(&mode));
                base + mode - 1
            }
            TraceComponent::NormalRotation => {
                debug_assert!((1..=s).contains(&mode));
                base + s + mode - 1
            }
            TraceComponent::TangentialRotation => {
                debug_assert!(mode <= s);
                base + 2 * s + mode
            }
        }
    }

    pub fn total(&self) -> usize {
        EDGES.iter().map(|&e| self.per_edge(e)).sum()
    }
}

/// Fourier coefficients of a function sampled by a 1D rule: sine modes
/// 1..=count, with the (2/len) normalization so that f = sum c_k sin(k pi t / len).
pub fn sine_coeffs(rule: &Rule1d, count: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
    let vals: Vec<f64> = rule.nodes.iter().map(|&t| f(t)).collect();
    (1..=count)
        .map(|k| {
            let om = k as f64 * std::f64::consts::PI / rule.len;
            let s: f64 = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .zip(&vals)
                .map(|((&t, &w), &v)| w * v * (om * t).sin())
                .sum();
            2.0 / rule.len * s
        })
        .collect()
}

/// Cosine coefficients, modes 0..=count: f = c_0 + sum_{k>=1} c_k cos(k pi t / len).
pub fn cosine_coeffs(rule: &Rule1d, count: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
    let vals: Vec<f64> = rule.nodes.iter().map(|&t| f(t)).collect();
    (0..=count)
        .map(|k| {
            let om = k as f64 * std::f64::consts::PI / rule.len;
            let s: f64 = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .zip(&vals)
                .map(|((&t, &w), &v)| w * v * (om * t).cos())
                .sum();
            let norm = if k == 0 { 1.0 } else { 2.0 };
            norm / rule.len * s
        })
        .collect()
}

/// The field whose trace fills each component, per edge orientation.
pub fn trace_field(e: Edge, comp: TraceComponent) -> FieldKind {
    match (comp, e.is_x1_edge()) {
        (TraceComponent::W, _) => FieldKind::W,
        (TraceComponent::NormalRotation, true) => FieldKind::BetaX1,
        (TraceComponent::NormalRotation, false) => FieldKind::BetaX2,
        (TraceComponent::TangentialRotation, true) => FieldKind::BetaX2,
        (TraceComponent::TangentialRotation, false) => FieldKind::BetaX1,
    }
}

/// Per-direction tables used to assemble R: endpoint derivatives of the
/// normal factor and trig-weighted integrals of the tangential factor.
struct EdgeTables {
    /// normal_end[d][factor]: d-th derivative of each normal-direction factor
    /// at the edge's fixed coordinate.
    normal_end: Vec<Vec<f64>>,
    /// sin_int[d][factor][mode-1] = (2/len) integral of factor^(d)(t) sin(mode pi t / len).
    sin_int: Vec<Vec<Vec<f64>>>,
    /// cos_int[d][factor][mode], mode 0 carries the 1/len mean normalization.
    cos_int: Vec<Vec<Vec<f64>>>,
}

fn edge_tables(cat: &Catalog, e: Edge, rule: &QuadratureRule, lay: &EdgeLayout) -> EdgeTables {
    let (normal_factors, tangent_factors, tangent_rule) = if e.is_x1_edge() {
        (&cat.x_factors, &cat.y_factors, &rule.y)
    } else {
        (&cat.y_factors, &cat.x_factors, &rule.x)
    };
    let x_e = e.fixed_coord(&cat.geom);
    let max_d = 4;
    let normal_end: Vec<Vec<f64>> = (0..=max_d)
        .map(|d| normal_factors.iter().map(|f| f.eval(x_e, d)).collect())
        .collect();

    let len = tangent_rule.len;
    let s = lay.sine_modes(e);
    let nodes = &tangent_rule.nodes;
    let weights = &tangent_rule.weights;
    let mut sin_tab = vec![vec![0.0; nodes.len()]; s];
    let mut cos_tab = vec![vec![0.0; nodes.len()]; s + 1];
    for (j, &t) in nodes.iter().enumerate() {
        for k in 1..=s {
            let om = k as f64 * std::f64::consts::PI / len;
            sin_tab[k - 1][j] = (om * t).sin() * weights[j] * 2.0 / len;
        }
        cos_tab[0][j] = weights[j] / len;
        for k in 1..=s {
            let om = k as f64 * std::f64::consts::PI / len;
            cos_tab[k][j] = (om * t).cos() * weights[j] * 2.0 / len;
        }
    }

    let mut sin_int = vec![vec![vec![0.0; s]; tangent_factors.len()]; max_d + 1];
    let mut cos_int = vec![vec![vec![0.0; s + 1]; tangent_factors.len()]; max_d + 1];
    for (fi, f) in tangent_factors.iter().enumerate() {
        for d in 0..=max_d {
            let vals: Vec<f64> = nodes.iter().map(|&t| f.eval(t, d)).collect();
            for k in 0..s {
                sin_int[d][fi][k] = sin_tab[k].iter().zip(&vals).map(|(a, b)| a * b).sum();
            }
            for k in 0..=s {
                cos_int[d][fi][k] = cos_tab[k].iter().zip(&vals).map(|(a, b)| a * b).sum();
            }
        }
    }
    EdgeTables { normal_end, sin_int, cos_int }
}

/// Trace-coefficient matrix R: rows ordered by `EdgeLayout`, columns by the
/// catalog. Entry (row, col) is the row-th edge coefficient of the col-th
/// column's trace.
pub fn build_r(cat: &Catalog, rule: &QuadratureRule) -> DMatrix<f64> {
    let lay = EdgeLayout { m: cat.truncation.m, n: cat.truncation.n };
    let mut r = DMatrix::zeros(lay.total(), cat.columns.len());
    let c = cat.constants;
    for &e in &EDGES {
        let tab = edge_tables(cat, e, rule, &lay);
        let s = lay.sine_modes(e);
        for comp in [
            TraceComponent::W,
            TraceComponent::NormalRotation,
            TraceComponent::TangentialRotation,
        ] {
            let row = field_row(trace_field(e, comp), &c);
            for (ci, col) in cat.columns.iter().enumerate() {
                let monos: &[Monomial] = match col.kind {
                    ColKind::W => &row.w,
                    ColKind::Psi => &row.psi,
                };
                if monos.is_empty() {
                    continue;
                }
                // Normal/tangential factor indices depend on edge orientation.
                let (nf, tf) = if e.is_x1_edge() { (col.xf, col.yf) } else { (col.yf, col.xf) };
                match comp {
                    TraceComponent::TangentialRotation => {
                        for mode in 0..=s {
                            let mut acc = 0.0;
                            for m in monos {
                                let (dn, dt) = normal_tangent_orders(e, m);
                                acc += m.c * tab.normal_end[dn][nf] * tab.cos_int[dt][tf][mode];
                            }
                            if acc != 0.0 {
                                r[(lay.index(e, comp, mode), ci)] = acc;
                            }
                        }
                    }
                    _ => {
                        for mode in 1..=s {
                            let mut acc = 0.0;
                            for m in monos {
                                let (dn, dt) = normal_tangent_orders(e, m);
                                acc += m.c * tab.normal_end[dn][nf] * tab.sin_int[dt][tf][mode - 1];
                            }
                            if acc != 0.0 {
                                r[(lay.index(e, comp, mode), ci)] = acc;
                            }
                        }
                    }
                }
            }
        }
    }
    r
}

fn normal_tangent_orders(e: Edge, m: &Monomial) -> (usize, usize) {
    if e.is_x1_edge() {
        (m.d1, m.d2)
    } else {
        (m.d2, m.d1)
    }
}

/// Essential boundary data in q_b coordinates: (index, value) for every
/// trace coefficient fixed by the edge conditions. Clamped edges fix all
/// three trace components, simply supported edges fix the deflection only,
/// free edges fix nothing.
pub fn prescribed_edge_values(spec: &ModelSpec, rule: &QuadratureRule) -> Vec<(usize, f64)> {
    let lay = EdgeLayout { m: spec.truncation.m, n: spec.truncation.n };
    let mut out = Vec::new();
    for &e in &EDGES {
        let tr = if e.is_x1_edge() { &rule.y } else { &rule.x };
        let s = lay.sine_modes(e);
        match spec.edges.get(e) {
            EdgeCondition::Clamped { w, beta_x1, beta_x2 } => {
                let (bn, bt) = if e.is_x1_edge() { (beta_x1, beta_x2) } else { (beta_x2, beta_x1) };
                for (k, c) in sine_coeffs(tr, s, |t| w.eval(t)).into_iter().enumerate() {
                    out.push((lay.index(e, TraceComponent::W, k + 1), c));
                }
                for (k, c) in sine_coeffs(tr, s, |t| bn.eval(t)).into_iter().enumerate() {
                    out.push((lay.index(e, TraceComponent::NormalRotation, k + 1), c));
                }
                for (k, c) in cosine_coeffs(tr, s, |t| bt.eval(t)).into_iter().enumerate() {
                    out.push((lay.index(e, TraceComponent::TangentialRotation, k), c));
                }
            }
            EdgeCondition::SimplySupported { w, .. } => {
                for (k, c) in sine_coeffs(tr, s, |t| w.eval(t)).into_iter().enumerate() {
                    out.push((lay.index(e, TraceComponent::W, k + 1), c));
                }
            }
            EdgeCondition::Free { .. } => {}
        }
    }
    out
}

/// The elimination map and its ingredients.
pub struct ReducedBasis {
    pub layout: EdgeLayout,
    pub n03: usize,
    pub n12: usize,
    /// q12 = a_map q03 + b_map q_b.
    pub a_map: DMatrix<f64>,
    pub b_map: DMatrix<f64>,
    pub r03: DMatrix<f64>,
    pub r12: DMatrix<f64>,
    /// Reciprocal condition estimate of the (equilibrated) q12 trace block.
    pub rcond_r12: f64,
}

impl ReducedBasis {
    pub fn build(cat: &Catalog, rule: &QuadratureRule) -> Result<Self> {
        let layout = EdgeLayout { m: cat.truncation.m, n: cat.truncation.n };
        let n03 = cat.layout.n03();
        let n12 = cat.layout.n12();
        debug_assert_eq!(layout.total(), n12);
        let r = build_r(cat, rule);
        let r03 = r.columns(0, n03).clone_owned();
        let r12 = r.columns(n03, n12).clone_owned();
        let solver = PreparedSolver::general(&r12, "edge-trace block")?;
        let mut a_map = DMatrix::zeros(n12, n03);
        for j in 0..n03 {
            let rhs = -r03.column(j).clone_owned();
            let (x, _) = solver.solve(&rhs)?;
            a_map.set_column(j, &x);
        }
        let mut b_map = DMatrix::zeros(n12, n12);
        let mut unit = DVector::zeros(n12);
        for j in 0..n12 {
            unit.fill(0.0);
            unit[j] = 1.0;
            let (x, _) = solver.solve(&unit)?;
            b_map.set_column(j, &x);
        }
        Ok(ReducedBasis {
            layout,
            n03,
            n12,
            a_map,
            b_map,
            r03,
            r12,
            rcond_r12: solver.rcond,
        })
    }

    pub fn total(&self) -> usize {
        self.n03 + self.n12
    }

    /// q = T q_r (raw coefficients from reduced ones).
    pub fn expand(&self, q_r: &DVector<f64>) -> DVector<f64> {
        let q03 = q_r.rows(0, self.n03);
        let qb = q_r.rows(self.n03, self.n12);
        let q12 = &self.a_map * q03 + &self.b_map * qb;
        let mut q = DVector::zeros(self.total());
        q.rows_mut(0, self.n03).copy_from(&q03);
        q.rows_mut(self.n03, self.n12).copy_from(&q12);
        q
    }

    /// Materialized T for matrix transforms.
    pub fn t_matrix(&self) -> DMatrix<f64> {
        let (n03, n12) = (self.n03, self.n12);
        let mut t = DMatrix::zeros(n03 + n12, n03 + n12);
        t.view_mut((0, 0), (n03, n03)).fill_with_identity();
        t.view_mut((n03, 0), (n12, n03)).copy_from(&self.a_map);
        t.view_mut((n03, n03), (n12, n12)).copy_from(&self.b_map);
        t
    }
}
