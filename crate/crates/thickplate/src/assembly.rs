//! Stiffness and load assembly.
//!
//! The energy is a weighted sum of squared field rows, and every basis
//! column is a product X(x1) Y(x2). That makes each stiffness entry a short
//! sum of products of one-dimensional Gram integrals
//!
//!   K[i, j] = sum_t w_t sum_{k, l} c_k c_l <X_i^(p_k), X_j^(p_l)>_x <Y_i^(q_k), Y_j^(q_l)>_y,
//!
//! so the whole matrix assembles from per-direction derivative Gram tables
//! instead of a 2D quadrature sweep. A literal node-by-node assembler is
//! kept as the test oracle.

use nalgebra::{DMatrix, DVector};

use crate::basis::{Catalog, ColKind};
use crate::fields::{energy_terms, eval_row, field_row, Monomial};
use crate::model::{EdgeCondition, ModelSpec, Trace, TraceLabel, EDGES};
use crate::quadrature::{QuadratureRule, Rule1d};
use crate::reduction::{trace_field, ReducedBasis, TraceComponent};

/// Derivative Gram tables for one direction: g[p][q][(i, j)] is the weighted
/// inner product of the p-th derivative of factor i with the q-th derivative
/// of factor j.
fn direction_grams(factors: &[crate::profile::Factor1d], rule: &Rule1d) -> Vec<Vec<DMatrix<f64>>> {
    let nf = factors.len();
    let nn = rule.nodes.len();
    let v: Vec<DMatrix<f64>> = (0..=4)
        .map(|d| DMatrix::from_fn(nf, nn, |f, j| factors[f].eval(rule.nodes[j], d)))
        .collect();
    // Weighted transposes so each Gram is a single product.
    let vw: Vec<DMatrix<f64>> = v
        .iter()
        .map(|m| {
            let mut t = m.transpose();
            for (j, mut row) in t.row_iter_mut().enumerate() {
                row *= rule.weights[j];
            }
            t
        })
        .collect();
    let mut g: Vec<Vec<DMatrix<f64>>> = vec![vec![DMatrix::zeros(0, 0); 5]; 5];
    for p in 0..=4 {
        for q in p..=4 {
            let m = &v[p] * &vw[q];
            if p != q {
                g[q][p] = m.transpose();
            }
            g[p][q] = m;
        }
    }
    g
}

/// Raw stiffness matrix over the full catalog.
pub fn assemble_k(cat: &Catalog, rule: &QuadratureRule) -> DMatrix<f64> {
    let gx = direction_grams(&cat.x_factors, &rule.x);
    let gy = direction_grams(&cat.y_factors, &rule.y);
    let terms = energy_terms(&cat.constants);
    let n = cat.columns.len();
    let mut k = DMatrix::zeros(n, n);
    for t in &terms {
        for i in 0..n {
            let ci = &cat.columns[i];
            let mi: &[Monomial] = match ci.kind {
                ColKind::W => &t.row.w,
                ColKind::Psi => &t.row.psi,
            };
            if mi.is_empty() {
                continue;
            }
            for j in i..n {
                let cj = &cat.columns[j];
                let mj: &[Monomial] = match cj.kind {
                    ColKind::W => &t.row.w,
                    ColKind::Psi => &t.row.psi,
                };
                if mj.is_empty() {
                    continue;
                }
                let mut acc = 0.0;
                for a in mi {
                    for b in mj {
                        acc += a.c
                            * b.c
                            * gx[a.d1][b.d1][(ci.xf, cj.xf)]
                            * gy[a.d2][b.d2][(ci.yf, cj.yf)];
                    }
                }
                k[(i, j)] += t.weight * acc;
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            k[(i, j)] = k[(j, i)];
        }
    }
    k
}

/// Node-by-node assembler, kept as the oracle for the factorized one.
pub fn assemble_k_pointwise(cat: &Catalog, rule: &QuadratureRule) -> DMatrix<f64> {
    let terms = energy_terms(&cat.constants);
    let n = cat.columns.len();
    let mut k = DMatrix::zeros(n, n);
    let mut vals = vec![0.0; n];
    for (xi, &x) in rule.x.nodes.iter().enumerate() {
        for (yi, &y) in rule.y.nodes.iter().enumerate() {
            let wq = rule.x.weights[xi] * rule.y.weights[yi];
            for t in &terms {
                for (ci, col) in cat.columns.iter().enumerate() {
                    vals[ci] = eval_row(cat, col, &t.row, x, y);
                }
                let s = wq * t.weight;
                for i in 0..n {
                    if vals[i] == 0.0 {
                        continue;
                    }
                    let vi = s * vals[i];
                    for j in i..n {
                        k[(i, j)] += vi * vals[j];
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            k[(i, j)] = k[(j, i)];
        }
    }
    k
}

/// Raw load vector: transverse load worked through the deflection plus
/// prescribed natural edge data (shear against w, moments against the
/// rotations) worked through the traces. Outward-normal orientation flips
/// the sign on the near edges.
pub fn assemble_load(spec: &ModelSpec, cat: &Catalog, rule: &QuadratureRule) -> DVector<f64> {
    let n = cat.columns.len();
    let mut q = DVector::zeros(n);

    // Domain term: P[fx, fy] = integral of load * X_fx * Y_fy.
    let nx = rule.x.nodes.len();
    let ny = rule.y.nodes.len();
    let vx = DMatrix::from_fn(cat.x_factors.len(), nx, |f, i| {
        cat.x_factors[f].eval(rule.x.nodes[i], 0)
    });
    let vy = DMatrix::from_fn(cat.y_factors.len(), ny, |f, j| {
        cat.y_factors[f].eval(rule.y.nodes[j], 0)
    });
    let qw = DMatrix::from_fn(nx, ny, |i, j| {
        spec.load.eval(&cat.geom, rule.x.nodes[i], rule.y.nodes[j])
            * rule.x.weights[i]
            * rule.y.weights[j]
    });
    let p = &vx * qw * vy.transpose();
    for (ci, col) in cat.columns.iter().enumerate() {
        if col.kind == ColKind::W {
            q[ci] = p[(col.xf, col.yf)];
        }
    }

    edge_work(spec, cat, rule, &mut q);
    q
}

/// Work of the natural (traction) edge data against every column's traces.
fn edge_work(spec: &ModelSpec, cat: &Catalog, rule: &QuadratureRule, q: &mut DVector<f64>) {
    let c = cat.constants;
    for &e in &EDGES {
        let data: Vec<(TraceComponent, &Trace)> = match spec.edges.get(e) {
            EdgeCondition::Clamped { .. } => continue,
            EdgeCondition::SimplySupported { m_n, m_nt, .. } => vec![
                (TraceComponent::NormalRotation, m_n),
                (TraceComponent::TangentialRotation, m_nt),
            ],
            EdgeCondition::Free { q_n, m_n, m_nt } => vec![
                (TraceComponent::W, q_n),
                (TraceComponent::NormalRotation, m_n),
                (TraceComponent::TangentialRotation, m_nt),
            ],
        };
        let (normal_factors, tangent_factors, trule) = if e.is_x1_edge() {
            (&cat.x_factors, &cat.y_factors, &rule.y)
        } else {
            (&cat.y_factors, &cat.x_factors, &rule.x)
        };
        let x_e = e.fixed_coord(&cat.geom);
        let sign = e.work_sign();
        let normal_end: Vec<Vec<f64>> = (0..=4)
            .map(|d| normal_factors.iter().map(|f| f.eval(x_e, d)).collect())
            .collect();
        for (comp, trace) in data {
            if trace.label() == TraceLabel::Zero {
                continue;
            }
            let fvals: Vec<f64> = trule
                .nodes
                .iter()
                .zip(&trule.weights)
                .map(|(&t, &w)| w * trace.eval(t))
                .collect();
            // ty[d][tf] = integral of trace * tf-th tangential factor's d-th derivative.
            let ty: Vec<Vec<f64>> = (0..=4)
                .map(|d| {
                    tangent_factors
                        .iter()
                        .map(|f| {
                            trule
                                .nodes
                                .iter()
                                .zip(&fvals)
                                .map(|(&t, &fv)| fv * f.eval(t, d))
                                .sum()
                        })
                        .collect()
                })
                .collect();
            let row = field_row(trace_field(e, comp), &c);
            for (ci, col) in cat.columns.iter().enumerate() {
                let monos: &[Monomial] = match col.kind {
                    ColKind::W => &row.w,
                    ColKind::Psi => &row.psi,
                };
                if monos.is_empty() {
                    continue;
                }
                let (nf, tf) = if e.is_x1_edge() { (col.xf, col.yf) } else { (col.yf, col.xf) };
                let mut acc = 0.0;
                for m in monos {
                    let (dn, dt) = if e.is_x1_edge() { (m.d1, m.d2) } else { (m.d2, m.d1) };
                    acc += m.c * normal_end[dn][nf] * ty[dt][tf];
                }
                q[ci] += sign * acc;
            }
        }
    }
}

/// Transform the raw system into reduced coordinates [q03; q_b].
pub fn reduce_system(
    red: &ReducedBasis,
    k_raw: &DMatrix<f64>,
    q_raw: &DVector<f64>,
) -> (DMatrix<f64>, DVector<f64>) {
    let t = red.t_matrix();
    let kt = k_raw * &t;
    (t.transpose() * kt, t.transpose() * q_raw)
}

/// Fix prescribed coefficients by row/column elimination: known values move
/// to the right-hand side, fixed rows become identities. `fixed` holds
/// q_b-relative indices; `n03` offsets them into the reduced vector.
pub fn apply_essential_bc(
    k: &mut DMatrix<f64>,
    q: &mut DVector<f64>,
    fixed: &[(usize, f64)],
    n03: usize,
) {
    let diag_scale = {
        let n = k.nrows();
        (0..n).map(|i| k[(i, i)].abs()).sum::<f64>() / n as f64
    }
    .max(f64::MIN_POSITIVE);
    for &(bi, val) in fixed {
        if val != 0.0 {
            let idx = n03 + bi;
            let col = k.column(idx).clone_owned();
            *q -= val * col;
        }
    }
    for &(bi, _) in fixed {
        let idx = n03 + bi;
        k.row_mut(idx).fill(0.0);
        k.column_mut(idx).fill(0.0);
        // A diagonal near the matrix's own scale keeps equilibration honest.
        k[(idx, idx)] = diag_scale;
    }
    for &(bi, val) in fixed {
        q[n03 + bi] = diag_scale * val;
    }
}
