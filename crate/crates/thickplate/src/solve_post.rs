//! End-to-end solve and field recovery.
//!
//! `solve` runs catalog -> quadrature -> trace elimination -> assembly ->
//! boundary conditions -> linear solve and returns everything needed to
//! evaluate fields anywhere, plus the diagnostics callers report (condition
//! estimates, residuals, energies, timings).

use std::time::Instant;

use nalgebra::{DMatrix, DVector};

use crate::assembly::{apply_essential_bc, assemble_k, assemble_load, reduce_system};
use crate::basis::{build_catalog, Catalog, ColKind};
use crate::fields::{field_row, FieldKind};
use crate::linalg::{solve_symmetric, SolveReport};
use crate::model::{Load, ModelSpec, ScaleFactors};
use crate::quadrature::{build_quadrature, QuadOptions, QuadratureRule};
use crate::reduction::{prescribed_edge_values, ReducedBasis};
use crate::spectra::RegimeCase;
use crate::Result;

#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    pub quad: QuadOptions,
}

/// Wall-clock milliseconds per pipeline stage.
#[derive(Debug, Clone, Copy, Default)]
pub struct StageTimings {
    pub setup_ms: f64,
    pub reduction_ms: f64,
    pub assembly_ms: f64,
    pub solve_ms: f64,
}

#[derive(Debug, Clone)]
pub struct Diagnostics {
    pub regime: RegimeCase,
    pub degenerate_span: bool,
    pub n03: usize,
    pub n12: usize,
    pub rcond_traces: f64,
    pub rcond_system: f64,
    pub solve_residual: f64,
    pub refine_steps: usize,
    /// Strain energy of the converged state, 0.5 q' K q.
    pub strain_energy: f64,
    /// Work of the applied loads through the solution, q' Q.
    pub load_work: f64,
    pub timings: StageTimings,
}

pub struct Solution {
    pub spec: ModelSpec,
    pub catalog: Catalog,
    pub rule: QuadratureRule,
    pub reduced: ReducedBasis,
    /// Solution in [interior+corner; edge-trace] coordinates.
    pub q_reduced: DVector<f64>,
    /// Solution over the raw catalog columns.
    pub q_raw: DVector<f64>,
    pub report: SolveReport,
    pub diagnostics: Diagnostics,
}

pub fn solve(spec: &ModelSpec, opts: &SolveOptions) -> Result<Solution> {
    crate::model::validate_spec(spec)?;
    let t0 = Instant::now();
    let catalog = build_catalog(spec)?;
    let extra = match spec.load {
        Load::Sinusoidal { m, n, .. } => (m, n),
        _ => (1, 1),
    };
    let rule = build_quadrature(&catalog, extra, &opts.quad)?;
    let setup_ms = t0.elapsed().as_secs_f64() * 1e3;

    let t1 = Instant::now();
    let reduced = ReducedBasis::build(&catalog, &rule)?;
    let reduction_ms = t1.elapsed().as_secs_f64() * 1e3;

    let t2 = Instant::now();
    let k_raw = assemble_k(&catalog, &rule);
    let q_raw_load = assemble_load(spec, &catalog, &rule);
    let (k_free, q_free) = reduce_system(&reduced, &k_raw, &q_raw_load);
    let assembly_ms = t2.elapsed().as_secs_f64() * 1e3;

    let t3 = Instant::now();
    let fixed = prescribed_edge_values(spec, &rule);
    let mut k_bc = k_free.clone();
    let mut q_bc = q_free.clone();
    apply_essential_bc(&mut k_bc, &mut q_bc, &fixed, reduced.n03);
    let (q_reduced, report) = solve_symmetric(&k_bc, &q_bc, "plate system")?;
    let solve_ms = t3.elapsed().as_secs_f64() * 1e3;

    let strain_energy = 0.5 * (q_reduced.transpose() * &k_free * &q_reduced)[(0, 0)];
    let load_work = q_reduced.dot(&q_free);
    let q_raw = reduced.expand(&q_reduced);

    let degenerate_span = !catalog.x1_roots.degenerate_modes.is_empty()
        || !catalog.x2_roots.degenerate_modes.is_empty();
    let diagnostics = Diagnostics {
        regime: catalog.regime,
        degenerate_span,
        n03: reduced.n03,
        n12: reduced.n12,
        rcond_traces: reduced.rcond_r12,
        rcond_system: report.rcond,
        solve_residual: report.residual,
        refine_steps: report.refine_steps,
        strain_energy,
        load_work,
        timings: StageTimings { setup_ms, reduction_ms, assembly_ms, solve_ms },
    };

    Ok(Solution {
        spec: spec.clone(),
        catalog,
        rule,
        reduced,
        q_reduced,
        q_raw,
        report,
        diagnostics,
    })
}

/// Output scale of each field kind.
pub fn field_scale(kind: FieldKind, s: &ScaleFactors) -> f64 {
    match kind {
        FieldKind::W => s.deflection,
        FieldKind::BetaX1 | FieldKind::BetaX2 => s.rotation,
        FieldKind::MX1 | FieldKind::MX2 | FieldKind::MX1X2 => s.moment,
        FieldKind::QX1 | FieldKind::QX2 => s.shear,
        FieldKind::GradX1 | FieldKind::GradX2 => s.deflection / s.length,
        FieldKind::FoundationReaction => s.load,
        FieldKind::Psi => s.psi,
    }
}

impl Solution {
    /// One field at one point, in output units.
    pub fn eval(&self, kind: FieldKind, x1: f64, x2: f64) -> f64 {
        let row = field_row(kind, &self.catalog.constants);
        let mut v = 0.0;
        for (ci, col) in self.catalog.columns.iter().enumerate() {
            let q = self.q_raw[ci];
            if q != 0.0 {
                v += q * crate::fields::eval_row(&self.catalog, col, &row, x1, x2);
            }
        }
        v * field_scale(kind, &self.spec.scale)
    }

    /// One field on a tensor grid (solve coordinates in, output units out).
    pub fn eval_grid(&self, kind: FieldKind, xs: &[f64], ys: &[f64]) -> DMatrix<f64> {
        let row = field_row(kind, &self.catalog.constants);
        let cat = &self.catalog;
        // Factor caches: value of every 1D factor and derivative on the grid.
        let max_d = row.max_order().min(4);
        let fx: Vec<DMatrix<f64>> = (0..=max_d)
            .map(|d| {
                DMatrix::from_fn(cat.x_factors.len(), xs.len(), |f, i| {
                    cat.x_factors[f].eval(xs[i], d)
                })
            })
            .collect();
        let fy: Vec<DMatrix<f64>> = (0..=max_d)
            .map(|d| {
                DMatrix::from_fn(cat.y_factors.len(), ys.len(), |f, j| {
                    cat.y_factors[f].eval(ys[j], d)
                })
            })
            .collect();
        // Accumulate coefficient matrices per (d1, d2) pair over factors,
        // then expand each pair with one product per grid axis.
        let mut out = DMatrix::zeros(xs.len(), ys.len());
        let mut pairs: Vec<(usize, usize, DMatrix<f64>)> = Vec::new();
        for (ci, col) in cat.columns.iter().enumerate() {
            let q = self.q_raw[ci];
            if q == 0.0 {
                continue;
            }
            let monos = match col.kind {
                ColKind::W => &row.w,
                ColKind::Psi => &row.psi,
            };
            for m in monos {
                let entry = pairs.iter_mut().find(|(d1, d2, _)| *d1 == m.d1 && *d2 == m.d2);
                let mat = match entry {
                    Some((_, _, mat)) => mat,
                    None => {
                        pairs.push((
                            m.d1,
                            m.d2,
                            DMatrix::zeros(cat.x_factors.len(), cat.y_factors.len()),
                        ));
                        &mut pairs.last_mut().unwrap().2
                    }
                };
                mat[(col.xf, col.yf)] += q * m.c;
            }
        }
        for (d1, d2, coef) in &pairs {
            out += fx[*d1].transpose() * coef * &fy[*d2];
        }
        out * field_scale(kind, &self.spec.scale)
    }

    /// Potential energy of the converged state.
    pub fn potential_energy(&self) -> f64 {
        self.diagnostics.strain_energy - self.diagnostics.load_work
    }
}

/// The standard output fields, in CSV column order.
pub const OUTPUT_FIELDS: [(FieldKind, &str); 9] = [
    (FieldKind::W, "w"),
    (FieldKind::BetaX1, "bx1"),
    (FieldKind::BetaX2, "bx2"),
    (FieldKind::MX1, "Mx1"),
    (FieldKind::MX2, "Mx2"),
    (FieldKind::MX1X2, "Mx1x2"),
    (FieldKind::QX1, "Qx1"),
    (FieldKind::QX2, "Qx2"),
    (FieldKind::FoundationReaction, "qe"),
];

/// All standard fields on a uniform n x n grid over the plate.
pub struct FieldGrids {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub fields: Vec<(FieldKind, &'static str, DMatrix<f64>)>,
}

pub fn uniform_grid(len: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| len * i as f64 / (n - 1) as f64).collect()
}

pub fn eval_standard_grids(sol: &Solution, n: usize) -> FieldGrids {
    let xs = uniform_grid(sol.catalog.geom.a, n);
    let ys = uniform_grid(sol.catalog.geom.b, n);
    let fields = OUTPUT_FIELDS
        .iter()
        .map(|&(kind, name)| (kind, name, sol.eval_grid(kind, &xs, &ys)))
        .collect();
    FieldGrids { xs, ys, fields }
}
