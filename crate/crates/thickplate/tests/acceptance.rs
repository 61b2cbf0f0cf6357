//! End-to-end acceptance checks, one test per gate. Each test prints a
//! summary line with the measured numbers; failures carry them in the panic
//! message. Tolerances marked "baseline" are regression bounds frozen from
//! the first verified run on this code (roughly 3x headroom over measured).

use thickplate::assembly::assemble_k;
use thickplate::basis::build_catalog;
use thickplate::fields::FieldKind;
use thickplate::model::{
    DerivedConstants, EdgeKind, EdgeSet, Foundation, Geometry, Load, Material, ModelSpec,
    ScaleFactors, Truncation,
};
use thickplate::quadrature::{build_quadrature, QuadOptions};
use thickplate::reduction::ReducedBasis;
use thickplate::solve_post::{solve, SolveOptions};
use thickplate::spectra::{char_residual, mode_wavenumber, psi_root, w_roots_at, RegimeCase};
use thickplate::validation::{
    all_schemes, parse_scheme, run_convergence_study, run_multiscale_sweep, run_reference_case,
    scheme_spec, with_navier_data, TRUNCATIONS,
};

/// Deterministic scatter of interior points (xorshift64*), edges excluded.
fn sample_points(geom: &Geometry, count: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut state = seed.max(1);
    let mut next = || {
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        (state.wrapping_mul(0x2545F4914F6CDD1D) >> 11) as f64 / (1u64 << 53) as f64
    };
    (0..count)
        .map(|_| {
            let t1 = 0.02 + 0.96 * next();
            let t2 = 0.02 + 0.96 * next();
            (t1 * geom.a, t2 * geom.b)
        })
        .collect()
}

/// Operator coefficients chosen directly: c_q = 0 makes d_h = D and
/// g_ph = G_p, so the three quartic coefficients are independent.
fn ops(d_h: f64, g_ph: f64, k: f64) -> DerivedConstants {
    DerivedConstants {
        d: d_h,
        g: 1.0,
        c_s: 1.0,
        c_q: 0.0,
        d_h,
        g_ph,
        delta_h: g_ph * g_ph - 4.0 * d_h * k,
        k,
        g_p: g_ph,
        mu: 0.3,
        h: 0.1,
    }
}

/// Characteristic roots across all three regimes: a 3x3x3 grid of
/// (D_h, G_ph, k) with G_ph placed below / at / above the double-root
/// threshold 2 sqrt(D_h k), for every tangential mode n = 1..20.
#[test]
fn a1_characteristic_roots_satisfy_the_quartic_across_regimes() {
    let mut worst = 0.0f64;
    let mut cases = 0usize;
    for &d_h in &[0.5f64, 1.0, 2.0] {
        for &k in &[1.0f64, 1.0e2, 1.0e4] {
            let crit = 2.0 * (d_h * k).sqrt();
            for &factor in &[0.5, 1.0, 2.0] {
                let c = ops(d_h, factor * crit, k);
                for n in 1..=20usize {
                    let beta = mode_wavenumber(1.0, n);
                    let roots = w_roots_at(&c, beta).unwrap();
                    for eta in roots.etas() {
                        worst = worst.max(char_residual(&c, beta, eta));
                        cases += 1;
                    }
                }
            }
        }
    }
    // Shear-potential roots: eta^2 = beta^2 + 10/h^2, checked algebraically.
    for &h in &[0.01, 0.1, 0.4] {
        for n in 1..=20usize {
            let beta = mode_wavenumber(1.0, n);
            let eta = psi_root(h, 1.0, n);
            let resid = (eta * eta - beta * beta - 10.0 / (h * h)).abs()
                / (eta * eta).max(10.0 / (h * h));
            worst = worst.max(resid);
            cases += 1;
        }
    }
    println!("[a1] root residual over {cases} roots: max {worst:.3e} (gate 1e-10)");
    assert!(worst <= 1.0e-10, "characteristic-root residual {worst:.3e} > 1e-10");
}

/// Every boundary-layer basis column solves its homogeneous operator at 50
/// scattered interior points, for every scheme row including h/a = 0.01.
#[test]
fn a2_boundary_basis_columns_solve_their_operators() {
    let mut worst = 0.0f64;
    let mut worst_id = String::new();
    for id in all_schemes() {
        let spec = scheme_spec(id, 6);
        let cat = build_catalog(&spec).unwrap();
        let pts = sample_points(&spec.geometry, 50, 0x5EED + id.set as u64 * 131);
        let r = thickplate::validation::basis_pde_residual(&cat, &pts);
        if r > worst {
            worst = r;
            worst_id = id.to_string();
        }
    }
    println!("[a2] basis operator residual over 16 schemes: max {worst:.3e} at scheme {worst_id} (gate 1e-8)");
    assert!(worst <= 1.0e-8, "basis residual {worst:.3e} at scheme {worst_id} > 1e-8");
}

/// Analytic column derivatives agree with central finite differences of the
/// next-lower order, up to order 4 for deflection columns and 2 for shear
/// potential columns.
#[test]
fn a3_analytic_derivatives_match_finite_differences() {
    let mut worst = 0.0f64;
    for id in [parse_scheme("1a").unwrap(), parse_scheme("1c").unwrap(), parse_scheme("2b").unwrap()]
    {
        let spec = scheme_spec(id, 4);
        let cat = build_catalog(&spec).unwrap();
        let pts = sample_points(&spec.geometry, 10, 0xD1FF);
        let step = 1.0e-6 * spec.geometry.a.min(spec.geometry.b);
        for col in &cat.columns {
            let cap = col.kind.deriv_cap();
            for d1 in 0..=cap {
                for d2 in 0..=(cap - d1) {
                    if d1 + d2 == 0 {
                        continue;
                    }
                    let mut scale = 0.0f64;
                    let mut diff = 0.0f64;
                    for &(x1, x2) in &pts {
                        let an = cat.column_value(col, x1, x2, d1, d2);
                        let fd = if d1 > 0 {
                            (cat.column_value(col, x1 + step, x2, d1 - 1, d2)
                                - cat.column_value(col, x1 - step, x2, d1 - 1, d2))
                                / (2.0 * step)
                        } else {
                            (cat.column_value(col, x1, x2 + step, d1, d2 - 1)
                                - cat.column_value(col, x1, x2 - step, d1, d2 - 1))
                                / (2.0 * step)
                        };
                        scale = scale.max(an.abs());
                        diff = diff.max((fd - an).abs());
                    }
                    worst = worst.max(diff / scale.max(1.0));
                }
            }
        }
    }
    println!("[a3] derivative ladder vs finite differences: max {worst:.3e} (gate 1e-6)");
    assert!(worst <= 1.0e-6, "derivative mismatch {worst:.3e} > 1e-6");
}

/// A sinusoidally loaded simply supported plate whose solution is a single
/// harmonic lying in the basis span: solved fields must reproduce the closed
/// form essentially exactly. Thin plate and zero Poisson ratio keep the
/// shear-correction cross terms far below the gate.
#[test]
fn a4_single_harmonic_oracle_is_reproduced() {
    let h = 0.01f64;
    let base = ModelSpec {
        geometry: Geometry { a: 1.0, b: 1.0, h },
        material: Material { e: 12.0 / h.powi(3), mu: 0.0 },
        foundation: Foundation::Nondimensional { k_r: 10.0, g_pr: 5.0 },
        edges: EdgeSet::uniform(EdgeKind::SimplySupported),
        load: Load::Uniform { q0: 1.0 },
        truncation: Truncation { m: 3, n: 3 },
        scale: ScaleFactors::identity(),
    };
    let (spec, oracle) = with_navier_data(&base, 1, 1, 1.0);
    let sol = solve(&spec, &SolveOptions::default()).unwrap();
    let computed = thickplate::solve_post::eval_standard_grids(&sol, 101);
    let reference = thickplate::validation::AnalyticFields::grids(&oracle, 101);
    let report = thickplate::validation::error_metrics(&computed, &reference).unwrap();
    let e_w = report.get(FieldKind::W).e;
    let e_b = report.get(FieldKind::BetaX1).e.max(report.get(FieldKind::BetaX2).e);
    let e_m = report.get(FieldKind::MX1).e.max(report.get(FieldKind::MX2).e);
    println!("[a4] harmonic oracle: e(w) {e_w:.3e}, e(beta) {e_b:.3e}, e(M) {e_m:.3e} (gate 1e-6)");
    assert!(e_w <= 1.0e-6, "e(w) {e_w:.3e} > 1e-6");
    assert!(e_b <= 1.0e-6, "e(beta) {e_b:.3e} > 1e-6");
    assert!(e_m <= 1.0e-6, "e(M) {e_m:.3e} > 1e-6");
}

/// Truncation study on the clamped reference case: overall deflection error
/// decreases monotonically from the 3-term row and lands below both the hard
/// gate (1e-3) and the frozen baseline; interior moment errors stay small
/// while boundary/corner moment errors are reported unchecked.
#[test]
fn a5_truncation_study_converges_on_the_reference_case() {
    let rows = run_convergence_study(
        parse_scheme("1a").unwrap(),
        &TRUNCATIONS,
        101,
        &SolveOptions::default(),
    )
    .unwrap();
    // terms -> baseline on overall e(w), frozen 2026-08 (measured values in
    // parentheses): 2 (1.91e-6), 3 (5.74e-7), 5 (1.74e-7), 10 (3.39e-8),
    // 15 (1.12e-8), 20 (5.61e-9).
    let baseline_w = [6.0e-6, 2.0e-6, 6.0e-7, 1.2e-7, 4.0e-8, 2.0e-8];
    let mut e_w = Vec::new();
    for (row, &cap) in rows.iter().zip(&baseline_w) {
        let w = row.report.get(FieldKind::W);
        let m1 = row.report.get(FieldKind::MX1);
        let m2 = row.report.get(FieldKind::MX2);
        println!(
            "[a5] terms {:>2}: e(w) {:.3e}  eI(w) {:.3e}  eI(M) {:.3e}  eB(M) {:.3e}  eC(M) {:.3e}  rcond {:.2e}",
            row.terms,
            w.e,
            w.e_i,
            m1.e_i.max(m2.e_i),
            m1.e_b.max(m2.e_b),
            m1.e_c.max(m2.e_c),
            row.rcond_system,
        );
        assert!(w.e <= cap, "terms {}: e(w) {:.3e} above baseline {cap:.1e}", row.terms, w.e);
        e_w.push(w.e);
    }
    for i in 2..e_w.len() {
        assert!(
            e_w[i] < e_w[i - 1],
            "e(w) not strictly decreasing from the 3-term row: {:.3e} -> {:.3e}",
            e_w[i - 1],
            e_w[i]
        );
    }
    let last = rows.last().unwrap();
    let w20 = last.report.get(FieldKind::W).e;
    let m20 = last.report.get(FieldKind::MX1).e_i.max(last.report.get(FieldKind::MX2).e_i);
    println!("[a5] at 20 terms: e(w) {w20:.3e} (gate 1e-3), eI(M) {m20:.3e} (gate 1e-2)");
    assert!(w20 <= 1.0e-3, "e(w) at 20 terms {w20:.3e} > 1e-3");
    assert!(m20 <= 1.0e-2, "interior moment error at 20 terms {m20:.3e} > 1e-2");
    assert!(m20 <= 1.0e-4, "interior moment error {m20:.3e} above baseline 1e-4");
    assert!(last.solve_residual <= 1.0e-10, "solve residual {:.3e}", last.solve_residual);
}

/// Foundation-stiffness sweep across the regime transition. Classification
/// must flip from complex-pair (oscillatory interior) to real-distinct
/// (edge layers) between G_pr = 190 and 300. The interior deflection gate
/// of 1e-2 is asserted last: the energy functional reaches its own minimum
/// a few percent away from the reference here (the substituted field maps
/// shift the operator's characteristic roots by O(dc*lam) at these
/// wavenumbers), so this gate records the method's true floor.
#[test]
fn a6_stiffness_sweep_crosses_the_regime_transition() {
    let cases = run_multiscale_sweep(
        1.0e4,
        &[160.0, 170.0, 180.0, 190.0, 300.0],
        20,
        101,
        &SolveOptions::default(),
    )
    .unwrap();
    let mut over_gate = Vec::new();
    for c in &cases {
        let w = c.case.report.get(FieldKind::W);
        println!(
            "[a6] G_pr {:>5}: regime {:<13} e(w) {:.3e}  eI(w) {:.3e} (gate 1e-2)",
            c.g_pr,
            c.regime.name(),
            w.e,
            w.e_i,
        );
        let expected = if c.g_pr < 200.0 {
            RegimeCase::ComplexPair
        } else {
            RegimeCase::RealDistinct
        };
        assert_eq!(c.regime, expected, "G_pr {}: wrong regime", c.g_pr);
        if w.e_i > 1.0e-2 {
            over_gate.push(format!("G_pr {}: eI(w) {:.3e}", c.g_pr, w.e_i));
        }
    }
    assert!(
        over_gate.is_empty(),
        "interior deflection above the 1e-2 gate at: {}",
        over_gate.join(", ")
    );
}

/// Structural invariants of the assembled system: symmetry, positive
/// semidefiniteness, solve residual, the trace-elimination identity
/// R12 A + R03 = 0, and the boundary coefficient count 6M + 6N + 4.
#[test]
fn a7_assembled_system_invariants_hold() {
    let spec = scheme_spec(parse_scheme("1a").unwrap(), 3);
    let cat = build_catalog(&spec).unwrap();
    let rule = build_quadrature(&cat, (1, 1), &QuadOptions::default()).unwrap();
    let k = assemble_k(&cat, &rule);
    let scale = k.amax();
    let asym = (&k - k.transpose()).amax() / scale;
    let eig = nalgebra::SymmetricEigen::new(k.clone()).eigenvalues;
    let min_eig = eig.min();
    let max_eig = eig.amax();
    println!("[a7] K: asymmetry {asym:.3e} (gate 1e-12), min eig {min_eig:.3e} vs -1e-8*|K| {:.3e}", -1.0e-8 * max_eig);
    assert!(asym <= 1.0e-12, "stiffness asymmetry {asym:.3e} > 1e-12");
    assert!(min_eig >= -1.0e-8 * max_eig, "min eigenvalue {min_eig:.3e} too negative");

    let reduced = ReducedBasis::build(&cat, &rule).unwrap();
    let identity = (&reduced.r12 * &reduced.a_map + &reduced.r03).norm() / reduced.r03.norm();
    println!("[a7] trace elimination residual |R12 A + R03|/|R03| = {identity:.3e} (gate 1e-10)");
    assert!(identity <= 1.0e-10, "reduction identity residual {identity:.3e} > 1e-10");

    let sol = solve(&spec, &SolveOptions::default()).unwrap();
    println!("[a7] solve residual {:.3e} (gate 1e-10)", sol.diagnostics.solve_residual);
    assert!(sol.diagnostics.solve_residual <= 1.0e-10);

    for (m, n) in [(1usize, 1usize), (2, 3), (20, 20)] {
        let mut sp = scheme_spec(parse_scheme("1a").unwrap(), 1);
        sp.truncation = Truncation { m, n };
        let cat = build_catalog(&sp).unwrap();
        let rule = build_quadrature(&cat, (1, 1), &QuadOptions::default()).unwrap();
        let red = ReducedBasis::build(&cat, &rule).unwrap();
        let expect = 6 * m + 6 * n + 4;
        println!("[a7] (M,N)=({m},{n}): |q12| = {}, |q_b| = {} (expect {expect})", red.n12, red.b_map.ncols());
        assert_eq!(red.n12, expect, "eliminated block size at ({m},{n})");
        assert_eq!(red.b_map.ncols(), expect, "boundary data size at ({m},{n})");
    }
}

/// Every thickness / aspect / boundary-condition scheme runs to completion
/// at 10 terms with finite errors and a recorded condition estimate, and
/// the softer boundary conditions converge worse on the deflection than
/// the clamped base case. Note: with exact moment data the weakly enforced
/// simple support has been measured to beat the clamped case at every
/// truncation, so the simply-supported half of the ordering records a known
/// failure rather than a regression.
#[test]
fn a8_parameter_schemes_run_and_order_as_expected() {
    let opts = SolveOptions::default();
    let mut e_w_by_id = std::collections::BTreeMap::new();
    for id in all_schemes().into_iter().filter(|id| id.set != 1) {
        let case = run_reference_case(&scheme_spec(id, 10), 101, &opts).unwrap();
        let d = &case.solution.diagnostics;
        let w = case.report.get(FieldKind::W);
        println!(
            "[a8] scheme {id}: e(w) {:.3e}  eI(w) {:.3e}  rcond {:.2e}  regime {}",
            w.e,
            w.e_i,
            d.rcond_system,
            d.regime.name(),
        );
        for (kind, _) in thickplate::validation::METRIC_FIELDS {
            let s = case.report.get(kind);
            for v in [s.e, s.e_i, s.e_b, s.e_c] {
                assert!(v.is_finite(), "scheme {id}: non-finite error for {kind:?}");
            }
        }
        assert!(d.rcond_system.is_finite() && d.rcond_system > 0.0, "scheme {id}: no condition estimate");
        e_w_by_id.insert(id.to_string(), w.e);
    }
    let clamped = e_w_by_id["4a"];
    let simply = e_w_by_id["4b"];
    let free = e_w_by_id["4c"];
    println!("[a8] deflection error ordering: clamped {clamped:.3e} < simply supported {simply:.3e}, free {free:.3e}");
    assert!(simply > clamped, "simply supported should converge worse than clamped");
    assert!(free > clamped, "free should converge worse than clamped");
}
