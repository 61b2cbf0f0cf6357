//! Experiment driver for the thick-plate foundation solver.
//!
//! Four subcommands: `solve` runs one model from a TOML file, `convergence`
//! sweeps the series truncation of a preset, `sweep` walks the shear-layer
//! stiffness across the regime transition, and `validate` reruns the
//! quick oracle suite. Artifacts (CSV tables plus a JSON manifest) land in
//! the output directory, which resolves as `THICKPLATE_OUT_DIR` over
//! `--out-dir` over the config file over the current directory.

mod config;
mod emit;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;
use thickplate::model::Foundation;
use thickplate::quadrature::QuadOptions;
use thickplate::solve_post::{eval_standard_grids, solve, SolveOptions};
use thickplate::spectra::{char_residual, w_roots_at};
use thickplate::validation::{
    basis_pde_residual, error_metrics, parse_scheme, run_convergence_study, run_multiscale_sweep,
    run_reference_case, scheme_spec, with_navier_data, TRUNCATIONS,
};
use thickplate::PlateError;

use config::RunConfig;

const EXIT_CONFIG: u8 = 2;
const EXIT_SINGULAR: u8 = 3;
const EXIT_REFINEMENT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "thickplate",
    about = "Fourier-series solver for thick plates on two-parameter foundations",
    after_help = "Exit codes:\n  \
        0  success\n  \
        2  configuration error (bad flags, bad TOML, invalid model)\n  \
        3  singular system (boundary reduction or stiffness solve)\n  \
        4  quadrature refinement exceeded its panel cap\n  \
        1  any other failure\n\n\
        THICKPLATE_OUT_DIR overrides --out-dir and the config file."
)]
struct Cli {
    /// Directory for CSV/JSON artifacts (created if missing).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve one model described by a TOML config file.
    Solve {
        #[arg(long)]
        config: PathBuf,
    },
    /// Truncation study of a preset against its closed-form reference.
    Convergence {
        /// Preset id: set 1-4, variant letter (e.g. 1a, 3e, 4c).
        #[arg(long)]
        scheme: String,
        /// Comma-separated truncations M = N.
        #[arg(long, value_delimiter = ',', default_values_t = TRUNCATIONS)]
        terms: Vec<usize>,
        #[arg(long, default_value_t = 101)]
        grid: usize,
        /// Gauss points per quadrature panel.
        #[arg(long, default_value_t = 8)]
        gauss_order: usize,
    },
    /// Foundation-stiffness sweep at fixed Winkler ratio kr.
    Sweep {
        #[arg(long)]
        kr: f64,
        /// Comma-separated shear-layer ratios G_p a^2 / D.
        #[arg(long, value_delimiter = ',')]
        gpr: Vec<f64>,
        #[arg(long, default_value_t = 20)]
        terms: usize,
        #[arg(long, default_value_t = 101)]
        grid: usize,
        /// Gauss points per quadrature panel.
        #[arg(long, default_value_t = 8)]
        gauss_order: usize,
    },
    /// Rerun the quick oracle suite and report one line per check.
    Validate,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out_dir = match resolve_out_dir(&cli) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let result = match cli.cmd {
        Cmd::Solve { ref config } => cmd_solve(config, &out_dir),
        Cmd::Convergence { ref scheme, ref terms, grid, gauss_order } => {
            cmd_convergence(scheme, terms, grid, gauss_order, &out_dir)
        }
        Cmd::Sweep { kr, ref gpr, terms, grid, gauss_order } => {
            cmd_sweep(kr, gpr, terms, grid, gauss_order, &out_dir)
        }
        Cmd::Validate => return cmd_validate(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn resolve_out_dir(cli: &Cli) -> Result<Option<PathBuf>, String> {
    if let Some(env_dir) = std::env::var_os("THICKPLATE_OUT_DIR") {
        return Ok(Some(PathBuf::from(env_dir)));
    }
    Ok(cli.out_dir.clone())
}

/// Failure with its exit category attached.
enum CliError {
    Config(String),
    Solver(PlateError),
    Io(std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Solver(e) => match e {
                PlateError::InvalidSpec(_) => EXIT_CONFIG,
                PlateError::SingularReduction { .. } | PlateError::SingularSystem { .. } => {
                    EXIT_SINGULAR
                }
                PlateError::RefinementCap { .. } => EXIT_REFINEMENT,
                _ => 1,
            },
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "{msg}"),
            CliError::Solver(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<PlateError> for CliError {
    fn from(e: PlateError) -> Self {
        CliError::Solver(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn prepare_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    Ok(())
}

fn solve_options(gauss_order: usize) -> SolveOptions {
    SolveOptions { quad: QuadOptions { gauss_order, ..QuadOptions::default() } }
}

fn cmd_solve(config_path: &Path, cli_out: &Option<PathBuf>) -> Result<(), CliError> {
    let text = std::fs::read_to_string(config_path).map_err(|e| {
        CliError::Config(format!("cannot read {}: {e}", config_path.display()))
    })?;
    let cfg = RunConfig::from_toml(&text).map_err(CliError::Config)?;
    let spec = cfg.to_spec().map_err(|errs| CliError::Config(errs.join("\n")))?;
    let dir = cli_out
        .clone()
        .or_else(|| cfg.out_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    prepare_dir(&dir)?;
    let opts = solve_options(cfg.gauss_order);

    let mut outputs = Vec::new();
    let mut cases = Vec::new();
    if cfg.reference {
        let case = run_reference_case(&spec, cfg.grid, &opts)?;
        outputs.push(emit::write_text(&dir, "fields.csv", &emit::field_csv(&case.computed))?);
        outputs.push(emit::write_text(
            &dir,
            "errors.csv",
            &emit::error_csv(&[(spec.truncation.m, &case.report)]),
        )?);
        let mut entry = emit::case_entry(&case.solution.diagnostics);
        entry["errors"] = error_entry(&case.report);
        cases.push(entry);
        print_case_summary(&case.solution.diagnostics, Some(&case.report));
    } else {
        let solution = solve(&spec, &opts)?;
        let computed = eval_standard_grids(&solution, cfg.grid);
        outputs.push(emit::write_text(&dir, "fields.csv", &emit::field_csv(&computed))?);
        cases.push(emit::case_entry(&solution.diagnostics));
        print_case_summary(&solution.diagnostics, None);
    }

    let echo = toml::to_string(&cfg).expect("config re-serializes");
    outputs.push(emit::write_text(&dir, "config_echo.toml", &echo)?);
    let manifest = json!({
        "command": "solve",
        "inputs": {
            "config_file": config_path.display().to_string(),
            "config": serde_json::to_value(&cfg).expect("config to json"),
            "edges": spec.edges.letters(),
        },
        "cases": cases,
        "outputs": outputs,
    });
    emit::write_manifest(&dir, &manifest)?;
    Ok(())
}

fn cmd_convergence(
    scheme: &str,
    terms: &[usize],
    grid: usize,
    gauss_order: usize,
    cli_out: &Option<PathBuf>,
) -> Result<(), CliError> {
    let id = parse_scheme(scheme).map_err(|e| CliError::Config(e.to_string()))?;
    if terms.is_empty() {
        return Err(CliError::Config("`--terms` needs at least one value".into()));
    }
    let dir = cli_out.clone().unwrap_or_else(|| PathBuf::from("."));
    prepare_dir(&dir)?;
    let opts = solve_options(gauss_order);
    let rows = run_convergence_study(id, terms, grid, &opts)?;

    let table: Vec<(usize, &thickplate::validation::ErrorReport)> =
        rows.iter().map(|r| (r.terms, &r.report)).collect();
    let outputs = vec![emit::write_text(&dir, "errors.csv", &emit::error_csv(&table))?];
    let cases: Vec<_> = rows
        .iter()
        .map(|r| {
            json!({
                "terms": r.terms,
                "regime": r.regime.name(),
                "rcond": { "traces": r.rcond_traces, "system": r.rcond_system },
                "solve_residual": r.solve_residual,
                "errors": error_entry(&r.report),
            })
        })
        .collect();
    for r in &rows {
        let w = r.report.get(thickplate::fields::FieldKind::W);
        println!(
            "terms {:>3}  regime {:<12}  e(w) {:.3e}  eI(w) {:.3e}  residual {:.3e}",
            r.terms,
            r.regime.name(),
            w.e,
            w.e_i,
            r.solve_residual
        );
    }
    let manifest = json!({
        "command": "convergence",
        "inputs": { "scheme": scheme, "terms": terms, "grid": grid, "gauss_order": gauss_order },
        "cases": cases,
        "outputs": outputs,
    });
    emit::write_manifest(&dir, &manifest)?;
    Ok(())
}

fn cmd_sweep(
    kr: f64,
    gpr: &[f64],
    terms: usize,
    grid: usize,
    gauss_order: usize,
    cli_out: &Option<PathBuf>,
) -> Result<(), CliError> {
    if gpr.is_empty() {
        return Err(CliError::Config("`--gpr` needs at least one value".into()));
    }
    let dir = cli_out.clone().unwrap_or_else(|| PathBuf::from("."));
    prepare_dir(&dir)?;
    let opts = solve_options(gauss_order);
    let sweep = run_multiscale_sweep(kr, gpr, terms, grid, &opts)?;

    let mut outputs = Vec::new();
    let mut regimes = String::from("gpr,regime,eI_w,rcond_system\n");
    let mut cases = Vec::new();
    for sc in &sweep {
        let name = format!("fields_gpr{}.csv", sc.g_pr);
        outputs.push(emit::write_text(&dir, &name, &emit::field_csv(&sc.case.computed))?);
        let w = sc.case.report.get(thickplate::fields::FieldKind::W);
        let d = &sc.case.solution.diagnostics;
        use std::fmt::Write as _;
        let _ = writeln!(
            regimes,
            "{},{},{:.17e},{:.17e}",
            sc.g_pr,
            sc.regime.name(),
            w.e_i,
            d.rcond_system
        );
        let mut entry = emit::case_entry(d);
        entry["gpr"] = json!(sc.g_pr);
        entry["errors"] = error_entry(&sc.case.report);
        cases.push(entry);
        println!(
            "gpr {:>7}  regime {:<12}  e(w) {:.3e}  eI(w) {:.3e}",
            sc.g_pr,
            sc.regime.name(),
            w.e,
            w.e_i
        );
    }
    outputs.push(emit::write_text(&dir, "regimes.csv", &regimes)?);
    let manifest = json!({
        "command": "sweep",
        "inputs": { "kr": kr, "gpr": gpr, "terms": terms, "grid": grid, "gauss_order": gauss_order },
        "cases": cases,
        "outputs": outputs,
    });
    emit::write_manifest(&dir, &manifest)?;
    Ok(())
}

fn error_entry(report: &thickplate::validation::ErrorReport) -> serde_json::Value {
    let mut map = serde_json::Map::new();
    for &(kind, name) in &thickplate::validation::METRIC_FIELDS {
        let e = report.get(kind);
        map.insert(
            name.to_string(),
            json!({ "e": e.e, "eI": e.e_i, "eB": e.e_b, "eC": e.e_c }),
        );
    }
    serde_json::Value::Object(map)
}

fn print_case_summary(
    diag: &thickplate::solve_post::Diagnostics,
    report: Option<&thickplate::validation::ErrorReport>,
) {
    println!(
        "regime {}  modes {}+{}  rcond {:.3e}  residual {:.3e}",
        diag.regime.name(),
        diag.n03,
        diag.n12,
        diag.rcond_system,
        diag.solve_residual
    );
    if let Some(r) = report {
        let w = r.get(thickplate::fields::FieldKind::W);
        println!("reference errors: e(w) {:.3e}  eI(w) {:.3e}", w.e, w.e_i);
    }
}

/// Quick oracle suite: characteristic roots, boundary-basis residuals, the
/// single-harmonic closed form, and one end-to-end reference case.
fn cmd_validate() -> ExitCode {
    let mut ok = true;
    let mut check = |name: &str, passed: bool, detail: String| {
        println!("{}  {name}  ({detail})", if passed { "ok  " } else { "FAIL" });
        ok &= passed;
    };

    // Characteristic quartic across stiffness regimes.
    let mut worst_root = 0.0f64;
    for &k in &[1.0f64, 1.0e2, 1.0e4] {
        for &factor in &[0.5f64, 1.0, 2.0] {
            let g_p = factor * 2.0 * k.sqrt();
            let spec = preset_with(1.0e4 * k, 1.0e2 * g_p);
            let c = spec.constants();
            for n in 1..=10 {
                let beta = std::f64::consts::PI * n as f64;
                match w_roots_at(&c, beta) {
                    Ok(roots) => {
                        for eta in roots.etas() {
                            worst_root = worst_root.max(char_residual(&c, beta, eta));
                        }
                    }
                    Err(e) => {
                        check("characteristic roots", false, e.to_string());
                        return ExitCode::FAILURE;
                    }
                }
            }
        }
    }
    check("characteristic roots", worst_root <= 1e-10, format!("max residual {worst_root:.3e}"));

    // Boundary basis columns against their interior operators.
    let mut worst_basis = 0.0f64;
    for id in ["1a", "2c", "3e", "4b"] {
        let spec = scheme_spec(parse_scheme(id).unwrap(), 6);
        match thickplate::basis::build_catalog(&spec) {
            Ok(cat) => {
                let pts = scatter(&spec.geometry, 40);
                worst_basis = worst_basis.max(basis_pde_residual(&cat, &pts));
            }
            Err(e) => {
                check("basis residuals", false, e.to_string());
                return ExitCode::FAILURE;
            }
        }
    }
    check("basis residuals", worst_basis <= 1e-8, format!("max residual {worst_basis:.3e}"));

    // Single-harmonic closed form on the thin simply supported square. The
    // thin, zero-Poisson setup keeps the check on the oracle itself instead
    // of the thickness-coupling floor of the energy quadratics.
    let oracle = (|| -> Result<f64, PlateError> {
        use thickplate::model::*;
        let h = 0.01;
        let base = ModelSpec {
            geometry: Geometry { a: 1.0, b: 1.0, h },
            material: Material { e: 12.0 / h.powi(3), mu: 0.0 },
            foundation: Foundation::Nondimensional { k_r: 10.0, g_pr: 5.0 },
            edges: EdgeSet::uniform(EdgeKind::SimplySupported),
            load: Load::Uniform { q0: 0.0 },
            truncation: Truncation { m: 3, n: 3 },
            scale: ScaleFactors::identity(),
        };
        let (spec, oracle) = with_navier_data(&base, 1, 1, 1.0);
        let solution = solve(&spec, &solve_options(8))?;
        let computed = eval_standard_grids(&solution, 61);
        use thickplate::validation::AnalyticFields;
        let report = error_metrics(&computed, &oracle.grids(61))?;
        Ok(report.get(thickplate::fields::FieldKind::W).e)
    })();
    match oracle {
        Ok(e) => check("harmonic oracle", e <= 1e-6, format!("e(w) {e:.3e}")),
        Err(e) => check("harmonic oracle", false, e.to_string()),
    }

    // End-to-end reference case on the clamped preset.
    let reference = (|| -> Result<f64, PlateError> {
        let base = scheme_spec(parse_scheme("1a").unwrap(), 10);
        let case = run_reference_case(&base, 61, &solve_options(8))?;
        Ok(case.report.get(thickplate::fields::FieldKind::W).e)
    })();
    match reference {
        Ok(e) => check("reference case", e <= 1e-6, format!("e(w) {e:.3e}")),
        Err(e) => check("reference case", false, e.to_string()),
    }

    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn preset_with(k: f64, g_p: f64) -> thickplate::model::ModelSpec {
    let mut spec = scheme_spec(parse_scheme("1a").unwrap(), 3);
    spec.foundation = Foundation::Nondimensional { k_r: k, g_pr: g_p };
    spec
}

/// Deterministic interior scatter, 2% margin off the edges.
fn scatter(geom: &thickplate::model::Geometry, count: usize) -> Vec<(f64, f64)> {
    let mut state = 0x9E3779B97F4A7C15u64;
    let mut next = move || {
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        (state.wrapping_mul(0x2545F4914F6CDD1D) >> 11) as f64 / (1u64 << 53) as f64
    };
    (0..count)
        .map(|_| {
            (
                geom.a * (0.02 + 0.96 * next()),
                geom.b * (0.02 + 0.96 * next()),
            )
        })
        .collect()
}
