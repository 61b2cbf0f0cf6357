//! Artifact writers. Every number goes out as `{:.17e}` so reruns are
//! byte-identical and nothing is lost to rounding.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use serde_json::{json, Value};
use thickplate::solve_post::FieldGrids;
use thickplate::validation::{ErrorReport, METRIC_FIELDS};

pub const FIELD_HEADER: &str = "x1,x2,w,bx1,bx2,Mx1,Mx2,Mx1x2,Qx1,Qx2,qe";
pub const ERROR_HEADER: &str = "terms,field,e,eI,eB,eC";

pub fn field_csv(grids: &FieldGrids) -> String {
    let mut out = String::with_capacity(grids.xs.len() * grids.ys.len() * 240);
    out.push_str(FIELD_HEADER);
    out.push('\n');
    for (i, &x) in grids.xs.iter().enumerate() {
        for (j, &y) in grids.ys.iter().enumerate() {
            let _ = write!(out, "{x:.17e},{y:.17e}");
            for (_, _, values) in &grids.fields {
                let _ = write!(out, ",{:.17e}", values[(i, j)]);
            }
            out.push('\n');
        }
    }
    out
}

/// One block of rows per truncation, fields in the metric order.
pub fn error_csv(rows: &[(usize, &ErrorReport)]) -> String {
    let mut out = String::new();
    out.push_str(ERROR_HEADER);
    out.push('\n');
    for &(terms, report) in rows {
        for &(kind, name) in &METRIC_FIELDS {
            let e = report.get(kind);
            let _ = writeln!(
                out,
                "{terms},{name},{:.17e},{:.17e},{:.17e},{:.17e}",
                e.e, e.e_i, e.e_b, e.e_c
            );
        }
    }
    out
}

pub fn write_text(dir: &Path, name: &str, text: &str) -> io::Result<String> {
    fs::write(dir.join(name), text)?;
    Ok(name.to_string())
}

pub fn write_manifest(dir: &Path, manifest: &Value) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    text.push('\n');
    fs::write(dir.join("manifest.json"), text)
}

/// Per-case diagnostics block shared by every subcommand's manifest.
pub fn case_entry(diag: &thickplate::solve_post::Diagnostics) -> Value {
    json!({
        "regime": diag.regime.name(),
        "modes": { "resolved": diag.n03, "boundary": diag.n12 },
        "rcond": { "traces": diag.rcond_traces, "system": diag.rcond_system },
        "solve_residual": diag.solve_residual,
        "quadrature_refinements": diag.refine_steps,
        "energy": { "strain": diag.strain_energy, "load_work": diag.load_work },
        "timings_ms": {
            "setup": diag.timings.setup_ms,
            "reduction": diag.timings.reduction_ms,
            "assembly": diag.timings.assembly_ms,
            "solve": diag.timings.solve_ms,
        },
    })
}
