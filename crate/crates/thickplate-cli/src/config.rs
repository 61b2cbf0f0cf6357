//! Solve-run configuration. A run is either a named preset (`scheme = "1a"`)
//! or a fully spelled-out `[model]` block; everything else has defaults.
//! Unknown keys are rejected by name, and validation collects every problem
//! before reporting.

use serde::{Deserialize, Serialize};
use thickplate::model::{
    EdgeCondition, EdgeKind, EdgeSet, Foundation, Geometry, Load, Material, ModelSpec,
    ScaleFactors, Truncation, EDGES,
};
use thickplate::validation::{parse_scheme, scheme_spec};

fn default_terms() -> usize {
    10
}
fn default_grid() -> usize {
    101
}
fn default_gauss() -> usize {
    8
}
fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Named preset "1a".."4c"; mutually exclusive with `model`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheme: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelConfig>,
    /// Series truncation M = N (presets only; the model block carries its own).
    #[serde(default = "default_terms")]
    pub terms: usize,
    /// Output grid is `grid` x `grid` points, edges included.
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default = "default_gauss")]
    pub gauss_order: usize,
    /// Attach closed-form reference boundary data and emit its error table.
    #[serde(default = "default_true")]
    pub reference: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<String>,
}

/// Sections are optional at parse time so that one pass can list every
/// missing one, instead of stopping at the first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub material: Option<MaterialConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub foundation: Option<FoundationConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<EdgesConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub load: Option<LoadConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<TruncationConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub a: f64,
    pub b: f64,
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    pub e: f64,
    pub mu: f64,
}

/// Either the physical moduli (k, gp) or the dimensionless ratios
/// (kr = k a^4/D, gpr = G_p a^2/D) — one pair, never both.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FoundationConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gp: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kr: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gpr: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgesConfig {
    /// Four letters from {C, S, F}, one per edge in the order
    /// x1 = a, x1 = 0, x2 = b, x2 = 0.
    pub kinds: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadConfig {
    /// "uniform" or "sinusoidal".
    pub kind: String,
    pub q0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationConfig {
    pub m: usize,
    pub n: usize,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| format!("config parse error: {e}"))
    }

    /// The model to run, with every configuration problem collected.
    pub fn to_spec(&self) -> Result<ModelSpec, Vec<String>> {
        let mut errs = Vec::new();
        let spec = match (&self.scheme, &self.model) {
            (Some(_), Some(_)) => {
                errs.push("`scheme` and `model` are mutually exclusive".into());
                None
            }
            (None, None) => {
                errs.push("one of `scheme` or `model` is required".into());
                None
            }
            (Some(id), None) => match parse_scheme(id) {
                Ok(id) => Some(scheme_spec(id, self.terms)),
                Err(e) => {
                    errs.push(e.to_string());
                    None
                }
            },
            (None, Some(m)) => m.to_spec(&mut errs),
        };
        if self.grid < 2 {
            errs.push("`grid` must be at least 2".into());
        }
        if self.gauss_order < 2 {
            errs.push("`gauss_order` must be at least 2".into());
        }
        match spec {
            Some(s) if errs.is_empty() => Ok(s),
            _ => Err(errs),
        }
    }
}

impl ModelConfig {
    fn to_spec(&self, errs: &mut Vec<String>) -> Option<ModelSpec> {
        let missing: Vec<&str> = [
            ("model.geometry", self.geometry.is_none()),
            ("model.material", self.material.is_none()),
            ("model.foundation", self.foundation.is_none()),
            ("model.edges", self.edges.is_none()),
            ("model.load", self.load.is_none()),
            ("model.truncation", self.truncation.is_none()),
        ]
        .iter()
        .filter(|(_, gone)| *gone)
        .map(|&(name, _)| name)
        .collect();
        if !missing.is_empty() {
            errs.push(format!("missing required keys: {}", missing.join(", ")));
            return None;
        }
        let (geometry, material, fcfg) = (
            self.geometry.as_ref().unwrap(),
            self.material.as_ref().unwrap(),
            self.foundation.as_ref().unwrap(),
        );
        let (ecfg, lcfg, tcfg) = (
            self.edges.as_ref().unwrap(),
            self.load.as_ref().unwrap(),
            self.truncation.as_ref().unwrap(),
        );
        let foundation = match (fcfg.k, fcfg.gp, fcfg.kr, fcfg.gpr) {
            (Some(k), gp, None, None) => Some(Foundation::Physical { k, g_p: gp.unwrap_or(0.0) }),
            (None, gp, None, None) if gp.is_some() => {
                Some(Foundation::Physical { k: 0.0, g_p: gp.unwrap() })
            }
            (None, None, Some(kr), gpr) => {
                Some(Foundation::Nondimensional { k_r: kr, g_pr: gpr.unwrap_or(0.0) })
            }
            (None, None, None, Some(gpr)) => {
                Some(Foundation::Nondimensional { k_r: 0.0, g_pr: gpr })
            }
            (None, None, None, None) => {
                errs.push("foundation needs `k`/`gp` or `kr`/`gpr`".into());
                None
            }
            _ => {
                errs.push(
                    "foundation keys `k`/`gp` and `kr`/`gpr` are mutually exclusive".into(),
                );
                None
            }
        };
        let mut edges = EdgeSet::uniform(EdgeKind::Clamped);
        if ecfg.kinds.chars().count() != 4 {
            errs.push(format!(
                "edge kinds `{}` must be four letters from C, S, F",
                ecfg.kinds
            ));
        } else {
            for (letter, &edge) in ecfg.kinds.chars().zip(&EDGES) {
                match kind_of(letter) {
                    Some(kind) => *edges.get_mut(edge) = blank_condition(kind),
                    None => errs.push(format!("unknown edge kind `{letter}` (use C, S or F)")),
                }
            }
        }
        let load = match lcfg.kind.as_str() {
            "uniform" => {
                if lcfg.m.is_some() || lcfg.n.is_some() {
                    errs.push("`load.m`/`load.n` only apply to the sinusoidal load".into());
                }
                Some(Load::Uniform { q0: lcfg.q0 })
            }
            "sinusoidal" => match (lcfg.m, lcfg.n) {
                (Some(m), Some(n)) => Some(Load::Sinusoidal { q0: lcfg.q0, m, n }),
                _ => {
                    errs.push("sinusoidal load needs both `load.m` and `load.n`".into());
                    None
                }
            },
            other => {
                errs.push(format!("unknown load kind `{other}` (use uniform or sinusoidal)"));
                None
            }
        };
        Some(ModelSpec {
            geometry: Geometry { a: geometry.a, b: geometry.b, h: geometry.h },
            material: Material { e: material.e, mu: material.mu },
            foundation: foundation?,
            edges,
            load: load?,
            truncation: Truncation { m: tcfg.m, n: tcfg.n },
            scale: ScaleFactors::identity(),
        })
    }
}

fn kind_of(letter: char) -> Option<EdgeKind> {
    match letter {
        'C' => Some(EdgeKind::Clamped),
        'S' => Some(EdgeKind::SimplySupported),
        'F' => Some(EdgeKind::Free),
        _ => None,
    }
}

/// Zero-data condition of the given kind; reference attachment replaces the
/// traces, forward runs keep them homogeneous.
fn blank_condition(kind: EdgeKind) -> EdgeCondition {
    use thickplate::model::Trace;
    match kind {
        EdgeKind::Clamped => EdgeCondition::Clamped {
            w: Trace::zero(),
            beta_x1: Trace::zero(),
            beta_x2: Trace::zero(),
        },
        EdgeKind::SimplySupported => EdgeCondition::SimplySupported {
            w: Trace::zero(),
            m_n: Trace::zero(),
            m_nt: Trace::zero(),
        },
        EdgeKind::Free => EdgeCondition::Free {
            q_n: Trace::zero(),
            m_n: Trace::zero(),
            m_nt: Trace::zero(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_preset_config_parses_with_defaults() {
        let cfg = RunConfig::from_toml("scheme = \"1a\"").unwrap();
        assert_eq!(cfg.grid, 101);
        assert_eq!(cfg.gauss_order, 8);
        assert!(cfg.reference);
        let spec = cfg.to_spec().unwrap();
        assert_eq!(spec.edges.letters(), "CCCC");
        assert_eq!(spec.truncation.m, 10);
    }

    #[test]
    fn unknown_keys_are_rejected_by_name() {
        let err = RunConfig::from_toml("scheme = \"1a\"\ntypo_key = 3").unwrap_err();
        assert!(err.contains("typo_key"), "{err}");
    }

    #[test]
    fn malformed_numbers_carry_line_context() {
        let err = RunConfig::from_toml("scheme = \"1a\"\ngrid = \"lots\"").unwrap_err();
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn foundation_key_pairs_are_exclusive_and_problems_accumulate() {
        let cfg = RunConfig::from_toml(
            r#"
            [model]
            geometry = { a = 1.0, b = 1.0, h = 0.1 }
            material = { e = 1.0e4, mu = 0.3 }
            foundation = { k = 1.0, kr = 2.0 }
            edges = { kinds = "CCXQ" }
            load = { kind = "uniform", q0 = 1.0 }
            truncation = { m = 3, n = 3 }
            "#,
        )
        .unwrap();
        let errs = cfg.to_spec().unwrap_err();
        assert!(errs.iter().any(|e| e.contains("mutually exclusive")), "{errs:?}");
        assert!(errs.iter().any(|e| e.contains("unknown edge kind `X`")), "{errs:?}");
    }

    #[test]
    fn every_missing_model_section_is_listed_at_once() {
        let cfg = RunConfig::from_toml(
            "[model]\ngeometry = { a = 1.0, b = 1.0, h = 0.1 }\n",
        )
        .unwrap();
        let errs = cfg.to_spec().unwrap_err();
        let msg = errs.join("\n");
        for key in ["model.material", "model.foundation", "model.edges", "model.load", "model.truncation"] {
            assert!(msg.contains(key), "{msg}");
        }
        assert!(!msg.contains("model.geometry"), "{msg}");
    }

    #[test]
    fn full_model_block_builds_the_spec() {
        let cfg = RunConfig::from_toml(
            r#"
            terms = 5
            [model]
            geometry = { a = 2.0, b = 1.0, h = 0.2 }
            material = { e = 3.0e6, mu = 0.3 }
            foundation = { kr = 100.0, gpr = 10.0 }
            edges = { kinds = "CSFC" }
            load = { kind = "sinusoidal", q0 = 2.0, m = 1, n = 2 }
            truncation = { m = 4, n = 6 }
            "#,
        )
        .unwrap();
        let spec = cfg.to_spec().unwrap();
        assert_eq!(spec.edges.letters(), "CSFC");
        assert_eq!(spec.truncation.n, 6);
        assert!(matches!(spec.load, Load::Sinusoidal { m: 1, n: 2, .. }));
    }

    #[test]
    fn config_echo_round_trips() {
        let text = "scheme = \"2b\"\nterms = 20\ngrid = 41\n";
        let cfg = RunConfig::from_toml(text).unwrap();
        let echo = toml::to_string(&cfg).unwrap();
        assert_eq!(RunConfig::from_toml(&echo).unwrap(), cfg);
    }
}
