//! Problem description: geometry, material, foundation, edge conditions, load.
//!
//! Derived constants for a plate of thickness h, Young's modulus E, Poisson
//! ratio mu on a foundation with compression modulus k and shear modulus G_p:
//!
//!   D    = E h^3 / (12 (1 - mu^2))        bending rigidity
//!   G    = E / (2 (1 + mu))               shear modulus
//!   C_s  = 5 G h / 6                      transverse shear rigidity
//!   c_q  = (2 - mu) h^2 / (10 (1 - mu))   load-smoothing length^2
//!   D_h  = D + c_q G_p
//!   G_ph = G_p + c_q k
//!   delta_h = G_ph^2 - 4 D_h k            root-regime discriminant
//!
//! All solves run on the nondimensional form a = 1, D = 1; `nondimensionalize`
//! converts physical inputs and records the scale factors needed to restore
//! physical output fields.

use std::fmt;
use std::sync::Arc;

use crate::{PlateError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    /// Side length along x1.
    pub a: f64,
    /// Side length along x2.
    pub b: f64,
    /// Thickness.
    pub h: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    pub e: f64,
    pub mu: f64,
}

/// Foundation moduli, either physical (k, G_p) or nondimensional
/// (k_r = k a^4 / D, G_pr = G_p a^2 / D).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Foundation {
    Physical { k: f64, g_p: f64 },
    Nondimensional { k_r: f64, g_pr: f64 },
}

impl Foundation {
    /// Physical (k, G_p) for the given geometry and bending rigidity.
    pub fn physical(&self, a: f64, d: f64) -> (f64, f64) {
        match *self {
            Foundation::Physical { k, g_p } => (k, g_p),
            Foundation::Nondimensional { k_r, g_pr } => (k_r * d / a.powi(4), g_pr * d / (a * a)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    pub d: f64,
    pub g: f64,
    pub c_s: f64,
    pub c_q: f64,
    pub d_h: f64,
    pub g_ph: f64,
    pub delta_h: f64,
    /// Physical foundation moduli the above were derived with.
    pub k: f64,
    pub g_p: f64,
    pub mu: f64,
    pub h: f64,
}

/// Derived operator constants. Pure: identical inputs give identical outputs.
pub fn derive_constants(geom: &Geometry, mat: &Material, fnd: &Foundation) -> DerivedConstants {
    let d = mat.e * geom.h.powi(3) / (12.0 * (1.0 - mat.mu * mat.mu));
    let g = mat.e / (2.0 * (1.0 + mat.mu));
    let c_s = 5.0 * g * geom.h / 6.0;
    let c_q = (2.0 - mat.mu) * geom.h * geom.h / (10.0 * (1.0 - mat.mu));
    let (k, g_p) = fnd.physical(geom.a, d);
    let d_h = d + c_q * g_p;
    let g_ph = g_p + c_q * k;
    let delta_h = g_ph * g_ph - 4.0 * d_h * k;
    DerivedConstants {
        d,
        g,
        c_s,
        c_q,
        d_h,
        g_ph,
        delta_h,
        k,
        g_p,
        mu: mat.mu,
        h: geom.h,
    }
}

/// Prescribed trace along one edge, as a function of the tangential coordinate.
#[derive(Clone)]
pub struct Trace {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    label: TraceLabel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceLabel {
    Zero,
    Custom,
    /// Injected from the closed-form reference solution by the validation harness.
    Reference,
}

impl Trace {
    pub fn zero() -> Self {
        Trace {
            f: Arc::new(|_| 0.0),
            label: TraceLabel::Zero,
        }
    }

    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Trace {
            f: Arc::new(f),
            label: TraceLabel::Custom,
        }
    }

    pub fn reference(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Trace {
            f: Arc::new(f),
            label: TraceLabel::Reference,
        }
    }

    /// Rescaled trace: t -> value(t * t_scale) / v_scale.
    pub fn rescaled(&self, t_scale: f64, v_scale: f64) -> Self {
        let f = self.f.clone();
        Trace {
            f: Arc::new(move |t| f(t * t_scale) / v_scale),
            label: self.label,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    pub fn label(&self) -> TraceLabel {
        self.label
    }
}

impl fmt::Debug for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Trace({:?})", self.label)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Clamped,
    SimplySupported,
    Free,
}

impl EdgeKind {
    pub fn letter(&self) -> char {
        match self {
            EdgeKind::Clamped => 'C',
            EdgeKind::SimplySupported => 'S',
            EdgeKind::Free => 'F',
        }
    }
}

/// Edge condition: the kind fixes exactly which quantities are prescribed.
///
/// Clamped edges prescribe kinematics (w, beta_x1, beta_x2); simply supported
/// edges prescribe w plus the normal and twisting moments; free edges prescribe
/// the normal shear force and both moments.
#[derive(Debug, Clone)]
pub enum EdgeCondition {
    Clamped {
        w: Trace,
        beta_x1: Trace,
        beta_x2: Trace,
    },
    SimplySupported {
        w: Trace,
        m_n: Trace,
        m_nt: Trace,
    },
    Free {
        q_n: Trace,
        m_n: Trace,
        m_nt: Trace,
    },
}

impl EdgeCondition {
    pub fn kind(&self) -> EdgeKind {
        match self {
            EdgeCondition::Clamped { .. } => EdgeKind::Clamped,
            EdgeCondition::SimplySupported { .. } => EdgeKind::SimplySupported,
            EdgeCondition::Free { .. } => EdgeKind::Free,
        }
    }

    /// Homogeneous condition of the given kind.
    pub fn homogeneous(kind: EdgeKind) -> Self {
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
}

/// The four edges in the canonical order used by every boundary-coefficient
/// block: x1 = a, x1 = 0, x2 = b, x2 = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Edge {
    X1Max,
    X1Min,
    X2Max,
    X2Min,
}

pub const EDGES: [Edge; 4] = [Edge::X1Max, Edge::X1Min, Edge::X2Max, Edge::X2Min];

impl Edge {
    /// True for the two edges with constant x1 (normal along x1).
    pub fn is_x1_edge(&self) -> bool {
        matches!(self, Edge::X1Max | Edge::X1Min)
    }

    /// True for the far edge of its direction (x1 = a or x2 = b).
    pub fn is_max(&self) -> bool {
        matches!(self, Edge::X1Max | Edge::X2Max)
    }

    /// Sign of the edge work integral: + on far edges, - on near edges.
    pub fn work_sign(&self) -> f64 {
        if self.is_max() {
            1.0
        } else {
            -1.0
        }
    }

    /// The fixed coordinate value of this edge.
    pub fn fixed_coord(&self, geom: &Geometry) -> f64 {
        match self {
            Edge::X1Max => geom.a,
            Edge::X1Min => 0.0,
            Edge::X2Max => geom.b,
            Edge::X2Min => 0.0,
        }
    }

    /// Length of the tangential interval (b for x1 edges, a for x2 edges).
    pub fn tangent_len(&self, geom: &Geometry) -> f64 {
        if self.is_x1_edge() {
            geom.b
        } else {
            geom.a
        }
    }

    /// Domain point for tangential coordinate t on this edge.
    pub fn point(&self, geom: &Geometry, t: f64) -> (f64, f64) {
        match self {
            Edge::X1Max => (geom.a, t),
            Edge::X1Min => (0.0, t),
            Edge::X2Max => (t, geom.b),
            Edge::X2Min => (t, 0.0),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EdgeSet {
    pub x1_max: EdgeCondition,
    pub x1_min: EdgeCondition,
    pub x2_max: EdgeCondition,
    pub x2_min: EdgeCondition,
}

impl EdgeSet {
    pub fn uniform(kind: EdgeKind) -> Self {
        EdgeSet {
            x1_max: EdgeCondition::homogeneous(kind),
            x1_min: EdgeCondition::homogeneous(kind),
            x2_max: EdgeCondition::homogeneous(kind),
            x2_min: EdgeCondition::homogeneous(kind),
        }
    }

    pub fn get(&self, e: Edge) -> &EdgeCondition {
        match e {
            Edge::X1Max => &self.x1_max,
            Edge::X1Min => &self.x1_min,
            Edge::X2Max => &self.x2_max,
            Edge::X2Min => &self.x2_min,
        }
    }

    pub fn get_mut(&mut self, e: Edge) -> &mut EdgeCondition {
        match e {
            Edge::X1Max => &mut self.x1_max,
            Edge::X1Min => &mut self.x1_min,
            Edge::X2Max => &mut self.x2_max,
            Edge::X2Min => &mut self.x2_min,
        }
    }

    /// Edge letters in canonical order, e.g. "CCCC".
    pub fn letters(&self) -> String {
        EDGES.iter().map(|&e| self.get(e).kind().letter()).collect()
    }
}

/// Transverse pressure field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Load {
    Uniform { q0: f64 },
    /// q0 sin(m pi x1 / a) sin(n pi x2 / b)
    Sinusoidal { q0: f64, m: usize, n: usize },
}

impl Load {
    pub fn eval(&self, geom: &Geometry, x1: f64, x2: f64) -> f64 {
        match *self {
            Load::Uniform { q0 } => q0,
            Load::Sinusoidal { q0, m, n } => {
                let am = m as f64 * std::f64::consts::PI / geom.a;
                let bn = n as f64 * std::f64::consts::PI / geom.b;
                q0 * (am * x1).sin() * (bn * x2).sin()
            }
        }
    }

    pub fn laplacian(&self, geom: &Geometry, x1: f64, x2: f64) -> f64 {
        match *self {
            Load::Uniform { .. } => 0.0,
            Load::Sinusoidal { m, n, .. } => {
                let am = m as f64 * std::f64::consts::PI / geom.a;
                let bn = n as f64 * std::f64::consts::PI / geom.b;
                -(am * am + bn * bn) * self.eval(geom, x1, x2)
            }
        }
    }

    fn scaled(&self, s: f64) -> Load {
        match *self {
            Load::Uniform { q0 } => Load::Uniform { q0: q0 / s },
            Load::Sinusoidal { q0, m, n } => Load::Sinusoidal { q0: q0 / s, m, n },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Truncation {
    /// Number of sine modes along x1.
    pub m: usize,
    /// Number of sine modes along x2.
    pub n: usize,
}

/// Multiplicative factors that restore physical output fields from the
/// nondimensional solve: physical = nondimensional * factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleFactors {
    pub length: f64,
    pub deflection: f64,
    pub rotation: f64,
    pub moment: f64,
    pub shear: f64,
    pub load: f64,
    pub psi: f64,
}

impl ScaleFactors {
    pub fn identity() -> Self {
        ScaleFactors {
            length: 1.0,
            deflection: 1.0,
            rotation: 1.0,
            moment: 1.0,
            shear: 1.0,
            load: 1.0,
            psi: 1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ModelSpec {
    pub geometry: Geometry,
    pub material: Material,
    pub foundation: Foundation,
    pub edges: EdgeSet,
    pub load: Load,
    pub truncation: Truncation,
    /// Factors that restore physical outputs; identity unless the model was
    /// produced by `nondimensionalize`.
    pub scale: ScaleFactors,
}

impl ModelSpec {
    pub fn constants(&self) -> DerivedConstants {
        derive_constants(&self.geometry, &self.material, &self.foundation)
    }
}

/// Rescale a spec to a = 1, D = 1. Output fields of the rescaled solve must be
/// multiplied by the recorded scale factors to recover physical values.
pub fn nondimensionalize(spec: &ModelSpec) -> ModelSpec {
    let g = &spec.geometry;
    let c = spec.constants();
    let a = g.a;
    let d = c.d;

    let geometry = Geometry {
        a: 1.0,
        b: g.b / a,
        h: g.h / a,
    };
    let h_nd = geometry.h;
    // E chosen so the rescaled rigidity is exactly 1.
    let material = Material {
        e: 12.0 * (1.0 - spec.material.mu.powi(2)) / h_nd.powi(3),
        mu: spec.material.mu,
    };
    let foundation = Foundation::Physical {
        k: c.k * a.powi(4) / d,
        g_p: c.g_p * a * a / d,
    };

    let scale = ScaleFactors {
        length: a,
        deflection: a * spec.scale.deflection,
        rotation: spec.scale.rotation,
        moment: d / a * spec.scale.moment,
        shear: d / (a * a) * spec.scale.shear,
        load: d / a.powi(3) * spec.scale.load,
        psi: d / a * spec.scale.psi,
    };

    let rescale_edge = |cond: &EdgeCondition, edge: Edge| -> EdgeCondition {
        let t_scale = a; // nondimensional tangential coordinate back to physical
        let _ = edge;
        match cond {
            EdgeCondition::Clamped { w, beta_x1, beta_x2 } => EdgeCondition::Clamped {
                w: w.rescaled(t_scale, a),
                beta_x1: beta_x1.rescaled(t_scale, 1.0),
                beta_x2: beta_x2.rescaled(t_scale, 1.0),
            },
            EdgeCondition::SimplySupported { w, m_n, m_nt } => EdgeCondition::SimplySupported {
                w: w.rescaled(t_scale, a),
                m_n: m_n.rescaled(t_scale, d / a),
                m_nt: m_nt.rescaled(t_scale, d / a),
            },
            EdgeCondition::Free { q_n, m_n, m_nt } => EdgeCondition::Free {
                q_n: q_n.rescaled(t_scale, d / (a * a)),
                m_n: m_n.rescaled(t_scale, d / a),
                m_nt: m_nt.rescaled(t_scale, d / a),
            },
        }
    };

    let edges = EdgeSet {
        x1_max: rescale_edge(&spec.edges.x1_max, Edge::X1Max),
        x1_min: rescale_edge(&spec.edges.x1_min, Edge::X1Min),
        x2_max: rescale_edge(&spec.edges.x2_max, Edge::X2Max),
        x2_min: rescale_edge(&spec.edges.x2_min, Edge::X2Min),
    };

    ModelSpec {
        geometry,
        material,
        foundation,
        edges,
        load: spec.load.scaled(d / a.powi(3)),
        truncation: spec.truncation,
        scale,
    }
}

/// Check a spec. Returns non-fatal warnings, or the full list of violations.
pub fn validate_spec(spec: &ModelSpec) -> Result<Vec<String>> {
    let mut violations = Vec::new();
    let mut warnings = Vec::new();
    let g = &spec.geometry;

    if !(g.a > 0.0) || !(g.b > 0.0) || !(g.h > 0.0) {
        violations.push(format!(
            "geometry must be positive: a = {}, b = {}, h = {}",
            g.a, g.b, g.h
        ));
    }
    let slender = g.h / g.a.min(g.b);
    if g.a > 0.0 && g.b > 0.0 && g.h > 0.0 && !(1e-3..=0.5).contains(&slender) {
        warnings.push(format!(
            "thickness ratio h/min(a,b) = {slender:.3e} outside the validated range [1e-3, 0.5]"
        ));
    }
    if !(spec.material.e > 0.0) {
        violations.push(format!("Young's modulus must be positive: E = {}", spec.material.e));
    }
    if !(0.0..0.5).contains(&spec.material.mu) {
        violations.push(format!(
            "Poisson ratio must lie in [0, 0.5): mu = {}",
            spec.material.mu
        ));
    }
    let (k, g_p) = match spec.foundation {
        Foundation::Physical { k, g_p } => (k, g_p),
        Foundation::Nondimensional { k_r, g_pr } => (k_r, g_pr),
    };
    if !(k >= 0.0) || !(g_p >= 0.0) {
        violations.push(format!(
            "foundation moduli must be nonnegative: k = {k}, G_p = {g_p}"
        ));
    }
    if spec.truncation.m < 1 || spec.truncation.n < 1 {
        violations.push(format!(
            "truncation must be at least 1 x 1: M = {}, N = {}",
            spec.truncation.m, spec.truncation.n
        ));
    }
    let all_free = EDGES
        .iter()
        .all(|&e| spec.edges.get(e).kind() == EdgeKind::Free);
    if k == 0.0 && g_p == 0.0 && all_free {
        violations.push(
            "free-floating plate (all edges free, k = 0, G_p = 0) has rigid-body modes".into(),
        );
    }

    if violations.is_empty() {
        Ok(warnings)
    } else {
        Err(PlateError::InvalidSpec(violations))
    }
}
