//! Physical fields as derivative rows over the two carrier fields.
//!
//! Every output quantity is a fixed linear combination of partial derivatives
//! of the deflection w and the stress function psi, with coefficients from the
//! derived constants. A `FieldRow` holds the two monomial lists; a column of
//! the basis picks the list matching its kind. With d := D / C_s:
//!
//!   beta_1 = -w,1 - d (lap w),1 + psi,2 / C_s      (and beta_2 mirrored)
//!   M_1    = D (beta_1,1 + mu beta_2,2)
//!   M_12   = D (1 - mu)/2 (beta_1,2 + beta_2,1)
//!   Q_1    = -D (lap w),1 + psi,2                  (and Q_2 mirrored)
//!   q_e    = k w - G_p lap w                        foundation reaction
//!
//! The strain energy is a weighted sum of squares of such rows; the term list
//! lives here too so assembly and post-processing share one source of truth.

use crate::basis::{BasisColumn, Catalog, ColKind};
use crate::model::DerivedConstants;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    W,
    BetaX1,
    BetaX2,
    MX1,
    MX2,
    MX1X2,
    QX1,
    QX2,
    /// w,1 and w,2 -- the foundation shear sees the true deflection slope.
    GradX1,
    GradX2,
    /// Foundation reaction k w - G_p lap w.
    FoundationReaction,
    Psi,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monomial {
    pub d1: usize,
    pub d2: usize,
    pub c: f64,
}

fn mono(d1: usize, d2: usize, c: f64) -> Monomial {
    Monomial { d1, d2, c }
}

/// One field as monomial lists over deflection columns and stress columns.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FieldRow {
    pub w: Vec<Monomial>,
    pub psi: Vec<Monomial>,
}

impl FieldRow {
    /// Highest d1 + d2 appearing in either list.
    pub fn max_order(&self) -> usize {
        self.w
            .iter()
            .chain(&self.psi)
            .map(|m| m.d1 + m.d2)
            .max()
            .unwrap_or(0)
    }
}

pub fn field_row(kind: FieldKind, c: &DerivedConstants) -> FieldRow {
    let d = c.d;
    let cs = c.c_s;
    let dc = d / cs;
    let mu = c.mu;
    match kind {
        FieldKind::W => FieldRow { w: vec![mono(0, 0, 1.0)], psi: vec![] },
        FieldKind::BetaX1 => FieldRow {
            w: vec![mono(3, 0, -dc), mono(1, 2, -dc), mono(1, 0, -1.0)],
            psi: vec![mono(0, 1, 1.0 / cs)],
        },
        FieldKind::BetaX2 => FieldRow {
            w: vec![mono(2, 1, -dc), mono(0, 3, -dc), mono(0, 1, -1.0)],
            psi: vec![mono(1, 0, -1.0 / cs)],
        },
        FieldKind::MX1 => FieldRow {
            w: vec![
                mono(4, 0, -d * dc),
                mono(2, 2, -d * dc * (1.0 + mu)),
                mono(2, 0, -d),
                mono(0, 4, -mu * d * dc),
                mono(0, 2, -mu * d),
            ],
            psi: vec![mono(1, 1, d * (1.0 - mu) / cs)],
        },
        FieldKind::MX2 => FieldRow {
            w: vec![
                mono(0, 4, -d * dc),
                mono(2, 2, -d * dc * (1.0 + mu)),
                mono(0, 2, -d),
                mono(4, 0, -mu * d * dc),
                mono(2, 0, -mu * d),
            ],
            psi: vec![mono(1, 1, -d * (1.0 - mu) / cs)],
        },
        FieldKind::MX1X2 => FieldRow {
            w: vec![
                mono(3, 1, -d * dc * (1.0 - mu)),
                mono(1, 3, -d * dc * (1.0 - mu)),
                mono(1, 1, -d * (1.0 - mu)),
            ],
            psi: vec![
                mono(2, 0, -d * (1.0 - mu) / (2.0 * cs)),
                mono(0, 2, d * (1.0 - mu) / (2.0 * cs)),
            ],
        },
        FieldKind::QX1 => FieldRow {
            w: vec![mono(3, 0, -d), mono(1, 2, -d)],
            psi: vec![mono(0, 1, 1.0)],
        },
        FieldKind::QX2 => FieldRow {
            w: vec![mono(2, 1, -d), mono(0, 3, -d)],
            psi: vec![mono(1, 0, -1.0)],
        },
        FieldKind::GradX1 => FieldRow { w: vec![mono(1, 0, 1.0)], psi: vec![] },
        FieldKind::GradX2 => FieldRow { w: vec![mono(0, 1, 1.0)], psi: vec![] },
        FieldKind::FoundationReaction => FieldRow {
            w: vec![mono(0, 0, c.k), mono(2, 0, -c.g_p), mono(0, 2, -c.g_p)],
            psi: vec![],
        },
        FieldKind::Psi => FieldRow { w: vec![], psi: vec![mono(0, 0, 1.0)] },
    }
}

/// Value of a field row on one basis column at a point.
pub fn eval_row(cat: &Catalog, col: &BasisColumn, row: &FieldRow, x1: f64, x2: f64) -> f64 {
    let monos = match col.kind {
        ColKind::W => &row.w,
        ColKind::Psi => &row.psi,
    };
    monos
        .iter()
        .map(|m| m.c * cat.column_value(col, x1, x2, m.d1, m.d2))
        .sum()
}

/// Weighted sum of rows, monomials merged by derivative order.
pub fn combine_rows(parts: &[(f64, &FieldRow)]) -> FieldRow {
    let merge = |pick: fn(&FieldRow) -> &Vec<Monomial>| {
        let mut acc: Vec<Monomial> = Vec::new();
        for &(s, row) in parts {
            for m in pick(row) {
                match acc.iter_mut().find(|a| a.d1 == m.d1 && a.d2 == m.d2) {
                    Some(a) => a.c += s * m.c,
                    None => acc.push(mono(m.d1, m.d2, s * m.c)),
                }
            }
        }
        acc.retain(|m| m.c != 0.0);
        acc.sort_by_key(|m| (m.d1, m.d2));
        acc
    };
    FieldRow { w: merge(|r| &r.w), psi: merge(|r| &r.psi) }
}

/// One sum-of-squares contribution to the strain energy:
/// Pi ⊇ (weight / 2) * integral of (row q)^2.
#[derive(Debug, Clone)]
pub struct EnergyTerm {
    pub weight: f64,
    pub row: FieldRow,
    pub label: &'static str,
}

/// The energy as a list of squared rows. Splitting the moments into their
/// trace and deviator parts (M1 + M2, M1 - M2, M12) diagonalizes the bending
/// energy; the trace part carries no stress-function content at all.
pub fn energy_terms(c: &DerivedConstants) -> Vec<EnergyTerm> {
    let m1 = field_row(FieldKind::MX1, c);
    let m2 = field_row(FieldKind::MX2, c);
    let mut terms = vec![
        EnergyTerm {
            weight: 1.0 / (2.0 * c.d * (1.0 + c.mu)),
            row: combine_rows(&[(1.0, &m1), (1.0, &m2)]),
            label: "moment trace",
        },
        EnergyTerm {
            weight: 1.0 / (2.0 * c.d * (1.0 - c.mu)),
            row: combine_rows(&[(1.0, &m1), (-1.0, &m2)]),
            label: "moment deviator",
        },
        EnergyTerm {
            weight: 2.0 / (c.d * (1.0 - c.mu)),
            row: field_row(FieldKind::MX1X2, c),
            label: "twist",
        },
        EnergyTerm {
            weight: 1.0 / c.c_s,
            row: field_row(FieldKind::QX1, c),
            label: "shear x1",
        },
        EnergyTerm {
            weight: 1.0 / c.c_s,
            row: field_row(FieldKind::QX2, c),
            label: "shear x2",
        },
    ];
    if c.k > 0.0 {
        terms.push(EnergyTerm {
            weight: c.k,
            row: field_row(FieldKind::W, c),
            label: "foundation compression",
        });
    }
    if c.g_p > 0.0 {
        terms.push(EnergyTerm {
            weight: c.g_p,
            row: field_row(FieldKind::GradX1, c),
            label: "foundation shear x1",
        });
        terms.push(EnergyTerm {
            weight: c.g_p,
            row: field_row(FieldKind::GradX2, c),
            label: "foundation shear x2",
        });
    }
    terms
}
