//! Prescription tables mapping canonical zero-discord forms to a nonlocal
//! unitary that activates discord, and the activation pipeline
//! canonicalise → look up → apply.
//!
//! Rows are matched in listed order; rows with `Any` slots act as
//! catch-alls after the more specific rows above them.

use std::fmt;
use std::sync::OnceLock;

use nalgebra::{Matrix3, Vector3};

use crate::bloch::{to_bloch, BlochState, DensityMatrix};
use crate::canonical::{
    classify, match_structure, svd_canonicalize, CanonicalCase, Classification, Family, Side, DEFAULT_TOL,
};
use crate::discord::{discord_bloch, OptimizerConfig};
use crate::error::{Error, Result};
use crate::unitary::{apply_local, apply_nonlocal, LocalRotationPair, NonlocalAngles};

/// Constraint on one Bloch-vector component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    Zero,
    NonZero,
    Any,
}

impl Slot {
    fn admits(self, nonzero: bool) -> bool {
        match self {
            Slot::Zero => !nonzero,
            Slot::NonZero => nonzero,
            Slot::Any => true,
        }
    }

    fn symbol(self) -> char {
        match self {
            Slot::Zero => '0',
            Slot::NonZero => '+',
            Slot::Any => '*',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowForm {
    /// T = 0 with per-component constraints on m and n.
    Vectors { m: [Slot; 3], n: [Slot; 3] },
    /// Single correlation on the given zero-based axis; the classical side's
    /// vector lies on that axis, the other vector is arbitrary.
    SingleAxis(usize),
}

impl fmt::Display for RowForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowForm::Vectors { m, n } => {
                let s = |v: &[Slot; 3]| v.iter().map(|x| x.symbol().to_string()).collect::<Vec<_>>().join(",");
                write!(f, "m=({}) n=({}) T=0", s(m), s(n))
            }
            RowForm::SingleAxis(i) => write!(f, "single axis {} (s{}{} != 0)", i + 1, i + 1, i + 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrescriptionEntry {
    pub side: Side,
    /// One-based position within the side's table.
    pub row: usize,
    pub form: RowForm,
    pub angles: NonlocalAngles,
}

impl PrescriptionEntry {
    /// Stable identifier such as `CQ-02` or `QC-22`.
    pub fn id(&self) -> String {
        format!("{}-{:02}", self.side, self.row)
    }

    pub fn matches(&self, case: &CanonicalCase) -> bool {
        if case.side != self.side {
            return false;
        }
        match (self.form, case.family) {
            (RowForm::Vectors { m, n }, Family::VectorsOnly) => (0..3)
                .all(|k| m[k].admits(case.pattern.m[k]) && n[k].admits(case.pattern.n[k])),
            (RowForm::SingleAxis(i), Family::SingleAxis(j)) => i == j,
            _ => false,
        }
    }
}

use Slot::{Any as A, NonZero as N, Zero as Z};

type RawRow = (Option<([Slot; 3], [Slot; 3])>, usize, [i64; 3]);

// Angles in units of π/4. Single-axis rows carry `None` and their axis.
const CQ_ROWS: [RawRow; 20] = [
    (Some(([Z, Z, Z], [A, A, N])), 0, [1, 1, 0]),
    (Some(([Z, Z, Z], [N, Z, Z])), 0, [2, 1, 1]),
    (Some(([Z, Z, Z], [Z, N, Z])), 0, [1, 0, 2]),
    (Some(([Z, Z, Z], [N, N, Z])), 0, [1, 0, 2]),
    (Some(([Z, Z, N], [N, A, A])), 0, [0, 2, 0]),
    (Some(([Z, Z, N], [Z, N, A])), 0, [0, 2, 2]),
    (Some(([Z, Z, N], [Z, Z, A])), 0, [0, 1, 1]),
    (Some(([Z, N, Z], [N, A, A])), 0, [0, 0, 2]),
    (Some(([Z, N, Z], [Z, N, A])), 0, [0, 2, 1]),
    (Some(([Z, N, Z], [Z, Z, A])), 0, [1, 0, 1]),
    (Some(([N, Z, Z], [N, A, A])), 0, [0, 2, 0]),
    (Some(([N, Z, Z], [Z, N, A])), 0, [1, 2, 0]),
    (Some(([N, Z, Z], [Z, Z, A])), 0, [0, 1, 1]),
    (Some(([N, Z, N], [A, A, A])), 0, [0, 2, 2]),
    (Some(([N, N, Z], [A, A, A])), 0, [0, 2, 2]),
    (Some(([Z, N, N], [A, A, A])), 0, [4, 4, 2]),
    (Some(([N, N, N], [A, A, A])), 0, [0, 2, 2]),
    (None, 0, [0, 0, 2]),
    (None, 1, [2, 2, 0]),
    (None, 2, [4, 2, 4]),
];

const QC_ROWS: [RawRow; 22] = [
    (Some(([Z, Z, Z], [A, A, N])), 0, [1, 0, 2]),
    (Some(([Z, Z, Z], [N, Z, Z])), 0, [1, 1, 0]),
    (Some(([Z, Z, Z], [Z, N, Z])), 0, [1, 0, 2]),
    (Some(([Z, Z, Z], [N, N, Z])), 0, [1, 1, 0]),
    (Some(([Z, Z, N], [A, N, A])), 0, [0, 2, 2]),
    (Some(([Z, Z, N], [A, Z, N])), 0, [0, 2, 2]),
    (Some(([Z, Z, N], [A, Z, Z])), 0, [0, 1, 1]),
    (Some(([Z, N, Z], [N, A, A])), 0, [0, 0, 2]),
    (Some(([Z, N, Z], [Z, N, A])), 0, [0, 2, 1]),
    (Some(([Z, N, Z], [Z, Z, N])), 0, [1, 1, 0]),
    (Some(([Z, N, Z], [Z, Z, Z])), 0, [1, 0, 2]),
    (Some(([N, Z, Z], [N, A, A])), 0, [0, 0, 2]),
    (Some(([N, Z, Z], [Z, A, N])), 0, [0, 2, 1]),
    (Some(([N, Z, Z], [Z, N, Z])), 0, [1, 2, 0]),
    (Some(([N, Z, Z], [Z, Z, Z])), 0, [0, 1, 2]),
    (Some(([N, Z, N], [A, A, A])), 0, [0, 2, 2]),
    (Some(([N, N, Z], [A, A, A])), 0, [0, 2, 2]),
    (Some(([Z, N, N], [A, A, A])), 0, [2, 0, 2]),
    (Some(([N, N, N], [A, A, A])), 0, [0, 2, 2]),
    (None, 0, [0, 0, 2]),
    (None, 1, [0, 0, 2]),
    (None, 2, [0, 2, 0]),
];

fn build(side: Side, rows: &[RawRow]) -> Vec<PrescriptionEntry> {
    rows.iter()
        .enumerate()
        .map(|(k, &(vectors, axis, quarters))| PrescriptionEntry {
            side,
            row: k + 1,
            form: match vectors {
                Some((m, n)) => RowForm::Vectors { m, n },
                None => RowForm::SingleAxis(axis),
            },
            angles: NonlocalAngles::quarter_pi(quarters),
        })
        .collect()
}

/// The prescription table for one side, in matching order.
pub fn table(side: Side) -> &'static [PrescriptionEntry] {
    static CQ: OnceLock<Vec<PrescriptionEntry>> = OnceLock::new();
    static QC: OnceLock<Vec<PrescriptionEntry>> = OnceLock::new();
    match side {
        Side::Cq => CQ.get_or_init(|| build(Side::Cq, &CQ_ROWS)),
        Side::Qc => QC.get_or_init(|| build(Side::Qc, &QC_ROWS)),
    }
}

/// Finds a row by identifier (`CQ-02`, `qc-22`).
pub fn entry_by_id(id: &str) -> Option<&'static PrescriptionEntry> {
    let (side, row) = id.split_once('-')?;
    let side: Side = side.parse().ok()?;
    let row: usize = row.parse().ok()?;
    table(side).iter().find(|e| e.row == row)
}

/// First matching row for a classified case.
pub fn lookup(case: &CanonicalCase) -> Result<&'static PrescriptionEntry> {
    if case.is_maximally_mixed() {
        return Err(Error::NoPrescription);
    }
    table(case.side)
        .iter()
        .find(|e| e.matches(case))
        .ok_or_else(|| Error::UnmatchedCase(format!("{} {} {}", case.side, case.family, case.pattern)))
}

pub fn prescribe(case: &CanonicalCase) -> Result<NonlocalAngles> {
    lookup(case).map(|e| e.angles)
}

/// One run of the activation pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivationRecord {
    pub side: Side,
    pub input: BlochState,
    pub pre_rotations: LocalRotationPair,
    pub matched_case: CanonicalCase,
    /// Identifier of the table row used, `None` when angles were overridden.
    pub row_id: Option<String>,
    pub angles: NonlocalAngles,
    pub output: BlochState,
    /// Discord of the output on the requested side.
    pub output_discord: f64,
}

/// Canonicalises by SVD, matches the table and applies the prescribed angles.
pub fn activate(dm: &DensityMatrix, side: Side) -> Result<ActivationRecord> {
    activate_with(&to_bloch(dm), side, None, None, DEFAULT_TOL, &OptimizerConfig::default())
}

/// Full-control variant.
///
/// `rotations` replaces the SVD canonicalisation (the rotated state must
/// then match a structural form directly); `angles` bypasses the table.
pub fn activate_with(
    s: &BlochState,
    side: Side,
    rotations: Option<&LocalRotationPair>,
    angles: Option<NonlocalAngles>,
    tol: f64,
    cfg: &OptimizerConfig,
) -> Result<ActivationRecord> {
    let (pre_rotations, canonical, case) = match rotations {
        Some(r) => {
            let rotated = apply_local(s, r);
            let case = match match_structure(&rotated, side) {
                Some(c) => c,
                None => {
                    let discord = discord_bloch(s, side.measured(), cfg)?;
                    return Err(Error::NotZeroDiscordInput { side, discord });
                }
            };
            (*r, rotated, case)
        }
        None => {
            let case = match classify(s, side, tol)? {
                Classification::ZeroDiscord(c) => c,
                Classification::NotZeroDiscord { discord } => {
                    return Err(Error::NotZeroDiscordInput { side, discord })
                }
            };
            let canon = svd_canonicalize(s);
            (canon.rotations, canon.canonical, case)
        }
    };
    if case.is_maximally_mixed() {
        return Err(Error::NoPrescription);
    }
    let (row_id, angles) = match angles {
        Some(a) => (None, a),
        None => {
            let e = lookup(&case)?;
            (Some(e.id()), e.angles)
        }
    };
    let output = apply_nonlocal(&canonical, &angles);
    let output_discord = discord_bloch(&output, side.measured(), cfg)?;
    Ok(ActivationRecord {
        side,
        input: *s,
        pre_rotations,
        matched_case: case,
        row_id,
        angles,
        output,
        output_discord,
    })
}

/// Proper rotation sending r to sgn(r₃)|r| ẑ.
///
/// Rows: (-r₃/r₁, 0, 1) normalised, then the completion, then sgn(r₃) r̂.
/// Needs r₁ ≠ 0 and r₃ ≠ 0.
pub fn align_to_z(r: &Vector3<f64>) -> Result<Matrix3<f64>> {
    if r[0].abs() <= 1e-12 || r[2].abs() <= 1e-12 {
        return Err(Error::DegenerateProductVector([r[0], r[1], r[2]]));
    }
    let e3 = r.normalize() * r[2].signum();
    let e1 = Vector3::new(-r[2] / r[0], 0.0, 1.0).normalize();
    let e2 = e3.cross(&e1);
    Ok(Matrix3::from_rows(&[e1.transpose(), e2.transpose(), e3.transpose()]))
}

/// Rotations taking a product state's local vectors onto the z axis.
pub fn product_alignment(ra: &Vector3<f64>, rb: &Vector3<f64>) -> Result<LocalRotationPair> {
    LocalRotationPair::new(align_to_z(ra)?, align_to_z(rb)?)
}
