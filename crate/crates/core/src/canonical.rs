//! Local-rotation canonical form and structural zero-discord classification.
//!
//! After rotating with the singular vectors of T, a classical-quantum state
//! has one of two shapes:
//!
//! * `VectorsOnly`: T = 0, arbitrary local vectors m and n;
//! * `SingleAxis(i)`: T = diag with only sᵢᵢ ≠ 0, and m along axis i.
//!
//! Quantum-classical states are the mirror image with n along axis i.

use std::fmt;

use nalgebra::{Matrix3, Vector3};

use crate::bloch::{from_bloch, to_bloch, BlochState, DensityMatrix};
use crate::discord::{discord_bloch, OptimizerConfig, Party};
use crate::error::{Error, Result};
use crate::unitary::{apply_local, LocalRotationPair};

/// A component with magnitude at or below this counts as zero.
pub const STRUCTURAL_ZERO: f64 = 1e-9;
/// Numerical discord threshold used when the structural test fails.
pub const DEFAULT_TOL: f64 = 1e-4;

/// Which one-way discord is required to vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// Classical on A: D(B/A) = 0.
    Cq,
    /// Classical on B: D(A/B) = 0.
    Qc,
}

impl Side {
    pub fn measured(self) -> Party {
        match self {
            Side::Cq => Party::A,
            Side::Qc => Party::B,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Cq => "CQ",
            Side::Qc => "QC",
        })
    }
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cq" | "b/a" => Ok(Side::Cq),
            "qc" | "a/b" => Ok(Side::Qc),
            other => Err(Error::InvalidArgument(format!("unknown side {other:?} (expected cq or qc)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    VectorsOnly,
    /// Zero-based axis of the single surviving correlation.
    SingleAxis(usize),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::VectorsOnly => f.write_str("vectors-only"),
            Family::SingleAxis(i) => write!(f, "single-axis-{}", i + 1),
        }
    }
}

/// Nonzero flags for the components of m and n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ZeroPattern {
    pub m: [bool; 3],
    pub n: [bool; 3],
}

impl ZeroPattern {
    pub fn of(m: &Vector3<f64>, n: &Vector3<f64>) -> Self {
        Self {
            m: std::array::from_fn(|k| m[k].abs() > STRUCTURAL_ZERO),
            n: std::array::from_fn(|k| n[k].abs() > STRUCTURAL_ZERO),
        }
    }
}

impl fmt::Display for ZeroPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[bool; 3], name: char| {
            let parts: Vec<String> = v
                .iter()
                .enumerate()
                .map(|(k, &nz)| if nz { format!("{name}{}", k + 1) } else { "0".into() })
                .collect();
            parts.join(",")
        };
        write!(f, "m=({}) n=({})", show(&self.m, 'm'), show(&self.n, 'n'))
    }
}

/// A structurally matched zero-discord form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalCase {
    pub side: Side,
    pub family: Family,
    pub pattern: ZeroPattern,
    pub m: Vector3<f64>,
    pub n: Vector3<f64>,
    /// Diagonal of the canonical correlation tensor.
    pub s: Vector3<f64>,
}

impl CanonicalCase {
    pub fn is_maximally_mixed(&self) -> bool {
        self.family == Family::VectorsOnly && self.pattern.m == [false; 3] && self.pattern.n == [false; 3]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalizationResult {
    pub canonical: BlochState,
    pub rotations: LocalRotationPair,
    pub singular_values: [f64; 3],
}

fn is_sorted_diagonal(t: &Matrix3<f64>) -> bool {
    let off = (0..3)
        .flat_map(|i| (0..3).filter(move |&j| j != i).map(move |j| (i, j)))
        .all(|(i, j)| t[(i, j)].abs() <= 1e-12);
    off && t[(0, 0)] >= t[(1, 1)] && t[(1, 1)] >= t[(2, 2)].abs()
}

fn first_nonzero_negative(v: &Vector3<f64>) -> bool {
    v.iter().find(|x| x.abs() > 1e-12).is_some_and(|x| *x < 0.0)
}

fn lex_cmp(x: &Vector3<f64>, y: &Vector3<f64>) -> std::cmp::Ordering {
    x.iter()
        .zip(y.iter())
        .map(|(a, b)| a.total_cmp(b))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// Rotates both qubits so that T becomes diagonal, |s₁₁| ≥ |s₂₂| ≥ |s₃₃|.
///
/// The first two left singular vectors get a positive leading entry; the
/// third pair is the cross product of the first two on each side, which
/// keeps both rotations proper and leaves s₃₃ with whatever sign results.
pub fn svd_canonicalize(s: &BlochState) -> CanonicalizationResult {
    if is_sorted_diagonal(&s.t) {
        return CanonicalizationResult {
            canonical: *s,
            rotations: LocalRotationPair::identity(),
            singular_values: [s.t[(0, 0)], s.t[(1, 1)], s.t[(2, 2)].abs()],
        };
    }
    let svd = s.t.svd(true, true);
    let u = svd.u.expect("svd computed with u");
    let v = svd.v_t.expect("svd computed with v").transpose();
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| {
        let (si, sj) = (svd.singular_values[i], svd.singular_values[j]);
        if (si - sj).abs() <= 1e-12 {
            lex_cmp(&u.column(i).into(), &u.column(j).into())
        } else {
            sj.total_cmp(&si)
        }
    });
    let mut left: [Vector3<f64>; 3] = order.map(|k| u.column(k).into());
    let mut right: [Vector3<f64>; 3] = order.map(|k| v.column(k).into());
    for k in 0..2 {
        if first_nonzero_negative(&left[k]) {
            left[k] = -left[k];
            right[k] = -right[k];
        }
    }
    left[2] = left[0].cross(&left[1]);
    right[2] = right[0].cross(&right[1]);

    let qa = Matrix3::from_rows(&left.map(|c| c.transpose()));
    let qb = Matrix3::from_rows(&right.map(|c| c.transpose()));
    let rotations = LocalRotationPair::new(qa, qb).expect("singular vectors form proper rotations");
    let mut canonical = apply_local(s, &rotations);
    // Off-diagonal remainders are round-off; zero them so the form is exact.
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                canonical.t[(i, j)] = 0.0;
            }
        }
    }
    CanonicalizationResult {
        canonical,
        rotations,
        singular_values: order.map(|k| svd.singular_values[k]),
    }
}

/// Structural match of an already canonical triple, without any discord fallback.
pub fn match_structure(canonical: &BlochState, side: Side) -> Option<CanonicalCase> {
    let (m, n) = (canonical.a, canonical.b);
    let s = canonical.t.diagonal();
    let off_diag = (0..3)
        .flat_map(|i| (0..3).filter(move |&j| j != i).map(move |j| (i, j)))
        .any(|(i, j)| canonical.t[(i, j)].abs() > STRUCTURAL_ZERO);
    if off_diag {
        return None;
    }
    let nonzero: Vec<usize> = (0..3).filter(|&k| s[k].abs() > STRUCTURAL_ZERO).collect();
    let family = match nonzero.as_slice() {
        [] => Family::VectorsOnly,
        [i] => {
            let along = match side {
                Side::Cq => &m,
                Side::Qc => &n,
            };
            if (0..3).any(|k| k != *i && along[k].abs() > STRUCTURAL_ZERO) {
                return None;
            }
            Family::SingleAxis(*i)
        }
        _ => return None,
    };
    Some(CanonicalCase {
        side,
        family,
        pattern: ZeroPattern::of(&m, &n),
        m,
        n,
        s,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Classification {
    ZeroDiscord(CanonicalCase),
    NotZeroDiscord { discord: f64 },
}

impl Classification {
    pub fn case(&self) -> Option<&CanonicalCase> {
        match self {
            Classification::ZeroDiscord(c) => Some(c),
            Classification::NotZeroDiscord { .. } => None,
        }
    }
}

/// Canonicalises, tries the structural forms, and falls back to the
/// numerical discord when no form matches.
pub fn classify(s: &BlochState, side: Side, tol: f64) -> Result<Classification> {
    classify_with(s, side, tol, &OptimizerConfig::default())
}

pub fn classify_with(s: &BlochState, side: Side, tol: f64, cfg: &OptimizerConfig) -> Result<Classification> {
    let canon = svd_canonicalize(s);
    if let Some(case) = match_structure(&canon.canonical, side) {
        return Ok(Classification::ZeroDiscord(case));
    }
    let discord = discord_bloch(s, side.measured(), cfg)?;
    if discord > tol {
        Ok(Classification::NotZeroDiscord { discord })
    } else {
        Err(Error::AmbiguousClassification { side, discord })
    }
}

/// Classifies against both sides.
pub fn classify_both(s: &BlochState, tol: f64) -> (Result<Classification>, Result<Classification>) {
    (classify(s, Side::Cq, tol), classify(s, Side::Qc, tol))
}

/// True when the structure matches or the numerical discord is within `tol`.
pub fn is_zero_discord(dm: &DensityMatrix, side: Side, tol: f64) -> bool {
    match classify(&to_bloch(dm), side, tol) {
        Ok(Classification::ZeroDiscord(_)) => true,
        Ok(Classification::NotZeroDiscord { .. }) => false,
        Err(Error::AmbiguousClassification { .. }) => true,
        Err(_) => false,
    }
}

/// Physical-state check used by callers that start from raw triples.
pub fn classify_state(s: &BlochState, side: Side, tol: f64) -> Result<Classification> {
    from_bloch(s)?;
    classify(s, side, tol)
}
