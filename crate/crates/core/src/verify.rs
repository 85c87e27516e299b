//! Seeded statistical checks: activation of sampled zero-discord states,
//! per-row contradiction checks for both prescription tables, and the
//! Bloch-map versus matrix-conjugation consistency harness.
//!
//! Each sample index gets its own ChaCha stream, samples are evaluated in
//! parallel and results are kept in index order, so reports do not depend
//! on the thread count.

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use nalgebra::{Matrix3, Vector3};
use rand::Rng;
use rayon::prelude::*;

use crate::bloch::{from_bloch, to_bloch, BlochState, DensityMatrix};
use crate::canonical::{classify, Classification, Side};
use crate::discord::{OptimizerConfig, ZERO_CLAMP};
use crate::error::{Error, Result};
use crate::linalg::{self, max_abs_diff4, C64};
use crate::prescribe::{activate_with, entry_by_id, product_alignment, table, PrescriptionEntry, RowForm, Slot};
use crate::sampling::{self, indexed_rng};
use crate::state_file::write_bloch;
use crate::unitary::{apply_nonlocal, nonlocal_matrix_oracle, NonlocalAngles};

pub const DEFAULT_TOL: f64 = 1e-4;
pub const DEFAULT_EXCLUSION: f64 = 1e-6;
/// Lower bound on the magnitude of components drawn as nonzero.
pub const ROW_DRAW_FLOOR: f64 = 0.05;
pub const SPECTRUM_TOL: f64 = 1e-10;
pub const ORACLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SampleKind {
    Generic,
    Cq,
    Qc,
    Product,
    /// Random parameters for one prescription row, e.g. `CQ-02`.
    Row(String),
}

impl fmt::Display for SampleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleKind::Generic => f.write_str("generic"),
            SampleKind::Cq => f.write_str("cq"),
            SampleKind::Qc => f.write_str("qc"),
            SampleKind::Product => f.write_str("product"),
            SampleKind::Row(id) => f.write_str(id),
        }
    }
}

impl std::str::FromStr for SampleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "generic" => Ok(SampleKind::Generic),
            "cq" => Ok(SampleKind::Cq),
            "qc" => Ok(SampleKind::Qc),
            "product" => Ok(SampleKind::Product),
            _ => entry_by_id(s)
                .map(|e| SampleKind::Row(e.id()))
                .ok_or_else(|| Error::InvalidArgument(format!("unknown sample kind {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSpec {
    pub kind: SampleKind,
    pub count: usize,
    pub seed: u64,
    /// Samples with ‖(a, b, T)‖ at or below this are skipped.
    pub exclusion_radius: f64,
}

impl SampleSpec {
    pub fn new(kind: SampleKind, count: usize, seed: u64) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidArgument("sample count must be at least 1".into()));
        }
        Ok(Self {
            kind,
            count,
            seed,
            exclusion_radius: DEFAULT_EXCLUSION,
        })
    }
}

fn draw_component<R: Rng + ?Sized>(slot: Slot, rng: &mut R) -> f64 {
    match slot {
        Slot::Zero => 0.0,
        Slot::Any => rng.random_range(-1.0..=1.0),
        Slot::NonZero => {
            let x = rng.random_range(ROW_DRAW_FLOOR..=1.0);
            if rng.random::<bool>() {
                x
            } else {
                -x
            }
        }
    }
}

/// Random physical state of the row's form, by rejection.
pub fn draw_row_state<R: Rng + ?Sized>(entry: &PrescriptionEntry, rng: &mut R) -> BlochState {
    loop {
        let s = match entry.form {
            RowForm::Vectors { m, n } => BlochState::new(
                Vector3::from_fn(|k, _| draw_component(m[k], rng)),
                Vector3::from_fn(|k, _| draw_component(n[k], rng)),
                Matrix3::zeros(),
            ),
            RowForm::SingleAxis(i) => {
                let mut t = Matrix3::zeros();
                t[(i, i)] = draw_component(Slot::NonZero, rng);
                let mut on_axis = Vector3::zeros();
                on_axis[i] = draw_component(Slot::Any, rng);
                let free = Vector3::from_fn(|_, _| draw_component(Slot::Any, rng));
                match entry.side {
                    Side::Cq => BlochState::new(on_axis, free, t),
                    Side::Qc => BlochState::new(free, on_axis, t),
                }
            }
        };
        if from_bloch(&s).is_ok() {
            return s;
        }
    }
}

fn draw(kind: &SampleKind, seed: u64, index: usize) -> Result<BlochState> {
    let mut rng = indexed_rng(seed, index as u64);
    Ok(match kind {
        SampleKind::Generic => to_bloch(&sampling::ginibre_state(&mut rng)),
        SampleKind::Cq => sampling::classical_quantum_bloch(&mut rng),
        SampleKind::Qc => sampling::quantum_classical_bloch(&mut rng),
        SampleKind::Product => sampling::product_bloch(&mut rng),
        SampleKind::Row(id) => {
            let entry = entry_by_id(id).ok_or_else(|| Error::InvalidArgument(format!("unknown row {id}")))?;
            draw_row_state(entry, &mut rng)
        }
    })
}

/// The `index`-th state of a seeded stream, as a Bloch triple.
pub fn sample_bloch(spec: &SampleSpec, index: usize) -> Result<BlochState> {
    draw(&spec.kind, spec.seed, index)
}

/// All `spec.count` states, deterministic in the seed.
pub fn sample(spec: &SampleSpec) -> Result<Vec<DensityMatrix>> {
    (0..spec.count)
        .map(|i| from_bloch(&sample_bloch(spec, i)?))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Discord landed between the zero clamp and the tolerance.
    Indeterminate,
    Excluded,
}

/// What a report checked; used to re-run a witness on its own.
#[derive(Debug, Clone, PartialEq)]
pub enum Check {
    Theorem(u8),
    Appendix(String),
    ProductPipeline { side: Side, angles: Option<NonlocalAngles> },
    Consistency,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Check::Theorem(k) => write!(f, "theorem-{k}"),
            Check::Appendix(id) => write!(f, "row-{id}"),
            Check::ProductPipeline { side, angles: None } => write!(f, "product-{side}"),
            Check::ProductPipeline { side, angles: Some(a) } => write!(f, "product-{side}-{a}"),
            Check::Consistency => f.write_str("consistency"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub index: usize,
    pub state: BlochState,
    /// Angles used, for consistency witnesses.
    pub angles: Option<NonlocalAngles>,
    pub verdict: Verdict,
    pub value: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub check: Check,
    /// Decisive samples: `passed + failed`.
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub indeterminate: usize,
    pub excluded: usize,
    pub failure_witnesses: Vec<Witness>,
    /// Smallest discord (or largest error for consistency) over assessed samples.
    pub min_observed_discord: f64,
    pub runtime: Duration,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0 && self.indeterminate == 0 && self.passed > 0
    }
}

struct Outcome {
    verdict: Verdict,
    value: f64,
    reason: String,
    state: BlochState,
    angles: Option<NonlocalAngles>,
}

fn judge(value: f64, tol: f64) -> Verdict {
    if value > tol {
        Verdict::Pass
    } else if value > ZERO_CLAMP {
        Verdict::Indeterminate
    } else {
        Verdict::Fail
    }
}

fn aggregate(check: Check, outcomes: Vec<Outcome>, started: Instant) -> VerificationReport {
    let count = |v| outcomes.iter().filter(|o| o.verdict == v).count();
    let (passed, failed) = (count(Verdict::Pass), count(Verdict::Fail));
    let min_observed = outcomes
        .iter()
        .filter(|o| o.verdict != Verdict::Excluded)
        .map(|o| o.value)
        .fold(f64::INFINITY, f64::min);
    let witnesses = outcomes
        .iter()
        .enumerate()
        .filter(|(_, o)| matches!(o.verdict, Verdict::Fail | Verdict::Indeterminate))
        .map(|(index, o)| Witness {
            index,
            state: o.state,
            angles: o.angles,
            verdict: o.verdict,
            value: o.value,
            reason: o.reason.clone(),
        })
        .collect();
    VerificationReport {
        check,
        total: passed + failed,
        passed,
        failed,
        indeterminate: count(Verdict::Indeterminate),
        excluded: count(Verdict::Excluded),
        failure_witnesses: witnesses,
        min_observed_discord: min_observed,
        runtime: started.elapsed(),
    }
}

fn activation_value(s: &BlochState, side: Side, tol: f64, cfg: &OptimizerConfig) -> (f64, String) {
    match activate_with(s, side, None, None, tol, cfg) {
        Ok(rec) => (
            rec.output_discord,
            format!("{} via {}", side.measured().discord_label(), rec.row_id.unwrap_or_default()),
        ),
        Err(e) => (0.0, e.to_string()),
    }
}

/// Evaluates one theorem sample. Used by the harness and to re-run witnesses.
pub fn check_theorem_sample(which: u8, s: &BlochState, tol: f64, exclusion: f64) -> Result<(Verdict, f64, String)> {
    let cfg = OptimizerConfig::default();
    if s.parameter_norm() <= exclusion {
        return Ok((Verdict::Excluded, 0.0, "within exclusion radius of I/4".into()));
    }
    let (value, reason) = match which {
        1 => activation_value(s, Side::Cq, tol, &cfg),
        2 => activation_value(s, Side::Qc, tol, &cfg),
        3 => {
            let (d1, r1) = activation_value(s, Side::Cq, tol, &cfg);
            let (d2, r2) = activation_value(s, Side::Qc, tol, &cfg);
            if d1 <= d2 {
                (d1, r1)
            } else {
                (d2, r2)
            }
        }
        k => return Err(Error::InvalidArgument(format!("no theorem {k} (expected 1, 2 or 3)"))),
    };
    Ok((judge(value, tol), value, reason))
}

/// Activates every sample outside the exclusion radius and requires the
/// resulting one-way discord to exceed `tol`. Theorem 3 activates each
/// sample on both sides and scores the smaller discord.
pub fn verify_theorem(which: u8, spec: &SampleSpec, tol: f64) -> Result<VerificationReport> {
    let expected = match which {
        1 => SampleKind::Cq,
        2 => SampleKind::Qc,
        3 => SampleKind::Product,
        k => return Err(Error::InvalidArgument(format!("no theorem {k} (expected 1, 2 or 3)"))),
    };
    if spec.kind != expected {
        return Err(Error::InvalidArgument(format!(
            "theorem {which} needs {expected} samples, got {}",
            spec.kind
        )));
    }
    let started = Instant::now();
    let outcomes = (0..spec.count)
        .into_par_iter()
        .map(|i| {
            let s = sample_bloch(spec, i)?;
            let (verdict, value, reason) = check_theorem_sample(which, &s, tol, spec.exclusion_radius)?;
            Ok(Outcome { verdict, value, reason, state: s, angles: None })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate(Check::Theorem(which), outcomes, started))
}

/// Applies the row's angles to one drawn state and scores the result.
pub fn check_row_state(entry: &PrescriptionEntry, s: &BlochState, tol: f64) -> (Verdict, f64, String) {
    let out = apply_nonlocal(s, &entry.angles);
    match classify(&out, entry.side, tol) {
        Ok(Classification::NotZeroDiscord { discord }) => (judge(discord, tol), discord, "not zero discord".into()),
        Ok(Classification::ZeroDiscord(case)) => (
            Verdict::Fail,
            0.0,
            format!("output still {} {} {}", case.side, case.family, case.pattern),
        ),
        Err(Error::AmbiguousClassification { discord, .. }) => (
            judge(discord, tol),
            discord,
            "no structural match, discord within tolerance".into(),
        ),
        Err(e) => (Verdict::Fail, 0.0, e.to_string()),
    }
}

/// Draws `trials` random states of a table row, applies the row's angles
/// and requires a non-zero-discord classification with discord above `tol`.
pub fn appendix_contradiction_check(entry: &PrescriptionEntry, trials: usize, seed: u64, tol: f64) -> VerificationReport {
    let started = Instant::now();
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = indexed_rng(seed, i as u64);
            let s = draw_row_state(entry, &mut rng);
            let (verdict, value, reason) = check_row_state(entry, &s, tol);
            Outcome { verdict, value, reason, state: s, angles: None }
        })
        .collect();
    aggregate(Check::Appendix(entry.id()), outcomes, started)
}

/// Runs [`appendix_contradiction_check`] over every row of both tables.
/// Rows get distinct seeds derived from `seed` and their position.
pub fn appendix_all(trials: usize, seed: u64, tol: f64) -> Vec<VerificationReport> {
    [Side::Cq, Side::Qc]
        .iter()
        .flat_map(|&side| table(side).iter())
        .enumerate()
        .map(|(k, e)| appendix_contradiction_check(e, trials, seed.wrapping_add(1000 * k as u64), tol))
        .collect()
}

/// Product states aligned onto the z axis on both sides, then activated on
/// `side` with the table row or the given angles.
pub fn product_pipeline_check(
    side: Side,
    angles: Option<NonlocalAngles>,
    trials: usize,
    seed: u64,
    tol: f64,
) -> VerificationReport {
    let started = Instant::now();
    let cfg = OptimizerConfig::default();
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = indexed_rng(seed, i as u64);
            let s = sampling::product_bloch(&mut rng);
            let result = product_alignment(&s.a, &s.b)
                .and_then(|r| activate_with(&s, side, Some(&r), angles, tol, &cfg));
            let (verdict, value, reason) = match result {
                Ok(rec) => (judge(rec.output_discord, tol), rec.output_discord, format!("angles {}", rec.angles)),
                Err(e) => (Verdict::Fail, 0.0, e.to_string()),
            };
            Outcome { verdict, value, reason, state: s, angles }
        })
        .collect();
    aggregate(Check::ProductPipeline { side, angles }, outcomes, started)
}

/// Spectrum and matrix-oracle errors for one (state, angles) pair.
pub fn consistency_errors(s: &BlochState, angles: &NonlocalAngles) -> Result<(f64, f64)> {
    let out = apply_nonlocal(s, angles);
    let before = linalg::eigenvalues4(&s.to_matrix());
    let after = linalg::eigenvalues4(&out.to_matrix());
    let spectrum = before
        .iter()
        .zip(after.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let u = nonlocal_matrix_oracle(angles)?;
    let conj = u * s.to_matrix() * u.adjoint();
    let herm = (conj + conj.adjoint()) * C64::from(0.5);
    let oracle = max_abs_diff4(&herm, &out.to_matrix()).max(to_bloch_unchecked(&herm).max_abs_diff(&out));
    Ok((spectrum, oracle))
}

fn to_bloch_unchecked(m: &crate::linalg::Op4) -> BlochState {
    to_bloch(&DensityMatrix::new_unchecked(*m))
}

/// Random Ginibre states and random angles: the Bloch map must preserve
/// the spectrum and agree with conjugation by the calibrated matrix.
pub fn bloch_map_consistency(trials: usize, seed: u64) -> Result<VerificationReport> {
    let started = Instant::now();
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = indexed_rng(seed, i as u64);
            let s = to_bloch(&sampling::ginibre_state(&mut rng));
            let angles = NonlocalAngles::random(&mut rng);
            let (spectrum, oracle) = consistency_errors(&s, &angles)?;
            let ok = spectrum <= SPECTRUM_TOL && oracle <= ORACLE_TOL;
            Ok(Outcome {
                verdict: if ok { Verdict::Pass } else { Verdict::Fail },
                value: spectrum.max(oracle),
                reason: format!("spectrum {spectrum:.3e}, oracle {oracle:.3e}"),
                state: s,
                angles: Some(angles),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = aggregate(Check::Consistency, outcomes, started);
    // For this check the interesting extreme is the worst error.
    report.min_observed_discord = f64::NAN;
    Ok(report)
}

/// Writes every witness as a bloch-v1 file with a comment header.
pub fn write_witnesses(report: &VerificationReport, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    report
        .failure_witnesses
        .iter()
        .map(|w| {
            let path = dir.join(format!("{}-{:05}.bloch", report.check, w.index).replace('/', "_"));
            let mut text = format!(
                "# check: {}\n# index: {}\n# verdict: {:?}\n# value: {:e}\n# reason: {}\n",
                report.check, w.index, w.verdict, w.value, w.reason
            );
            if let Some(a) = w.angles {
                text.push_str(&format!("# angles: {a}\n"));
            }
            text.push_str(&write_bloch(&w.state));
            std::fs::write(&path, text)?;
            Ok(path)
        })
        .collect()
}

/// Re-runs a single witness state against the check that produced it.
pub fn recheck(check: &Check, w: &Witness, tol: f64) -> Result<Verdict> {
    Ok(match check {
        Check::Theorem(k) => check_theorem_sample(*k, &w.state, tol, DEFAULT_EXCLUSION)?.0,
        Check::Appendix(id) => {
            let e = entry_by_id(id).ok_or_else(|| Error::InvalidArgument(format!("unknown row {id}")))?;
            check_row_state(e, &w.state, tol).0
        }
        Check::ProductPipeline { side, angles } => {
            let r = product_alignment(&w.state.a, &w.state.b)?;
            match activate_with(&w.state, *side, Some(&r), *angles, tol, &OptimizerConfig::default()) {
                Ok(rec) => judge(rec.output_discord, tol),
                Err(_) => Verdict::Fail,
            }
        }
        Check::Consistency => {
            let angles = w.angles.ok_or_else(|| Error::InvalidArgument("consistency witness without angles".into()))?;
            let (spectrum, oracle) = consistency_errors(&w.state, &angles)?;
            if spectrum <= SPECTRUM_TOL && oracle <= ORACLE_TOL {
                Verdict::Pass
            } else {
                Verdict::Fail
            }
        }
    })
}
