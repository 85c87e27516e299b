//! Remote state preparation: the fidelity law F = ½(λ₂ + λ₃), the two-phase
//! protocol (nonlocal unitary, then standard measurement), the Φ family
//! ¼(I + I⊗n·σ) and a shot simulator for the ideal singlet protocol.

use nalgebra::{Matrix2, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bloch::{from_bloch, to_bloch, BlochState, DensityMatrix};
use crate::canonical::Side;
use crate::discord::{geometric_discord, geometric_fidelity};
use crate::error::{Error, Result};
use crate::linalg::{kron, Op2, Op4, C64, ONE, ZERO};
use crate::prescribe::activate;
use crate::unitary::{apply_nonlocal, NonlocalAngles};

/// Fidelity regarded as a usable preparation.
pub const SUCCESS_THRESHOLD: f64 = 1e-2;
/// The three Φ regime thresholds compare against this length.
pub const PHI_THRESHOLD: f64 = 0.3;
/// Slack on the regime comparisons so that n = 0.3·û built in floating
/// point still lands in the first regime.
pub const PHI_SLACK: f64 = 1e-12;

/// F = ½(λ₂ + λ₃) of TᵀT.
pub fn rsp_fidelity(s: &BlochState) -> f64 {
    geometric_fidelity(s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AngleChoice {
    Explicit(NonlocalAngles),
    /// Use the activation table on the quantum-classical side.
    Auto,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RspReport {
    pub pre_geo_discord: f64,
    pub post_geo_discord: f64,
    pub fidelity: f64,
    pub angles_used: NonlocalAngles,
    pub success_threshold: f64,
    pub output: BlochState,
    /// Table row used in auto mode.
    pub row_id: Option<String>,
}

impl RspReport {
    pub fn succeeded(&self) -> bool {
        self.fidelity >= self.success_threshold
    }
}

/// Preparatory phase (nonlocal unitary) followed by the fidelity law.
pub fn modified_protocol(dm: &DensityMatrix, choice: AngleChoice) -> Result<RspReport> {
    let s = to_bloch(dm);
    let (output, angles, row_id) = match choice {
        AngleChoice::Explicit(angles) => (apply_nonlocal(&s, &angles), angles, None),
        AngleChoice::Auto => {
            let rec = activate(dm, Side::Qc)?;
            (rec.output, rec.angles, rec.row_id)
        }
    };
    let post = geometric_discord(&output);
    Ok(RspReport {
        pre_geo_discord: geometric_discord(&s),
        post_geo_discord: post,
        fidelity: post * post,
        angles_used: angles,
        success_threshold: SUCCESS_THRESHOLD,
        output,
        row_id,
    })
}

/// Φ = ¼(I⊗I + I⊗n·σ).
pub fn phi_state(n: &Vector3<f64>) -> Result<DensityMatrix> {
    if n.norm() > 1.0 + 1e-12 {
        return Err(Error::InvalidArgument(format!("|n| = {} exceeds 1", n.norm())));
    }
    from_bloch(&BlochState::new(Vector3::zeros(), *n, nalgebra::Matrix3::zeros()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiCase {
    /// 1, 2 or 3 in listed order.
    pub regime: u8,
    pub angles: NonlocalAngles,
}

/// The three regime angle triples, in listed order.
pub fn phi_regime_angles() -> [NonlocalAngles; 3] {
    [
        NonlocalAngles::quarter_pi([1, 3, 3]),
        NonlocalAngles::quarter_pi([3, 3, 2]),
        NonlocalAngles::quarter_pi([1, 1, 2]),
    ]
}

/// Regime selection evaluated verbatim and in order; `None` when no regime applies.
///
/// Regimes 2 and 3 require |n| < 0.3 together with a single component
/// ≥ 0.3, which no vector satisfies. They are kept as written and reported by
/// [`phi_dead_branches`].
pub fn phi_case_angles(n: &Vector3<f64>) -> Option<PhiCase> {
    let [r1, r2, r3] = phi_regime_angles();
    let norm = n.norm();
    let t = PHI_THRESHOLD - PHI_SLACK;
    if norm >= t {
        Some(PhiCase { regime: 1, angles: r1 })
    } else if n[2] >= t {
        Some(PhiCase { regime: 2, angles: r2 })
    } else if n[0] >= t {
        Some(PhiCase { regime: 3, angles: r3 })
    } else {
        None
    }
}

/// Warnings for regime conditions that can never hold.
pub fn phi_dead_branches() -> [&'static str; 2] {
    [
        "regime 2 (|n| < 0.3 and n3 >= 0.3) is unsatisfiable since |n3| <= |n|",
        "regime 3 (|n| < 0.3, n3 < 0.3 and n1 >= 0.3) is unsatisfiable since |n1| <= |n|",
    ]
}

/// Equatorial target (|0⟩ + e^{iθ}|1⟩)/√2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquatorialTarget {
    theta: f64,
}

impl EquatorialTarget {
    pub fn new(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::NonFiniteAngle(theta));
        }
        Ok(Self {
            theta: theta.rem_euclid(std::f64::consts::TAU),
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    fn ket(&self, orthogonal: bool) -> [C64; 2] {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phase = C64::from_polar(s, self.theta);
        [C64::from(s), if orthogonal { -phase } else { phase }]
    }

    pub fn projector(&self) -> Op2 {
        projector(self.ket(false))
    }
}

fn projector(k: [C64; 2]) -> Op2 {
    Matrix2::from_fn(|r, c| k[r] * k[c].conj())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingletRspOutcome {
    pub shots: u64,
    /// Shots where Alice found |φ⟩ (bit 0, Bob applies σ₃).
    pub bit0: u64,
    pub mean_fidelity: f64,
    pub min_fidelity: f64,
    /// Largest entrywise distance between Bob's corrected state and |φ⟩⟨φ|.
    pub max_state_error: f64,
}

/// Shot-by-shot simulation of the ideal singlet protocol.
///
/// Alice measures {|φ⟩, |φ⊥⟩} on her half of |ψ⁻⟩ and sends the outcome bit;
/// on bit 0 Bob applies σ₃. Each shot draws from its own generator seeded
/// with `seed ^ index`.
pub fn simulate_singlet_rsp(target: EquatorialTarget, shots: u64, seed: u64) -> Result<SingletRspOutcome> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let psi = [ZERO, C64::from(s), C64::from(-s), ZERO];
    let singlet = Op4::from_fn(|r, c| psi[r] * psi[c].conj());
    let id = Op2::identity();
    let sigma_z = Op2::new(ONE, ZERO, ZERO, -ONE);
    let want = target.projector();
    let branches = [projector(target.ket(false)), projector(target.ket(true))];

    // Bob's conditional states, one per outcome.
    let bob: Vec<(f64, Op2)> = branches
        .iter()
        .enumerate()
        .map(|(bit, p)| {
            let m = kron(p, &id);
            let post = m * singlet * m;
            let prob = post.trace().re;
            let reduced = Op2::from_fn(|r, c| post[(r, c)] + post[(r + 2, c + 2)]) / C64::from(prob);
            let corrected = if bit == 0 { sigma_z * reduced * sigma_z } else { reduced };
            (prob, corrected)
        })
        .collect();

    let results: Vec<(u8, f64, f64)> = (0..shots)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ i);
            let bit = if rng.random::<f64>() < bob[0].0 { 0 } else { 1 };
            let out = &bob[bit as usize].1;
            let fidelity = (want * out).trace().re;
            let err = (out - want).iter().map(|z| z.norm()).fold(0.0, f64::max);
            (bit, fidelity, err)
        })
        .collect();

    let bit0 = results.iter().filter(|r| r.0 == 0).count() as u64;
    let mean_fidelity = results.iter().map(|r| r.1).sum::<f64>() / shots as f64;
    Ok(SingletRspOutcome {
        shots,
        bit0,
        mean_fidelity,
        min_fidelity: results.iter().map(|r| r.1).fold(f64::INFINITY, f64::min),
        max_state_error: results.iter().map(|r| r.2).fold(0.0, f64::max),
    })
}
