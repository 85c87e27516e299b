//! Local, nonlocal and composed two-qubit unitaries acting on Bloch states.
//!
//! A general two-qubit unitary is handled as local ⊗ local, then the
//! three-angle nonlocal core Û(φ₁, φ₂, φ₃), then local ⊗ local again. Local
//! unitaries act through their SO(3) rotations. The nonlocal core acts through
//! closed-form rules on (a, b, T); [`nonlocal_matrix_oracle`] provides the 4×4
//! matrix for cross-checking those rules.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use nalgebra::Matrix3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bloch::{self, BlochState, DensityMatrix};
use crate::error::{Error, Result};
use crate::linalg::{self, kron, pauli, Op2, Op4, C64};

pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// Rotations (Q_A, Q_B) induced by a local unitary U_A ⊗ U_B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalRotationPair {
    qa: Matrix3<f64>,
    qb: Matrix3<f64>,
}

impl LocalRotationPair {
    /// Both matrices must be proper rotations within [`ORTHOGONALITY_TOL`].
    pub fn new(qa: Matrix3<f64>, qb: Matrix3<f64>) -> Result<Self> {
        check_rotation(&qa)?;
        check_rotation(&qb)?;
        Ok(Self { qa, qb })
    }

    pub fn identity() -> Self {
        Self {
            qa: Matrix3::identity(),
            qb: Matrix3::identity(),
        }
    }

    pub fn qa(&self) -> &Matrix3<f64> {
        &self.qa
    }

    pub fn qb(&self) -> &Matrix3<f64> {
        &self.qb
    }

    /// Uniformly random pair of rotations (Haar on SO(3)).
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self {
            qa: random_rotation(rng),
            qb: random_rotation(rng),
        }
    }
}

fn check_rotation(q: &Matrix3<f64>) -> Result<()> {
    let deviation = linalg::orthogonality_deviation(q);
    if !(deviation <= ORTHOGONALITY_TOL) {
        return Err(Error::NonOrthogonalRotation { deviation });
    }
    let determinant = q.determinant();
    if determinant < 0.0 {
        return Err(Error::ImproperRotation { determinant });
    }
    Ok(())
}

/// Haar-random SO(3) element from a uniformly random unit quaternion.
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> Matrix3<f64> {
    let q: [f64; 4] = std::array::from_fn(|_| rng.sample(rand_distr::StandardNormal));
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let [w, x, y, z] = q.map(|v| v / n);
    Matrix3::new(
        1.0 - 2.0 * (y * y + z * z),
        2.0 * (x * y - w * z),
        2.0 * (x * z + w * y),
        2.0 * (x * y + w * z),
        1.0 - 2.0 * (x * x + z * z),
        2.0 * (y * z - w * x),
        2.0 * (x * z - w * y),
        2.0 * (y * z + w * x),
        1.0 - 2.0 * (x * x + y * y),
    )
}

/// SO(3) image of a single-qubit unitary: Qᵢⱼ = ½ Tr(σᵢ U σⱼ U†).
pub fn su2_to_so3(u: &Op2) -> Matrix3<f64> {
    Matrix3::from_fn(|i, j| 0.5 * (pauli(i) * u * pauli(j) * u.adjoint()).trace().re)
}

/// A single angle, kept both as radians in [0, 2π) and, when it came from a
/// table or a `p/q pi` literal, as an exact multiple of π.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle {
    radians: f64,
    pi_fraction: Option<(i64, i64)>,
}

impl Angle {
    pub fn radians(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::NonFiniteAngle(value));
        }
        Ok(Self {
            radians: value.rem_euclid(TAU),
            pi_fraction: None,
        })
    }

    /// `num/den · π`, reduced modulo 2π.
    pub fn pi_fraction(num: i64, den: i64) -> Self {
        assert!(den > 0, "denominator must be positive");
        let num = num.rem_euclid(2 * den);
        let g = gcd(num, den).max(1);
        let (num, den) = (num / g, den / g);
        Self {
            radians: (num as f64 * PI / den as f64).rem_euclid(TAU),
            pi_fraction: Some((num, den)),
        }
    }

    pub fn value(&self) -> f64 {
        self.radians
    }

    pub fn as_pi_fraction(&self) -> Option<(i64, i64)> {
        self.pi_fraction
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_fraction {
            Some((0, _)) => write!(f, "0"),
            Some((n, 1)) if n == 1 => write!(f, "pi"),
            Some((n, 1)) => write!(f, "{n}pi"),
            Some((n, d)) => write!(f, "{n}/{d}pi"),
            None => write!(f, "{}", self.radians),
        }
    }
}

impl FromStr for Angle {
    type Err = Error;

    /// Accepts decimal radians (`1.5708`, `2e-1`) or multiples of π
    /// (`pi`, `3pi`, `1/2pi`, `-3/4pi`, `0.25pi`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidArgument(format!("cannot parse angle `{s}`"));
        let Some(coef) = s.strip_suffix("pi").or_else(|| s.strip_suffix('π')) else {
            return Angle::radians(s.parse::<f64>().map_err(|_| bad())?);
        };
        let coef = coef.trim().trim_end_matches('*');
        match coef {
            "" | "+" => return Ok(Angle::pi_fraction(1, 1)),
            "-" => return Ok(Angle::pi_fraction(-1, 1)),
            _ => {}
        }
        if let Some((n, d)) = coef.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d <= 0 {
                return Err(bad());
            }
            return Ok(Angle::pi_fraction(n, d));
        }
        if let Ok(n) = coef.parse::<i64>() {
            return Ok(Angle::pi_fraction(n, 1));
        }
        Angle::radians(coef.parse::<f64>().map_err(|_| bad())? * PI)
    }
}

/// Angles (φ₁, φ₂, φ₃) of the nonlocal core Û.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlocalAngles(pub [Angle; 3]);

impl NonlocalAngles {
    pub fn new(phi1: f64, phi2: f64, phi3: f64) -> Result<Self> {
        Ok(Self([Angle::radians(phi1)?, Angle::radians(phi2)?, Angle::radians(phi3)?]))
    }

    pub fn zero() -> Self {
        Self::quarter_pi([0, 0, 0])
    }

    /// Angles given as integer multiples of π/4.
    pub fn quarter_pi(k: [i64; 3]) -> Self {
        Self(k.map(|k| Angle::pi_fraction(k, 4)))
    }

    pub fn radians(&self) -> [f64; 3] {
        self.0.map(|a| a.value())
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self(std::array::from_fn(|_| Angle {
            radians: rng.random_range(0.0..TAU),
            pi_fraction: None,
        }))
    }

    /// Max distance between the angle triples on the circle.
    pub fn distance(&self, other: &NonlocalAngles) -> f64 {
        self.radians()
            .iter()
            .zip(other.radians())
            .map(|(x, y)| {
                let d = (x - y).rem_euclid(TAU);
                d.min(TAU - d)
            })
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for NonlocalAngles {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

impl FromStr for NonlocalAngles {
    type Err = Error;

    /// Three comma-separated angles, e.g. `1/2pi,0,1/2pi`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidArgument(format!(
                "expected three comma-separated angles, got `{s}`"
            )));
        }
        Ok(Self([parts[0].parse()?, parts[1].parse()?, parts[2].parse()?]))
    }
}

/// pre-rotations, nonlocal core, post-rotations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalUnitarySpec {
    pub pre: LocalRotationPair,
    pub core: NonlocalAngles,
    pub post: LocalRotationPair,
}

impl GlobalUnitarySpec {
    pub fn identity() -> Self {
        Self {
            pre: LocalRotationPair::identity(),
            core: NonlocalAngles::zero(),
            post: LocalRotationPair::identity(),
        }
    }
}

/// a' = Q_A a, b' = Q_B b, T' = Q_A T Q_Bᵀ.
pub fn apply_local(s: &BlochState, r: &LocalRotationPair) -> BlochState {
    BlochState::new(r.qa * s.a, r.qb * s.b, r.qa * s.t * r.qb.transpose())
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Closed-form action of Û(φ₁, φ₂, φ₃) on (a, b, T).
///
/// For each k with (i, j) the remaining pair:
///   a'ₖ = aₖ cᵢcⱼ + bₖ sᵢsⱼ + εᵢⱼₖ (tᵢⱼ cᵢsⱼ − tⱼᵢ sᵢcⱼ)
///   b'ₖ = bₖ cᵢcⱼ + aₖ sᵢsⱼ + εᵢⱼₖ (tⱼᵢ cᵢsⱼ − tᵢⱼ sᵢcⱼ)
/// and for i ≠ j
///   t'ᵢⱼ = tᵢⱼ cᵢcⱼ + tⱼᵢ sᵢsⱼ − εᵢⱼₖ (aₖ cᵢsⱼ − bₖ sᵢcⱼ),
/// while the diagonal correlations tₖₖ are untouched.
pub fn apply_nonlocal(s: &BlochState, n: &NonlocalAngles) -> BlochState {
    let phi = n.radians();
    let c = phi.map(f64::cos);
    let sn = phi.map(f64::sin);
    let mut out = *s;
    for k in 0..3 {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        let e = levi_civita(i, j, k);
        out.a[k] = s.a[k] * c[i] * c[j]
            + s.b[k] * sn[i] * sn[j]
            + e * (s.t[(i, j)] * c[i] * sn[j] - s.t[(j, i)] * sn[i] * c[j]);
        out.b[k] = s.b[k] * c[i] * c[j]
            + s.a[k] * sn[i] * sn[j]
            + e * (s.t[(j, i)] * c[i] * sn[j] - s.t[(i, j)] * sn[i] * c[j]);
    }
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            let k = 3 - i - j;
            let e = levi_civita(i, j, k);
            out.t[(i, j)] = s.t[(i, j)] * c[i] * c[j] + s.t[(j, i)] * sn[i] * sn[j]
                - e * (s.a[k] * c[i] * sn[j] - s.b[k] * sn[i] * c[j]);
        }
    }
    out
}

/// post ∘ nonlocal ∘ pre.
pub fn apply_global(s: &BlochState, g: &GlobalUnitarySpec) -> BlochState {
    apply_local(&apply_nonlocal(&apply_local(s, &g.pre), &g.core), &g.post)
}

/// Sign convention relating Û to exp[(i/2) Σ ±φₖ σₖ⊗σₖ].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorConvention {
    pub signs: [i8; 3],
}

impl fmt::Display for GeneratorConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |k: usize| {
            let s = if self.signs[k] > 0 { "+" } else { "-" };
            format!("{s}phi{} s{}s{}", k + 1, k + 1, k + 1)
        };
        write!(f, "U = exp[(i/2)({} {} {})]", term(0), term(1), term(2))
    }
}

fn generator_exponential(phi: [f64; 3], signs: [i8; 3]) -> Op4 {
    // The σₖ⊗σₖ commute and square to I, so the exponential factorizes into
    // cos(θ) I + i sin(θ) σₖ⊗σₖ per axis.
    let mut u = Op4::identity();
    for k in 0..3 {
        let theta = 0.5 * f64::from(signs[k]) * phi[k];
        let p = kron(&pauli(k), &pauli(k));
        u *= Op4::identity() * C64::from(theta.cos()) + p * C64::new(0.0, theta.sin());
    }
    u
}

/// Tries the eight per-axis sign assignments against [`apply_nonlocal`] on a
/// fixed set of random states and returns the first that agrees within 1e-9.
pub fn calibrate_convention() -> Result<GeneratorConvention> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_ca1b);
    let trials: Vec<(BlochState, NonlocalAngles)> = (0..6)
        .map(|_| {
            let dm = crate::sampling::ginibre_state(&mut rng);
            (bloch::to_bloch(&dm), NonlocalAngles::random(&mut rng))
        })
        .collect();
    for mask in 0..8u8 {
        let signs = std::array::from_fn(|k| if mask >> k & 1 == 0 { 1 } else { -1 });
        let agrees = trials.iter().all(|(s, n)| {
            let u = generator_exponential(n.radians(), signs);
            let rotated = u * s.to_matrix() * u.adjoint();
            let via_matrix = bloch::to_bloch(&DensityMatrix::new_unchecked(rotated));
            via_matrix.max_abs_diff(&apply_nonlocal(s, n)) <= 1e-9
        });
        if agrees {
            return Ok(GeneratorConvention { signs });
        }
    }
    Err(Error::CalibrationFailure)
}

/// The calibrated convention, computed on first use.
pub fn generator_convention() -> Result<GeneratorConvention> {
    static CONVENTION: OnceLock<Option<GeneratorConvention>> = OnceLock::new();
    CONVENTION
        .get_or_init(|| calibrate_convention().ok())
        .ok_or(Error::CalibrationFailure)
}

/// 4×4 unitary whose conjugation reproduces [`apply_nonlocal`].
pub fn nonlocal_matrix_oracle(n: &NonlocalAngles) -> Result<Op4> {
    let convention = generator_convention()?;
    Ok(generator_exponential(n.radians(), convention.signs))
}
