//! Entropies, one-way discord in both directions and the T-only geometric
//! discord.
//!
//! Conditional entropies are evaluated in closed form on the Bloch triple.
//! Measuring A along ±u leaves B in
//!
//! ```text
//! r± = (b ± Tᵀu) / (1 ± a·u)   with probability   p± = (1 ± a·u) / 2
//! ```
//!
//! so S(B|{Π}) = Σ p± h(|r±|). The minimum over u is found by scanning a
//! Fibonacci lattice on the upper hemisphere (u and -u give the same
//! measurement) and polishing the best few points with Nelder–Mead in
//! spherical angles.

use std::fmt;

use nalgebra::{DMatrix, Vector3};

use crate::bloch::{to_bloch, BlochState, DensityMatrix, PSD_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, C64};

/// Discord magnitudes at or below this are reported as exactly zero.
pub const ZERO_CLAMP: f64 = 1e-6;
pub const DEFAULT_LATTICE: usize = 2048;
pub const MIN_LATTICE: usize = 256;

/// The measured party. `A` gives D(B/A), `B` gives D(A/B).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Party {
    A,
    B,
}

impl Party {
    pub fn other(self) -> Party {
        match self {
            Party::A => Party::B,
            Party::B => Party::A,
        }
    }

    /// "B/A" when A is measured.
    pub fn discord_label(self) -> &'static str {
        match self {
            Party::A => "B/A",
            Party::B => "A/B",
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Party::A => "A",
            Party::B => "B",
        })
    }
}

/// Unit vector fixing the projective measurement Π± = (I ± u·σ)/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementDirection(Vector3<f64>);

impl MeasurementDirection {
    pub fn new(v: Vector3<f64>) -> Result<Self> {
        let n = v.norm();
        if !n.is_finite() || n < 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "measurement direction must be a nonzero finite vector, got {v:?}"
            )));
        }
        Ok(Self(v / n))
    }

    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Self(spherical(theta, phi))
    }

    pub fn z() -> Self {
        Self(Vector3::z())
    }

    pub fn vector(&self) -> &Vector3<f64> {
        &self.0
    }
}

fn spherical(theta: f64, phi: f64) -> Vector3<f64> {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    Vector3::new(st * cp, st * sp, ct)
}

/// S(ρ) = -Tr ρ log₂ ρ for a Hermitian PSD matrix of any size.
pub fn von_neumann_entropy(m: &DMatrix<C64>) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::InvalidArgument(format!(
            "entropy needs a square matrix, got {}×{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let herm = (m + m.adjoint()) * C64::from(0.5);
    let eig = herm.symmetric_eigenvalues();
    let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
    if min < PSD_TOL {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    Ok(linalg::spectrum_entropy(eig.as_slice()))
}

/// S(AB) from the 4×4 spectrum.
pub fn joint_entropy(dm: &DensityMatrix) -> f64 {
    linalg::spectrum_entropy(&dm.eigenvalues())
}

/// I(A:B) = S(A) + S(B) - S(AB).
pub fn mutual_information(dm: &DensityMatrix) -> f64 {
    let s = to_bloch(dm);
    linalg::qubit_entropy(s.a.norm()) + linalg::qubit_entropy(s.b.norm()) - joint_entropy(dm)
}

/// Orients the triple so the measured party sits in the `a` slot.
fn oriented(s: &BlochState, measured: Party) -> BlochState {
    match measured {
        Party::A => *s,
        Party::B => s.swapped(),
    }
}

/// Σ p± S(ρ_unmeasured | ±u) with the measured party in the `a` slot.
fn conditional_entropy_oriented(s: &BlochState, u: &Vector3<f64>) -> f64 {
    let au = s.a.dot(u);
    let tu = s.t.tr_mul(u);
    let mut total = 0.0;
    for sign in [1.0, -1.0] {
        let p = 0.5 * (1.0 + sign * au);
        if p < 1e-15 {
            continue;
        }
        let r = (s.b + tu * sign) / (2.0 * p);
        total += p * linalg::qubit_entropy(r.norm());
    }
    total
}

/// S(other | {Π_u}) for a projective measurement on `measured`.
pub fn conditional_entropy(dm: &DensityMatrix, u: &MeasurementDirection, measured: Party) -> f64 {
    conditional_entropy_bloch(&to_bloch(dm), u, measured)
}

pub fn conditional_entropy_bloch(s: &BlochState, u: &MeasurementDirection, measured: Party) -> f64 {
    conditional_entropy_oriented(&oriented(s, measured), u.vector())
}

/// Search settings for the measurement optimisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub lattice: usize,
    pub keep: usize,
    pub step_tol: f64,
    pub max_evals_per_start: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            lattice: DEFAULT_LATTICE,
            keep: 5,
            step_tol: 1e-8,
            max_evals_per_start: 4000,
        }
    }
}

impl OptimizerConfig {
    pub fn with_lattice(lattice: usize) -> Result<Self> {
        if lattice < MIN_LATTICE {
            return Err(Error::InvalidArgument(format!(
                "lattice size {lattice} below minimum {MIN_LATTICE}"
            )));
        }
        Ok(Self {
            lattice,
            ..Self::default()
        })
    }
}

/// Result of maximising the classical correlation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalCorrelation {
    pub value: f64,
    pub direction: MeasurementDirection,
    pub min_conditional_entropy: f64,
    pub evals: usize,
    pub converged: bool,
}

/// (θ, ϕ) of the i-th point of an n-point Fibonacci lattice on z > 0.
fn hemisphere_point(i: usize, n: usize) -> (f64, f64) {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let z = (i as f64 + 0.5) / n as f64;
    (z.acos(), (i as f64 * golden).rem_euclid(std::f64::consts::TAU))
}

struct NelderMeadOutcome {
    x: [f64; 2],
    f: f64,
    evals: usize,
    converged: bool,
}

fn nelder_mead<F: Fn([f64; 2]) -> f64>(
    f: F,
    start: [f64; 2],
    step: f64,
    tol: f64,
    max_evals: usize,
) -> NelderMeadOutcome {
    let mut pts = [start, [start[0] + step, start[1]], [start[0], start[1] + step]];
    let mut vals = pts.map(&f);
    let mut evals = 3;
    let lerp = |p: [f64; 2], q: [f64; 2], t: f64| [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])];
    loop {
        let mut idx = [0, 1, 2];
        idx.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
        pts = idx.map(|i| pts[i]);
        vals = idx.map(|i| vals[i]);

        let size = (1..3)
            .map(|k| (pts[k][0] - pts[0][0]).hypot(pts[k][1] - pts[0][1]))
            .fold(0.0, f64::max);
        if size < tol {
            return NelderMeadOutcome { x: pts[0], f: vals[0], evals, converged: true };
        }
        if evals >= max_evals {
            return NelderMeadOutcome { x: pts[0], f: vals[0], evals, converged: false };
        }

        let centroid = lerp(pts[0], pts[1], 0.5);
        let reflected = lerp(centroid, pts[2], -1.0);
        let fr = f(reflected);
        evals += 1;
        if fr < vals[0] {
            let expanded = lerp(centroid, pts[2], -2.0);
            let fe = f(expanded);
            evals += 1;
            if fe < fr {
                pts[2] = expanded;
                vals[2] = fe;
            } else {
                pts[2] = reflected;
                vals[2] = fr;
            }
        } else if fr < vals[1] {
            pts[2] = reflected;
            vals[2] = fr;
        } else {
            let (contracted, fc) = if fr < vals[2] {
                let c = lerp(centroid, reflected, 0.5);
                (c, f(c))
            } else {
                let c = lerp(centroid, pts[2], 0.5);
                (c, f(c))
            };
            evals += 1;
            if fc < vals[2].min(fr) {
                pts[2] = contracted;
                vals[2] = fc;
            } else {
                for k in 1..3 {
                    pts[k] = lerp(pts[0], pts[k], 0.5);
                    vals[k] = f(pts[k]);
                }
                evals += 2;
            }
        }
    }
}

/// J = S(other) - min_u S(other | {Π_u}), measuring `measured`.
pub fn classical_correlation(dm: &DensityMatrix, measured: Party) -> ClassicalCorrelation {
    classical_correlation_bloch(&to_bloch(dm), measured, &OptimizerConfig::default())
}

pub fn classical_correlation_bloch(
    s: &BlochState,
    measured: Party,
    cfg: &OptimizerConfig,
) -> ClassicalCorrelation {
    let s = oriented(s, measured);
    let objective = |x: [f64; 2]| conditional_entropy_oriented(&s, &spherical(x[0], x[1]));

    let n = cfg.lattice.max(1);
    let mut scan: Vec<(f64, [f64; 2])> = (0..n)
        .map(|i| {
            let (theta, phi) = hemisphere_point(i, n);
            (objective([theta, phi]), [theta, phi])
        })
        .collect();
    scan.sort_by(|x, y| x.0.total_cmp(&y.0));

    let step = (2.0 * std::f64::consts::PI / n as f64).sqrt();
    let mut best = (scan[0].0, scan[0].1);
    let mut evals = n;
    let mut converged = true;
    for &(_, start) in scan.iter().take(cfg.keep.max(1)) {
        let out = nelder_mead(objective, start, step, cfg.step_tol, cfg.max_evals_per_start);
        evals += out.evals;
        converged &= out.converged;
        if out.f < best.0 {
            best = (out.f, out.x);
        }
    }

    let other_entropy = linalg::qubit_entropy(s.b.norm());
    ClassicalCorrelation {
        value: other_entropy - best.0,
        direction: MeasurementDirection::from_angles(best.1[0], best.1[1]),
        min_conditional_entropy: best.0,
        evals,
        converged,
    }
}

fn clamp_zero(d: f64) -> f64 {
    if d.abs() <= ZERO_CLAMP {
        0.0
    } else {
        d
    }
}

/// D = I - J for the given measured party, clamped to 0 within [`ZERO_CLAMP`].
pub fn discord(dm: &DensityMatrix, measured: Party) -> f64 {
    let s = to_bloch(dm);
    discord_parts(dm, &s, measured, &OptimizerConfig::default()).0
}

/// Same as [`discord`] starting from a Bloch triple. Fails on unphysical triples.
pub fn discord_bloch(s: &BlochState, measured: Party, cfg: &OptimizerConfig) -> Result<f64> {
    let dm = crate::bloch::from_bloch(s)?;
    Ok(discord_parts(&dm, s, measured, cfg).0)
}

fn discord_parts(
    dm: &DensityMatrix,
    s: &BlochState,
    measured: Party,
    cfg: &OptimizerConfig,
) -> (f64, ClassicalCorrelation, f64) {
    let mi = linalg::qubit_entropy(s.a.norm()) + linalg::qubit_entropy(s.b.norm()) - joint_entropy(dm);
    let cc = classical_correlation_bloch(s, measured, cfg);
    (clamp_zero(mi - cc.value), cc, mi)
}

/// F = ½(λ₂ + λ₃) with λ₁ ≥ λ₂ ≥ λ₃ the eigenvalues of TᵀT.
pub fn geometric_fidelity(s: &BlochState) -> f64 {
    let l = linalg::sym_eigenvalues3_desc(&(s.t.transpose() * s.t));
    (0.5 * (l[1] + l[2])).clamp(0.0, 1.0)
}

/// D^(G) = √F. Uses the correlation tensor only.
pub fn geometric_discord(s: &BlochState) -> f64 {
    geometric_fidelity(s).sqrt()
}

/// Both one-way discords plus the geometric quantities for one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordReport {
    pub mutual_info: f64,
    pub j_ba: f64,
    pub j_ab: f64,
    pub d_ba: f64,
    pub d_ab: f64,
    pub u_star_a: MeasurementDirection,
    pub u_star_b: MeasurementDirection,
    pub geo_discord: f64,
    pub fidelity: f64,
    pub optimizer_evals: usize,
    pub converged: bool,
}

pub fn analyze(dm: &DensityMatrix) -> DiscordReport {
    analyze_with(dm, &OptimizerConfig::default())
}

pub fn analyze_with(dm: &DensityMatrix, cfg: &OptimizerConfig) -> DiscordReport {
    let s = to_bloch(dm);
    let (d_ba, cc_a, mi) = discord_parts(dm, &s, Party::A, cfg);
    let (d_ab, cc_b, _) = discord_parts(dm, &s, Party::B, cfg);
    DiscordReport {
        mutual_info: mi,
        // J is restated from the clamped discord so I = J + D holds exactly.
        j_ba: mi - d_ba,
        j_ab: mi - d_ab,
        d_ba,
        d_ab,
        u_star_a: cc_a.direction,
        u_star_b: cc_b.direction,
        geo_discord: geometric_discord(&s),
        fidelity: geometric_fidelity(&s),
        optimizer_evals: cc_a.evals + cc_b.evals,
        converged: cc_a.converged && cc_b.converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::from_bloch;
    use nalgebra::Matrix3;

    fn singlet() -> DensityMatrix {
        from_bloch(&BlochState::new(Vector3::zeros(), Vector3::zeros(), -Matrix3::identity())).unwrap()
    }

    #[test]
    fn entropy_of_simple_matrices() {
        let mixed = DMatrix::from_diagonal_element(4, 4, C64::from(0.25));
        assert!((von_neumann_entropy(&mixed).unwrap() - 2.0).abs() < 1e-12);
        let half = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(
            [0.5, 0.5, 0.0, 0.0].map(C64::from).to_vec(),
        ));
        assert!((von_neumann_entropy(&half).unwrap() - 1.0).abs() < 1e-12);
        let pure = DMatrix::from_fn(2, 2, |r, c| C64::from(if r == 0 && c == 0 { 1.0 } else { 0.0 }));
        assert_eq!(von_neumann_entropy(&pure).unwrap(), 0.0);
        let bad = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![C64::from(1.5), C64::from(-0.5)]));
        assert!(matches!(von_neumann_entropy(&bad), Err(Error::NotPositive { .. })));
    }

    #[test]
    fn singlet_values() {
        let dm = singlet();
        assert!((mutual_information(&dm) - 2.0).abs() < 1e-9);
        for party in [Party::A, Party::B] {
            assert!(conditional_entropy(&dm, &MeasurementDirection::z(), party).abs() < 1e-12);
            assert!((classical_correlation(&dm, party).value - 1.0).abs() < 1e-9);
            assert!((discord(&dm, party) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn product_state_has_nothing() {
        let s = BlochState::product(Vector3::new(0.3, -0.2, 0.5), Vector3::new(0.1, 0.6, -0.3));
        let dm = from_bloch(&s).unwrap();
        assert!(mutual_information(&dm).abs() < 1e-12);
        let u = MeasurementDirection::new(Vector3::new(1.0, 2.0, -0.5)).unwrap();
        let expected = linalg::qubit_entropy(s.b.norm());
        assert!((conditional_entropy(&dm, &u, Party::A) - expected).abs() < 1e-12);
        assert_eq!(discord(&dm, Party::A), 0.0);
        assert_eq!(discord(&dm, Party::B), 0.0);
    }

    #[test]
    fn geometric_discord_edges() {
        assert_eq!(geometric_discord(&BlochState::maximally_mixed()), 0.0);
        let s = BlochState::new(Vector3::zeros(), Vector3::zeros(), -Matrix3::identity());
        assert!((geometric_fidelity(&s) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn nelder_mead_finds_quadratic_minimum() {
        let out = nelder_mead(|x| (x[0] - 0.3).powi(2) + 2.0 * (x[1] + 0.7).powi(2), [0.0, 0.0], 0.1, 1e-10, 10_000);
        assert!(out.converged);
        assert!((out.x[0] - 0.3).abs() < 1e-8 && (out.x[1] + 0.7).abs() < 1e-8);
    }

    #[test]
    fn lattice_covers_hemisphere() {
        let n = 512;
        for i in 0..n {
            let (theta, phi) = hemisphere_point(i, n);
            assert!((0.0..=std::f64::consts::FRAC_PI_2).contains(&theta));
            assert!((0.0..std::f64::consts::TAU).contains(&phi));
        }
    }

    #[test]
    fn small_lattice_rejected() {
        assert!(OptimizerConfig::with_lattice(100).is_err());
        assert!(OptimizerConfig::with_lattice(256).is_ok());
    }
}
