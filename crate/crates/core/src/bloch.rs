//! Density matrices and their Bloch (a, b, T) representation.
//!
//! ρ = ¼ (I⊗I + a·σ⊗I + I⊗b·σ + Σᵢⱼ tᵢⱼ σᵢ⊗σⱼ), with the basis ordered
//! |00⟩, |01⟩, |10⟩, |11⟩ and σ₁, σ₂, σ₃ = X, Y, Z. Qubit A is the left
//! tensor factor.

use std::sync::OnceLock;

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::linalg::{self, kron, pauli, Op2, Op4, C64};

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = -1e-10;
/// Bloch vectors may exceed unit length by this much before rejection.
pub const BLOCH_NORM_SLACK: f64 = 1e-10;

/// σⱼ⊗I, I⊗σⱼ and σᵢ⊗σⱼ, built once.
struct PauliBasis {
    left: [Op4; 3],
    right: [Op4; 3],
    pair: [[Op4; 3]; 3],
}

fn basis() -> &'static PauliBasis {
    static BASIS: OnceLock<PauliBasis> = OnceLock::new();
    BASIS.get_or_init(|| {
        let id = linalg::identity2();
        PauliBasis {
            left: std::array::from_fn(|k| kron(&pauli(k), &id)),
            right: std::array::from_fn(|k| kron(&id, &pauli(k))),
            pair: std::array::from_fn(|i| std::array::from_fn(|j| kron(&pauli(i), &pauli(j)))),
        }
    })
}

/// A validated two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(Op4);

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(entries: Op4) -> Result<Self> {
        let diag = validate(&entries);
        if diag.is_valid() {
            Ok(Self(entries))
        } else {
            Err(Error::InvalidDensityMatrix {
                hermiticity: diag.hermiticity_deviation,
                trace: diag.trace_deviation,
                min_eigenvalue: diag.min_eigenvalue,
            })
        }
    }

    /// Real-valued convenience constructor, rows in basis order.
    pub fn from_real_rows(rows: [[f64; 4]; 4]) -> Result<Self> {
        Self::new(Op4::from_fn(|r, c| C64::from(rows[r][c])))
    }

    pub fn maximally_mixed() -> Self {
        Self(Op4::identity() * C64::from(0.25))
    }

    /// Wraps a matrix that is valid by construction (unitary images of valid
    /// states and the like).
    pub(crate) fn new_unchecked(entries: Op4) -> Self {
        Self(entries)
    }

    pub fn matrix(&self) -> &Op4 {
        &self.0
    }

    pub fn into_matrix(self) -> Op4 {
        self.0
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        linalg::eigenvalues4(&self.0)
    }

    /// Reduced state of qubit A (trace over B).
    pub fn partial_trace_b(&self) -> Op2 {
        let m = &self.0;
        Op2::from_fn(|r, c| m[(2 * r, 2 * c)] + m[(2 * r + 1, 2 * c + 1)])
    }

    /// Reduced state of qubit B (trace over A).
    pub fn partial_trace_a(&self) -> Op2 {
        let m = &self.0;
        Op2::from_fn(|r, c| m[(r, c)] + m[(r + 2, c + 2)])
    }

    pub fn purity(&self) -> f64 {
        linalg::trace_product(&self.0, &self.0).re
    }
}

/// Local Bloch vectors and correlation tensor of a two-qubit state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochState {
    pub a: Vector3<f64>,
    pub b: Vector3<f64>,
    pub t: Matrix3<f64>,
}

impl BlochState {
    pub fn new(a: Vector3<f64>, b: Vector3<f64>, t: Matrix3<f64>) -> Self {
        Self { a, b, t }
    }

    pub fn maximally_mixed() -> Self {
        Self::new(Vector3::zeros(), Vector3::zeros(), Matrix3::zeros())
    }

    /// ¼ (I + rᵃ·σ) ⊗ (I + rᵇ·σ).
    pub fn product(ra: Vector3<f64>, rb: Vector3<f64>) -> Self {
        Self::new(ra, rb, ra * rb.transpose())
    }

    /// Exchanges the roles of the two qubits.
    pub fn swapped(&self) -> Self {
        Self::new(self.b, self.a, self.t.transpose())
    }

    /// Euclidean norm of the stacked (a, b, T) parameters; zero only for I/4.
    pub fn parameter_norm(&self) -> f64 {
        (self.a.norm_squared() + self.b.norm_squared() + self.t.norm_squared()).sqrt()
    }

    /// Tr ρ² = (1 + |a|² + |b|² + Σ tᵢⱼ²) / 4.
    pub fn purity(&self) -> f64 {
        (1.0 + self.a.norm_squared() + self.b.norm_squared() + self.t.norm_squared()) / 4.0
    }

    /// Reassembles the 4×4 matrix without any positivity check.
    pub fn to_matrix(&self) -> Op4 {
        let basis = basis();
        let mut m = Op4::identity();
        for k in 0..3 {
            m += basis.left[k] * C64::from(self.a[k]);
            m += basis.right[k] * C64::from(self.b[k]);
            for j in 0..3 {
                m += basis.pair[k][j] * C64::from(self.t[(k, j)]);
            }
        }
        m * C64::from(0.25)
    }

    pub fn max_abs_diff(&self, other: &BlochState) -> f64 {
        (self.a - other.a)
            .abs()
            .max()
            .max((self.b - other.b).abs().max())
            .max((self.t - other.t).abs().max())
    }
}

/// Pass/fail report for the density-matrix invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub trace_deviation: f64,
    pub hermiticity_deviation: f64,
    pub min_eigenvalue: f64,
    pub trace_ok: bool,
    pub hermitian_ok: bool,
    pub positive_ok: bool,
}

impl Diagnostics {
    pub fn is_valid(&self) -> bool {
        self.trace_ok && self.hermitian_ok && self.positive_ok
    }
}

pub fn validate(m: &Op4) -> Diagnostics {
    let trace_deviation = (m.trace() - C64::from(1.0)).norm();
    let hermiticity_deviation = linalg::hermiticity_deviation(m);
    let min_eigenvalue = if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        linalg::eigenvalues4(m)[0]
    } else {
        f64::NAN
    };
    Diagnostics {
        trace_deviation,
        hermiticity_deviation,
        min_eigenvalue,
        trace_ok: trace_deviation <= TRACE_TOL,
        hermitian_ok: hermiticity_deviation <= HERMITICITY_TOL,
        positive_ok: min_eigenvalue >= PSD_TOL,
    }
}

/// aₖ = Tr[ρ σₖ⊗I], bₖ = Tr[ρ I⊗σₖ], tᵢⱼ = Tr[ρ σᵢ⊗σⱼ].
pub fn to_bloch(dm: &DensityMatrix) -> BlochState {
    let basis = basis();
    let rho = dm.matrix();
    let a = Vector3::from_fn(|k, _| linalg::trace_product(rho, &basis.left[k]).re);
    let b = Vector3::from_fn(|k, _| linalg::trace_product(rho, &basis.right[k]).re);
    let t = Matrix3::from_fn(|i, j| linalg::trace_product(rho, &basis.pair[i][j]).re);
    BlochState::new(a, b, t)
}

/// Rebuilds the density matrix, failing with [`Error::NotAState`] when the
/// triple is unphysical.
pub fn from_bloch(s: &BlochState) -> Result<DensityMatrix> {
    let m = s.to_matrix();
    let min_eigenvalue = linalg::eigenvalues4(&m)[0];
    if !(min_eigenvalue >= PSD_TOL) {
        return Err(Error::NotAState { min_eigenvalue });
    }
    Ok(DensityMatrix(m))
}

/// Local Bloch vectors (a, b); the marginals are (I + v·σ)/2.
pub fn reduced_states(dm: &DensityMatrix) -> (Vector3<f64>, Vector3<f64>) {
    let s = to_bloch(dm);
    (s.a, s.b)
}

/// Checks the Bloch-level invariants: local vectors inside the unit ball
/// (with slack) and a positive reconstruction.
pub fn check_bloch(s: &BlochState) -> Result<()> {
    let worst = s.a.norm().max(s.b.norm());
    if worst > 1.0 + BLOCH_NORM_SLACK {
        return Err(Error::NotAState {
            min_eigenvalue: 1.0 - worst,
        });
    }
    from_bloch(s).map(|_| ())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent route: explicit 4×4 products and traces.
    fn trace_oracle(rho: &Op4, op: &Op4) -> f64 {
        (rho * op).trace().re
    }

    fn singlet() -> DensityMatrix {
        let h = 0.5;
        DensityMatrix::from_real_rows([
            [0.0, 0.0, 0.0, 0.0],
            [0.0, h, -h, 0.0],
            [0.0, -h, h, 0.0],
            [0.0, 0.0, 0.0, 0.0],
        ])
        .unwrap()
    }

    #[test]
    fn maximally_mixed_has_zero_bloch() {
        let s = to_bloch(&DensityMatrix::maximally_mixed());
        assert_eq!(s.parameter_norm(), 0.0);
        let back = from_bloch(&BlochState::maximally_mixed()).unwrap();
        assert!(linalg::max_abs_diff4(back.matrix(), DensityMatrix::maximally_mixed().matrix()) < 1e-15);
    }

    #[test]
    fn singlet_bloch() {
        let s = to_bloch(&singlet());
        assert!(s.a.norm() < 1e-15 && s.b.norm() < 1e-15);
        assert!((s.t + Matrix3::identity()).abs().max() < 1e-15);
        let x = kron(&pauli(0), &pauli(0));
        assert!((trace_oracle(singlet().matrix(), &x) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn pure_product_along_z() {
        let s = BlochState::new(
            Vector3::new(0.0, 0.0, 1.0),
            Vector3::new(0.0, 0.0, 1.0),
            Matrix3::from_diagonal(&Vector3::new(0.0, 0.0, 1.0)),
        );
        let dm = from_bloch(&s).unwrap();
        let mut expected = Op4::zeros();
        expected[(0, 0)] = C64::from(1.0);
        assert!(linalg::max_abs_diff4(dm.matrix(), &expected) < 1e-15);
    }

    #[test]
    fn identity_correlations_are_unphysical() {
        let s = BlochState::new(Vector3::zeros(), Vector3::zeros(), Matrix3::identity());
        // Eigenvalues of ¼(I + XX + YY + ZZ) are {1/2, 1/2, 1/2, -1/2}.
        match from_bloch(&s) {
            Err(Error::NotAState { min_eigenvalue }) => assert!((min_eigenvalue + 0.5).abs() < 1e-12),
            other => panic!("expected NotAState, got {other:?}"),
        }
    }

    #[test]
    fn trace_failure_is_flagged() {
        let m = Op4::identity() * C64::from(0.275);
        let d = validate(&m);
        assert!(!d.trace_ok);
        assert!(d.hermitian_ok && d.positive_ok);
        assert!((d.trace_deviation - 0.1).abs() < 1e-12);
        assert!(DensityMatrix::new(m).is_err());
    }

    #[test]
    fn non_hermitian_is_flagged() {
        let mut m = Op4::identity() * C64::from(0.25);
        m[(0, 1)] = C64::new(0.0, 0.1);
        let d = validate(&m);
        assert!(!d.hermitian_ok);
    }

    #[test]
    fn partial_traces_match_bloch_marginals() {
        let s = BlochState::product(Vector3::new(0.1, -0.2, 0.3), Vector3::new(0.5, 0.0, -0.4));
        let dm = from_bloch(&s).unwrap();
        let rho_a = dm.partial_trace_b();
        let rho_b = dm.partial_trace_a();
        for k in 0..3 {
            assert!(((rho_a * pauli(k)).trace().re - s.a[k]).abs() < 1e-15);
            assert!(((rho_b * pauli(k)).trace().re - s.b[k]).abs() < 1e-15);
        }
    }
}
