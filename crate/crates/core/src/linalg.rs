//! Small dense helpers shared by the state, unitary and discord modules.
//!
//! Everything here works on fixed-size nalgebra matrices: qubits are 2×2,
//! two-qubit operators are 4×4 in the basis |00⟩, |01⟩, |10⟩, |11⟩.

use nalgebra::{Complex, Matrix2, Matrix3, Matrix4, SymmetricEigen, Vector3};

pub type C64 = Complex<f64>;
pub type Op2 = Matrix2<C64>;
pub type Op4 = Matrix4<C64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I_: C64 = C64::new(0.0, 1.0);

pub fn identity2() -> Op2 {
    Op2::identity()
}

/// σ₁ = X, σ₂ = Y, σ₃ = Z in the computational basis.
pub fn pauli(k: usize) -> Op2 {
    match k {
        0 => Op2::new(ZERO, ONE, ONE, ZERO),
        1 => Op2::new(ZERO, -I_, I_, ZERO),
        2 => Op2::new(ONE, ZERO, ZERO, -ONE),
        _ => panic!("pauli index {k} out of range"),
    }
}

pub fn kron(a: &Op2, b: &Op2) -> Op4 {
    Op4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

/// `v·σ` for a real 3-vector.
pub fn bloch_operator(v: &Vector3<f64>) -> Op2 {
    (0..3).fold(Op2::zeros(), |acc, k| acc + pauli(k) * C64::from(v[k]))
}

/// Tr(A B) without forming the product.
pub fn trace_product(a: &Op4, b: &Op4) -> C64 {
    let mut acc = ZERO;
    for i in 0..4 {
        for j in 0..4 {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// Max-norm of `m - m†`.
pub fn hermiticity_deviation(m: &Op4) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn max_abs_diff4(a: &Op4, b: &Op4) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Ascending eigenvalues of a Hermitian 4×4 matrix. Only the Hermitian part
/// is used, so tiny round-off asymmetry is harmless.
pub fn eigenvalues4(m: &Op4) -> [f64; 4] {
    let herm = (m + m.adjoint()) * C64::from(0.5);
    let eig = SymmetricEigen::new(herm);
    let mut out = [0.0; 4];
    for (slot, v) in out.iter_mut().zip(eig.eigenvalues.iter()) {
        *slot = *v;
    }
    out.sort_by(f64::total_cmp);
    out
}

pub fn eigenvalues2(m: &Op2) -> [f64; 2] {
    let herm = (m + m.adjoint()) * C64::from(0.5);
    let eig = SymmetricEigen::new(herm);
    let mut out = [eig.eigenvalues[0], eig.eigenvalues[1]];
    out.sort_by(f64::total_cmp);
    out
}

/// Descending eigenvalues of a real symmetric 3×3 matrix.
pub fn sym_eigenvalues3_desc(m: &Matrix3<f64>) -> [f64; 3] {
    let eig = SymmetricEigen::new(*m);
    let mut out = [eig.eigenvalues[0], eig.eigenvalues[1], eig.eigenvalues[2]];
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

/// Shannon entropy in bits of a probability spectrum. Entries below
/// `1e-14` are treated as exact zeros; the rest are clamped to `[0, 1]`.
pub fn spectrum_entropy(spectrum: &[f64]) -> f64 {
    spectrum
        .iter()
        .map(|&p| p.clamp(0.0, 1.0))
        .filter(|&p| p > 1e-14)
        .map(|p| -p * p.log2())
        .sum()
}

/// Entropy of a qubit with Bloch vector length `r`.
pub fn qubit_entropy(r: f64) -> f64 {
    let r = r.clamp(0.0, 1.0);
    spectrum_entropy(&[(1.0 + r) / 2.0, (1.0 - r) / 2.0])
}

pub fn orthogonality_deviation(q: &Matrix3<f64>) -> f64 {
    (q.transpose() * q - Matrix3::identity()).abs().max()
}
