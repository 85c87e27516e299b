//! Independent reference computations for the integration tests.
//!
//! Nothing here goes through the library's Bloch formulas: expectation
//! values are explicit traces against hand-built Pauli products, entropies
//! come from a plain Hermitian eigensolve, and conditional entropies are
//! computed by projecting, partial-tracing and diagonalising.
#![allow(dead_code)]

use nalgebra::{Complex, DMatrix, Matrix2, Matrix3, Matrix4, Vector3};

pub type C = Complex<f64>;
pub type M2 = Matrix2<C>;
pub type M4 = Matrix4<C>;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// σ₀ = I, σ₁, σ₂, σ₃.
pub fn sigma(k: usize) -> M2 {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    match k {
        0 => M2::new(o, z, z, o),
        1 => M2::new(z, o, o, z),
        2 => M2::new(z, -i, i, z),
        3 => M2::new(o, z, z, -o),
        _ => unreachable!(),
    }
}

pub fn kron(x: &M2, y: &M2) -> M4 {
    M4::from_fn(|r, col| x[(r / 2, col / 2)] * y[(r % 2, col % 2)])
}

/// (a, b, T) from aᵢ = Tr ρ(σᵢ⊗I), bⱼ = Tr ρ(I⊗σⱼ), tᵢⱼ = Tr ρ(σᵢ⊗σⱼ).
pub fn bloch_by_trace(rho: &M4) -> (Vector3<f64>, Vector3<f64>, Matrix3<f64>) {
    let ev = |i: usize, j: usize| (rho * kron(&sigma(i), &sigma(j))).trace().re;
    (
        Vector3::from_fn(|i, _| ev(i + 1, 0)),
        Vector3::from_fn(|j, _| ev(0, j + 1)),
        Matrix3::from_fn(|i, j| ev(i + 1, j + 1)),
    )
}

/// ¼ Σ tμν σμ⊗σν with t00 = 1, built term by term.
pub fn rho_from_parts(a: &Vector3<f64>, b: &Vector3<f64>, t: &Matrix3<f64>) -> M4 {
    let mut m = kron(&sigma(0), &sigma(0));
    for i in 0..3 {
        m += kron(&sigma(i + 1), &sigma(0)) * c(a[i], 0.0);
        m += kron(&sigma(0), &sigma(i + 1)) * c(b[i], 0.0);
        for j in 0..3 {
            m += kron(&sigma(i + 1), &sigma(j + 1)) * c(t[(i, j)], 0.0);
        }
    }
    m * c(0.25, 0.0)
}

pub fn entropy_of_spectrum(eigs: impl IntoIterator<Item = f64>) -> f64 {
    eigs.into_iter().filter(|&p| p > 1e-15).map(|p| -p * p.log2()).sum()
}

/// Von Neumann entropy in bits via a dense Hermitian eigensolve.
pub fn entropy(m: &DMatrix<C>) -> f64 {
    let h = (m + m.adjoint()) * c(0.5, 0.0);
    entropy_of_spectrum(h.symmetric_eigenvalues().iter().copied())
}

/// Closed-form spectrum of a 2×2 Hermitian matrix.
fn entropy2(m: &M2) -> f64 {
    let tr = (m[(0, 0)] + m[(1, 1)]).re;
    let d = (m[(0, 0)] - m[(1, 1)]).re;
    let off = m[(0, 1)].norm();
    let gap = (d * d + 4.0 * off * off).sqrt();
    entropy_of_spectrum([(tr + gap) / 2.0, (tr - gap) / 2.0])
}

pub fn partial_trace_a(rho: &M4) -> M2 {
    M2::from_fn(|r, col| rho[(r, col)] + rho[(2 + r, 2 + col)])
}

pub fn partial_trace_b(rho: &M4) -> M2 {
    M2::from_fn(|r, col| rho[(2 * r, 2 * col)] + rho[(2 * r + 1, 2 * col + 1)])
}

fn dyn4(m: &M4) -> DMatrix<C> {
    DMatrix::from_fn(4, 4, |r, col| m[(r, col)])
}

fn dyn2(m: &M2) -> DMatrix<C> {
    DMatrix::from_fn(2, 2, |r, col| m[(r, col)])
}

pub fn projector(u: &Vector3<f64>, sign: f64) -> M2 {
    let mut p = sigma(0);
    for k in 0..3 {
        p += sigma(k + 1) * c(sign * u[k], 0.0);
    }
    p * c(0.5, 0.0)
}

/// Σ± p± S(ρ_{other|±}) for the projective measurement (I ± u·σ)/2 on
/// `measure_a ? A : B`.
pub fn conditional_entropy_projective(rho: &M4, u: &Vector3<f64>, measure_a: bool) -> f64 {
    [1.0, -1.0]
        .iter()
        .map(|&sign| {
            let p = projector(u, sign);
            let full = if measure_a { kron(&p, &sigma(0)) } else { kron(&sigma(0), &p) };
            let post = full * rho * full;
            let reduced = if measure_a { partial_trace_a(&post) } else { partial_trace_b(&post) };
            let prob = reduced.trace().re;
            if prob <= 1e-15 {
                0.0
            } else {
                prob * entropy(&dyn2(&(reduced / c(prob, 0.0))))
            }
        })
        .sum()
}

/// Min of the conditional entropy over an (n_theta × n_phi) grid covering
/// the full sphere, poles included.
///
/// For speed the unnormalised conditional state is assembled from the 2×2
/// blocks of ρ: Tr_A[(Π⊗I)ρ] = Σᵢⱼ Πⱼᵢ ρ⁽ⁱʲ⁾ where ρ⁽ⁱʲ⁾ = ⟨i|_A ρ |j⟩_A.
pub fn grid_min_conditional_entropy(rho: &M4, measure_a: bool, n_theta: usize, n_phi: usize) -> f64 {
    let block = |i: usize, j: usize| -> M2 {
        M2::from_fn(|r, col| {
            if measure_a {
                rho[(2 * i + r, 2 * j + col)]
            } else {
                rho[(2 * r + i, 2 * col + j)]
            }
        })
    };
    let blocks = [[block(0, 0), block(0, 1)], [block(1, 0), block(1, 1)]];
    let mut best = f64::INFINITY;
    for it in 0..n_theta {
        let theta = std::f64::consts::PI * it as f64 / (n_theta - 1) as f64;
        for ip in 0..n_phi {
            let phi = std::f64::consts::TAU * ip as f64 / n_phi as f64;
            let u = Vector3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos());
            let mut total = 0.0;
            for sign in [1.0, -1.0] {
                let p = projector(&u, sign);
                let mut reduced = M2::zeros();
                for i in 0..2 {
                    for j in 0..2 {
                        reduced += blocks[i][j] * p[(j, i)];
                    }
                }
                let prob = reduced.trace().re;
                if prob > 1e-15 {
                    total += prob * entropy2(&(reduced / c(prob, 0.0)));
                }
            }
            best = best.min(total);
            if theta == 0.0 || theta == std::f64::consts::PI {
                break;
            }
        }
    }
    best
}

/// One-way discord by brute force: S(measured) - S(AB) + min S(other | Π).
pub fn grid_discord(rho: &M4, measure_a: bool, n_theta: usize, n_phi: usize) -> f64 {
    let measured = if measure_a { partial_trace_b(rho) } else { partial_trace_a(rho) };
    entropy(&dyn2(&measured)) - entropy(&dyn4(rho)) + grid_min_conditional_entropy(rho, measure_a, n_theta, n_phi)
}

/// exp[(i/2)(φ₁σ₁σ₁ + φ₂σ₂σ₂ + φ₃σ₃σ₃)] as a product of the commuting
/// factors cos(φ/2) I + i sin(φ/2) σₖ⊗σₖ.
pub fn nonlocal_unitary(phi: [f64; 3]) -> M4 {
    let mut u = M4::identity();
    for k in 0..3 {
        let g = kron(&sigma(k + 1), &sigma(k + 1));
        u *= M4::identity() * c((phi[k] / 2.0).cos(), 0.0) + g * c(0.0, (phi[k] / 2.0).sin());
    }
    u
}

pub fn max_abs(m: &M4) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn omega_rows() -> [[f64; 4]; 4] {
    [
        [0.2, 0.1, 0.1, 0.0],
        [0.1, 0.1, 0.0, 0.1],
        [0.1, 0.0, 0.3, 0.1],
        [0.0, 0.1, 0.1, 0.4],
    ]
}

/// Ω with the two middle basis vectors exchanged.
pub fn omega_swapped_rows() -> [[f64; 4]; 4] {
    let o = omega_rows();
    let p = [0, 2, 1, 3];
    let mut out = [[0.0; 4]; 4];
    for r in 0..4 {
        for col in 0..4 {
            out[r][col] = o[p[r]][p[col]];
        }
    }
    out
}

pub fn real_rows(rows: &[[f64; 4]; 4]) -> M4 {
    M4::from_fn(|r, col| c(rows[r][col], 0.0))
}
