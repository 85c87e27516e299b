//! Library results against the brute-force references in `common`.

mod common;

use common::*;
use discord_forge::bloch::{to_bloch, BlochState, DensityMatrix};
use discord_forge::discord::{analyze, conditional_entropy, discord, geometric_fidelity, MeasurementDirection, Party};
use discord_forge::rsp::{modified_protocol, AngleChoice};
use discord_forge::sampling::{ginibre_state, indexed_rng, unit_vector};
use discord_forge::unitary::{apply_nonlocal, nonlocal_matrix_oracle, NonlocalAngles};
use nalgebra::{Matrix3, Vector3};

fn dm(rows: [[f64; 4]; 4]) -> DensityMatrix {
    DensityMatrix::from_real_rows(rows).unwrap()
}

#[test]
fn omega_bloch_triple_matches_explicit_traces() {
    let s = to_bloch(&dm(omega_rows()));
    let (a, b, t) = bloch_by_trace(&real_rows(&omega_rows()));
    assert!((s.a - a).amax() < 1e-12);
    assert!((s.b - b).amax() < 1e-12);
    assert!((s.t - t).amax() < 1e-12);
    // Hand arithmetic: a₃ = (0.2 + 0.1) - (0.3 + 0.4), a₁ = 2(ρ₀₂ + ρ₁₃), t₃₃ = ρ₀₀ - ρ₁₁ - ρ₂₂ + ρ₃₃.
    assert!((s.a[2] + 0.4).abs() < 1e-12);
    assert!((s.a[0] - 0.4).abs() < 1e-12);
    assert!((s.b[0] - 0.4).abs() < 1e-12);
    assert!(s.b[2].abs() < 1e-12);
    assert!((s.t[(2, 2)] - 0.2).abs() < 1e-12);
}

#[test]
fn singlet_triple_and_discord() {
    let k = 0.5f64.sqrt();
    let mut rho = M4::zeros();
    let psi = [0.0, k, -k, 0.0];
    for r in 0..4 {
        for col in 0..4 {
            rho[(r, col)] = C::new(psi[r] * psi[col], 0.0);
        }
    }
    let (a, b, t) = bloch_by_trace(&rho);
    assert!(a.amax() < 1e-12 && b.amax() < 1e-12);
    assert!((t + Matrix3::identity()).amax() < 1e-12);

    let dm = DensityMatrix::new(rho).unwrap();
    let s = to_bloch(&dm);
    assert!((s.t + Matrix3::identity()).amax() < 1e-12);
    assert!((discord(&dm, Party::A) - 1.0).abs() < 1e-9);
    assert!((discord(&dm, Party::B) - 1.0).abs() < 1e-9);
    assert!((geometric_fidelity(&s) - 1.0).abs() < 1e-12);
}

#[test]
fn reconstruction_from_parts_matches_library() {
    for i in 0..20 {
        let dm = ginibre_state(&mut indexed_rng(11, i));
        let s = to_bloch(&dm);
        let rebuilt = rho_from_parts(&s.a, &s.b, &s.t);
        assert!(max_abs(&(rebuilt - dm.matrix())) < 1e-12);
    }
}

#[test]
fn conditional_entropy_matches_explicit_projectors() {
    for i in 0..40 {
        let mut rng = indexed_rng(12, i);
        let dm = ginibre_state(&mut rng);
        let u = unit_vector(&mut rng);
        let dir = MeasurementDirection::new(u).unwrap();
        let lib_a = conditional_entropy(&dm, &dir, Party::A);
        let lib_b = conditional_entropy(&dm, &dir, Party::B);
        assert!((lib_a - conditional_entropy_projective(dm.matrix(), &u, true)).abs() < 1e-10);
        assert!((lib_b - conditional_entropy_projective(dm.matrix(), &u, false)).abs() < 1e-10);
    }
}

#[test]
fn optimizer_agrees_with_dense_grid() {
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let dm = ginibre_state(&mut indexed_rng(13, i));
        for (party, measure_a) in [(Party::A, true), (Party::B, false)] {
            let lib = discord(&dm, party);
            let grid = grid_discord(dm.matrix(), measure_a, 721, 1440);
            // The grid can only overestimate the minimum.
            assert!(lib <= grid + 1e-9, "optimizer above grid: {lib} > {grid}");
            worst = worst.max((lib - grid).abs());
        }
    }
    assert!(worst <= 1e-4, "optimizer vs grid: {worst:e}");
}

#[test]
fn omega_discords_under_both_orderings() {
    let std = analyze(&dm(omega_rows()));
    let swapped = analyze(&dm(omega_swapped_rows()));
    for (rows, report) in [(omega_rows(), std), (omega_swapped_rows(), swapped)] {
        let rho = real_rows(&rows);
        assert!((report.d_ba - grid_discord(&rho, true, 721, 1440)).abs() < 1e-4);
        assert!((report.d_ab - grid_discord(&rho, false, 721, 1440)).abs() < 1e-4);
    }
    // Exchanging the middle basis vectors is a swap of the qubits.
    assert!((std.d_ba - swapped.d_ab).abs() < 1e-9);
    assert!((std.d_ab - swapped.d_ba).abs() < 1e-9);
    assert!((std.d_ab - 0.026218).abs() < 5e-6);
    assert!((std.d_ba - 0.024364).abs() < 5e-6);
    assert!(std.fidelity < 1e-12);
}

#[test]
fn omega_after_activating_unitary() {
    let r = modified_protocol(&dm(omega_rows()), AngleChoice::Explicit("1/2pi,0,1/2pi".parse().unwrap())).unwrap();
    assert!((r.fidelity - 0.08).abs() < 1e-12);
    assert!((r.post_geo_discord - 0.08f64.sqrt()).abs() < 1e-12);
}

#[test]
fn nonlocal_map_matches_matrix_exponential() {
    for i in 0..50 {
        let mut rng = indexed_rng(14, i);
        let dm = ginibre_state(&mut rng);
        let angles = NonlocalAngles::random(&mut rng);
        let u = nonlocal_unitary(angles.radians());
        let conj = u * dm.matrix() * u.adjoint();
        let out = apply_nonlocal(&to_bloch(&dm), &angles);
        let (a, b, t) = bloch_by_trace(&conj);
        assert!(out.max_abs_diff(&BlochState::new(a, b, t)) < 1e-12);
        assert!(max_abs(&(nonlocal_matrix_oracle(&angles).unwrap() - u)) < 1e-12);
    }
}

#[test]
fn product_states_have_no_discord() {
    let s = BlochState::product(Vector3::new(0.3, 0.2, 0.4), Vector3::new(-0.5, 0.1, 0.6));
    let rho = rho_from_parts(&s.a, &s.b, &s.t);
    assert!(grid_discord(&rho, true, 181, 360).abs() < 1e-9);
    let dm = DensityMatrix::new(rho).unwrap();
    assert_eq!(discord(&dm, Party::A), 0.0);
    assert_eq!(discord(&dm, Party::B), 0.0);
}
