//! Fidelity of ¼(I + I⊗n·σ) after the regime unitaries, as a table over |n|.

use discord_forge::rsp::{phi_case_angles, phi_dead_branches, phi_regime_angles, rsp_fidelity};
use discord_forge::unitary::apply_nonlocal;
use discord_forge::BlochState;
use nalgebra::{Matrix3, Vector3};

fn fidelity(n: Vector3<f64>, k: usize) -> f64 {
    let s = BlochState::new(Vector3::zeros(), n, Matrix3::zeros());
    rsp_fidelity(&apply_nonlocal(&s, &phi_regime_angles()[k]))
}

fn main() {
    for w in phi_dead_branches() {
        println!("# {w}");
    }
    println!("# |n|  regime  F(n along z)  F(n along x) per triple");
    for i in 1..=10 {
        let len = 0.05 * i as f64;
        let regime = phi_case_angles(&Vector3::new(0.0, 0.0, len)).map_or("-".into(), |c| c.regime.to_string());
        let fx: Vec<String> = (0..3).map(|k| format!("{:.6}", fidelity(Vector3::new(len, 0.0, 0.0), k))).collect();
        println!("{len:.2}  {regime}  {:.6}  {}", fidelity(Vector3::new(0.0, 0.0, len), 0), fx.join(" "));
    }
}
