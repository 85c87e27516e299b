//! SVD canonical form and structural classification of a CQ sample, a
//! product state and a singlet.

use discord_forge::canonical::{classify, svd_canonicalize, Classification, Side};
use discord_forge::prescribe::lookup;
use discord_forge::sampling::{classical_quantum_bloch, indexed_rng};
use discord_forge::BlochState;
use nalgebra::{Matrix3, Vector3};

fn describe(name: &str, s: &BlochState) -> discord_forge::Result<()> {
    let c = svd_canonicalize(s);
    println!("{name}: singular values {:?}", c.singular_values);
    for side in [Side::Cq, Side::Qc] {
        match classify(s, side, 1e-4)? {
            Classification::ZeroDiscord(case) => {
                let row = lookup(&case).map(|e| e.id()).unwrap_or_else(|e| e.to_string());
                println!("  {side}: {} {} -> {row}", case.family, case.pattern);
            }
            Classification::NotZeroDiscord { discord } => println!("  {side}: discord {discord:.6}"),
        }
    }
    Ok(())
}

fn main() -> discord_forge::Result<()> {
    describe("cq sample", &classical_quantum_bloch(&mut indexed_rng(5, 0)))?;
    describe(
        "product",
        &BlochState::product(Vector3::new(0.3, 0.2, 0.4), Vector3::new(-0.5, 0.1, 0.6)),
    )?;
    describe("singlet", &BlochState::new(Vector3::zeros(), Vector3::zeros(), -Matrix3::identity()))?;
    Ok(())
}
