//! Û(φ₁, φ₂, φ₃) on the Bloch triple, cross-checked against the 4×4 matrix.

use discord_forge::sampling::{ginibre_state, indexed_rng};
use discord_forge::unitary::{apply_nonlocal, generator_convention, NonlocalAngles};
use discord_forge::verify::consistency_errors;
use discord_forge::to_bloch;

fn main() -> discord_forge::Result<()> {
    println!("{}", generator_convention()?);
    let angles: NonlocalAngles = "1/4pi,3/4pi,3/4pi".parse()?;
    let s = to_bloch(&ginibre_state(&mut indexed_rng(3, 0)));
    let out = apply_nonlocal(&s, &angles);
    println!("angles {angles}");
    println!("T before {}", s.t);
    println!("T after  {}", out.t);
    let (spectrum, oracle) = consistency_errors(&s, &angles)?;
    println!("spectrum drift {spectrum:.2e}, matrix disagreement {oracle:.2e}");
    Ok(())
}
