//! Aligning a product state onto z and activating it on both sides.

use discord_forge::canonical::Side;
use discord_forge::discord::OptimizerConfig;
use discord_forge::prescribe::{activate, activate_with, product_alignment};
use discord_forge::unitary::apply_local;
use discord_forge::{from_bloch, BlochState};
use nalgebra::Vector3;

fn main() -> discord_forge::Result<()> {
    let s = BlochState::product(Vector3::new(0.3, 0.2, 0.4), Vector3::new(-0.5, 0.1, 0.6));

    let align = product_alignment(&s.a, &s.b)?;
    let aligned = apply_local(&s, &align);
    println!("aligned a = {:?}, b = {:?}, t33 = {:.6}", aligned.a.as_slice(), aligned.b.as_slice(), aligned.t[(2, 2)]);

    let cfg = OptimizerConfig::default();
    for (side, angles) in [(Side::Cq, "pi,1/2pi,pi"), (Side::Qc, "0,1/2pi,0")] {
        let rec = activate_with(&s, side, Some(&align), Some(angles.parse()?), 1e-4, &cfg)?;
        println!("{side} with {}: discord {:.6}", rec.angles, rec.output_discord);
    }

    let dm = from_bloch(&s)?;
    for side in [Side::Cq, Side::Qc] {
        let rec = activate(&dm, side)?;
        println!(
            "{side} via table row {}: {} -> discord {:.6}",
            rec.row_id.unwrap_or_default(),
            rec.angles,
            rec.output_discord
        );
    }
    Ok(())
}
