//! Density matrix to (a, b, T) and back.

use discord_forge::bloch::{from_bloch, to_bloch, DensityMatrix};
use discord_forge::sampling::{ginibre_state, indexed_rng};

fn main() -> discord_forge::Result<()> {
    let omega = DensityMatrix::from_real_rows([
        [0.2, 0.1, 0.1, 0.0],
        [0.1, 0.1, 0.0, 0.1],
        [0.1, 0.0, 0.3, 0.1],
        [0.0, 0.1, 0.1, 0.4],
    ])?;
    let s = to_bloch(&omega);
    println!("a = {:?}", s.a.as_slice());
    println!("b = {:?}", s.b.as_slice());
    println!("T = {}", s.t);
    println!("purity: matrix {:.12}, bloch {:.12}", omega.purity(), s.purity());

    let dm = ginibre_state(&mut indexed_rng(1, 0));
    let back = from_bloch(&to_bloch(&dm))?;
    let err = (back.matrix() - dm.matrix()).map(|z| z.norm()).max();
    println!("random state round-trip error {err:.2e}");
    Ok(())
}
