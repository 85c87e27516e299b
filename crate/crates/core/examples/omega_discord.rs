//! Both one-way discords and the geometric discord of a fixed real state,
//! in the standard ordering and with the qubits exchanged.

use discord_forge::analyze;
use discord_forge::bloch::DensityMatrix;
use discord_forge::report::{discord_report, Format};

fn main() -> discord_forge::Result<()> {
    let omega = DensityMatrix::from_real_rows([
        [0.2, 0.1, 0.1, 0.0],
        [0.1, 0.1, 0.0, 0.1],
        [0.1, 0.0, 0.3, 0.1],
        [0.0, 0.1, 0.1, 0.4],
    ])?;
    print!("{}", discord_report(&analyze(&omega)).emit(Format::Human));

    let swapped = DensityMatrix::from_real_rows([
        [0.2, 0.1, 0.1, 0.0],
        [0.1, 0.3, 0.0, 0.1],
        [0.1, 0.0, 0.1, 0.1],
        [0.0, 0.1, 0.1, 0.4],
    ])?;
    let r = analyze(&swapped);
    println!("swapped ordering: D_AB = {:.6}, D_BA = {:.6}", r.d_ab, r.d_ba);
    Ok(())
}
