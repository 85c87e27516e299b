//! Preparatory nonlocal unitary followed by the fidelity law.

use discord_forge::bloch::DensityMatrix;
use discord_forge::report::{rsp_report, Format};
use discord_forge::rsp::{modified_protocol, AngleChoice};

fn main() -> discord_forge::Result<()> {
    let omega = DensityMatrix::from_real_rows([
        [0.2, 0.1, 0.1, 0.0],
        [0.1, 0.1, 0.0, 0.1],
        [0.1, 0.0, 0.3, 0.1],
        [0.0, 0.1, 0.1, 0.4],
    ])?;
    let r = modified_protocol(&omega, AngleChoice::Explicit("1/2pi,0,1/2pi".parse()?))?;
    print!("{}", rsp_report(&r).emit(Format::Human));
    Ok(())
}
