//! Shot simulation of the singlet protocol for an equatorial target.

use discord_forge::report::{singlet_report, Format};
use discord_forge::rsp::{simulate_singlet_rsp, EquatorialTarget};

fn main() -> discord_forge::Result<()> {
    let theta = 1.2;
    let out = simulate_singlet_rsp(EquatorialTarget::new(theta)?, 10_000, 42)?;
    print!("{}", singlet_report(theta, 42, &out).emit(Format::Human));
    Ok(())
}
