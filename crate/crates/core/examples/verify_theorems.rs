//! Seeded checks that zero-discord samples are activated, plus one table row.
//!
//! `cargo run --release --example verify_theorems -- 500` sets the sample count.

use discord_forge::prescribe::entry_by_id;
use discord_forge::report::{verification_report, Format};
use discord_forge::verify::{appendix_contradiction_check, verify_theorem, SampleKind, SampleSpec};

fn main() -> discord_forge::Result<()> {
    let count = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200);
    for (which, kind) in [(1, SampleKind::Cq), (2, SampleKind::Qc), (3, SampleKind::Product)] {
        let r = verify_theorem(which, &SampleSpec::new(kind, count, 7)?, 1e-4)?;
        print!("{}", verification_report(&r, Format::Human).emit(Format::Human));
    }
    let row = entry_by_id("CQ-02").expect("row exists");
    let r = appendix_contradiction_check(row, 100, 7, 1e-4);
    print!("{}", verification_report(&r, Format::Human).emit(Format::Human));
    Ok(())
}
