//! Checks every closed form against brute-force enumeration for m = 1..=9.
//!
//!     cargo run --release --example oracle_verification

use coalition_evo::{verify, EnumerationCap};

fn main() -> Result<(), coalition_evo::CoalitionError> {
    for m in 1..=9 {
        let report = verify(m, 100, 42, EnumerationCap::DEFAULT)?;
        println!(
            "m={m} ({} structures): {}",
            report.structures,
            if report.passed { "ok" } else { "MISMATCH" }
        );
        for check in report.checks.iter().filter(|c| !c.passed || m == 9) {
            println!("    {:<22} {}", check.name, check.detail);
        }
    }
    Ok(())
}
