//! Builds a verification report in-process and prints its summary and CSV.
//!
//! cargo run --release --example verify_report

use desitter_dirac::cli::{cmd_verify, RunConfig, Suite};

fn main() -> desitter_dirac::Result<()> {
    let report = cmd_verify(Suite::Geometry, &RunConfig::default())?;
    for check in &report.checks {
        println!(
            "{:<48} {:<5} {:.3e}",
            check.name,
            if check.passed { "pass" } else { "FAIL" },
            check.value
        );
    }
    print!("{}", report.to_csv());
    Ok(())
}
