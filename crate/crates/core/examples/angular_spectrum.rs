//! Closed-form angular spectrum against the finite-difference oracle, in both
//! energy-offset conventions.
//!
//! cargo run --release --example angular_spectrum

use desitter_dirac::spectral_numeric::eigen_smallest;
use desitter_dirac::susy_angular::{analytic_spectrum, spectral_gap, susy_factorization, Convention};

fn main() -> desitter_dirac::Result<()> {
    for m in [1.0, 2.0] {
        let s = susy_factorization(m);
        let (plus, minus) = s.discretize_pair(4000, Convention::Factorized)?;
        let ep = eigen_smallest(&plus, 5, false)?.eigenvalues;
        let em = eigen_smallest(&minus, 4, false)?.eigenvalues;
        println!("m = {m}: W = {} csc - {} cot", s.b_const, s.a_const);
        println!(
            "{:>3} {:>12} {:>12} {:>14} {:>14} {:>10}",
            "n", "factorized", "separated", "oracle h+", "oracle h-", "gap"
        );
        for n in 0..5 {
            let partner = if n > 0 {
                format!("{:14.8}", em[n - 1])
            } else {
                format!("{:>14}", "-")
            };
            println!(
                "{n:>3} {:>12.6} {:>12.6} {:>14.8} {partner} {:>10}",
                analytic_spectrum(m, n, Convention::Factorized),
                analytic_spectrum(m, n, Convention::Separated),
                ep[n],
                spectral_gap(m, n),
            );
        }
    }
    Ok(())
}
