//! Romanovski polynomials: coefficients, exact ODE residual, weight and
//! finite orthogonality.
//!
//! cargo run --example romanovski_table

use desitter_dirac::romanovski::{
    orthogonality_converges, orthogonality_integral, romanovski_poly, romanovski_poly_exact,
};
use num_rational::BigRational;
use num_traits::Zero;

fn main() -> desitter_dirac::Result<()> {
    let (a, b) = (-2.0, -4.0);
    for nubar in 0..=4 {
        let p = romanovski_poly(nubar, a, b)?;
        println!("R_{nubar}: {:?}   eigen term {}", p.coeffs, p.eigen_term());
    }

    // b = −4 makes the recurrence degenerate from degree 5 on
    match romanovski_poly(5, a, b) {
        Err(e) => println!("degree 5 at b = -4: {e}"),
        Ok(_) => println!("degree 5 at b = -4 unexpectedly built"),
    }

    let (ea, eb) = (
        BigRational::new((-2).into(), 1.into()),
        BigRational::new((-17).into(), 4.into()),
    );
    for nubar in [6, 8] {
        let p = romanovski_poly_exact(nubar, &ea, &eb)?;
        println!(
            "exact R_{nubar}(a = -2, b = -17/4): residual identically zero = {}",
            p.ode_residual().iter().all(Zero::is_zero)
        );
    }

    println!("pairwise integrals at (a, b) = ({a}, {b}):");
    for i in 0..=4 {
        let row: Vec<String> = (0..=4)
            .map(|j| {
                if orthogonality_converges(i, j, b) {
                    format!("{:>11.3e}", orthogonality_integral(i, j, a, b).unwrap_or(f64::NAN))
                } else {
                    format!("{:>11}", "divergent")
                }
            })
            .collect();
        println!("  {i}: {}", row.join(" "));
    }
    Ok(())
}
