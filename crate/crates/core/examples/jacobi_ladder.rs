//! Jacobi eigenfunctions of the angular operator and the SUSY ladder between
//! partner potentials.
//!
//! cargo run --example jacobi_ladder

use desitter_dirac::susy_angular::{intertwine_check, jacobi_eigenfunction, quoted_normalization, zero_mode_residual};

fn main() -> desitter_dirac::Result<()> {
    let m = 1.0;
    println!(
        "{:>3} {:>8} {:>8} {:>8} {:>18} {:>18} {:>6}",
        "n", "omega2", "alpha", "beta", "norm (quadrature)", "norm (closed form)", "zeros"
    );
    for n in 0..5 {
        let mode = jacobi_eigenfunction(m, n)?;
        println!(
            "{n:>3} {:>8} {:>8} {:>8} {:>18.12} {:>18.12} {:>6}",
            mode.omega2,
            mode.alpha,
            mode.beta,
            mode.norm_squared_quadrature,
            mode.norm_squared_closed_form,
            mode.interior_zeros(4000)
        );
    }
    println!(
        "quoted normalization at m = 1, n = 2: {:.12}",
        quoted_normalization(m, 2)
    );

    println!(
        "zero mode annihilated by the lowering operator: residual {:.3e}",
        zero_mode_residual(m, 2000)?
    );
    for n in 1..5 {
        let r = intertwine_check(m, n, 2000)?;
        println!(
            "A Theta(m, {n}) = c Theta(m + 1, {}): residual {:.3e}, |c| = {:.10}, sqrt(gap) = {:.10}",
            n - 1,
            r.residual,
            r.factor.abs(),
            r.expected_factor
        );
    }
    Ok(())
}
