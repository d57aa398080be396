//! The finite-difference eigensolver on the harmonic oscillator: second-order
//! convergence from below and Richardson extrapolation.
//!
//! cargo run --release --example oracle_benchmark

use desitter_dirac::spectral_numeric::{discretize, eigen_smallest, richardson, sturm_count, Grid1D};

fn main() -> desitter_dirac::Result<()> {
    let levels = [400, 801, 1603];
    let mut results = Vec::new();
    for n in levels {
        let grid = Grid1D::new(-10.0, 10.0, n)?;
        let op = discretize(|x| x * x, &grid)?;
        let e = eigen_smallest(&op, 4, false)?.eigenvalues;
        println!(
            "N = {n:>5}, h = {:.5}: {:?}  (Sturm count below 6: {})",
            grid.h(),
            e,
            sturm_count(&op, 6.0)
        );
        results.push(e);
    }
    let [coarse, mid, fine] = [&results[0], &results[1], &results[2]];
    for (k, ((c, m), f)) in coarse.iter().zip(mid).zip(fine).enumerate() {
        let exact = (2 * k + 1) as f64;
        let extrapolated = richardson(*m, *f, 2.0, 2);
        println!(
            "level {k}: errors {:.2e} {:.2e} {:.2e}, Richardson {:.2e}",
            exact - c,
            exact - m,
            exact - f,
            (extrapolated - exact).abs()
        );
    }
    Ok(())
}
