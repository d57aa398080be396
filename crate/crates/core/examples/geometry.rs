//! Gamma matrices, metric, frame and spin connection at a sample point.
//!
//! cargo run --example geometry

use desitter_dirac::geometry::{metric_at, spin_connection_at, spin_connection_closed_form, vierbein_at, GammaSet};

fn main() -> desitter_dirac::Result<()> {
    println!(
        "Clifford algebra exact over integers: {}",
        GammaSet::clifford_holds_exactly()
    );

    let (ell, tau, theta) = (1.5, 0.8, 1.1);
    let g = metric_at(ell, tau, theta)?;
    println!("metric diagonal   {:?}", g.diagonal());
    println!("determinant       {:.12e}", g.determinant());
    println!("frame e_a^mu      {:?}", vierbein_at(ell, tau, theta)?.frame);

    let gammas = GammaSet::standard();
    let general = spin_connection_at(ell, tau, theta, &gammas)?;
    let closed = spin_connection_closed_form(tau, theta, &gammas)?;
    for (mu, c) in general.components.iter().enumerate() {
        println!("Gamma_{mu} = {c}");
    }
    println!("max |general - closed form| = {:.3e}", general.max_abs_diff(&closed));
    Ok(())
}
