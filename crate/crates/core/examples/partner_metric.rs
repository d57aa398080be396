//! The partner 4D metric and the proportionality of the η operators to
//! (−g)^{1/4}(−g⁰⁰)^{1/4}.
//!
//! cargo run --example partner_metric

use desitter_dirac::pseudo_susy::{background_eta_ratio, ell_power, eta1, eta2, partner_eta_ratio, partner_metric};

fn main() -> desitter_dirac::Result<()> {
    let (ell, tau, theta, phi) = (1.3, 0.9, 1.2, 0.6);
    let g = partner_metric(ell, tau, theta, phi)?;
    println!("line element diag  {:?}", g.line_element());
    println!("signature          {:?}", g.signature());
    println!("determinant        {:.12e}", g.determinant());
    println!(
        "eta1 = {:.10}, candidate = {:.10}",
        eta1(ell, 1.0, 1.0, 1.0).value(tau, theta, phi)?,
        g.eta_candidate()
    );
    println!("eta2 = {:.10}", eta2(ell).value(tau, theta, phi)?);

    for (t, th, ph) in [(0.5, 0.7, 0.4), (2.0, 2.1, 2.9), (1.1, 1.5, 1.0)] {
        println!(
            "ratios at ({t}, {th}, {ph}): partner {:.12}, background {:.12}",
            partner_eta_ratio(ell, t, th, ph)?,
            background_eta_ratio(ell, t, th)?
        );
    }
    println!(
        "ell-power of the partner ratio:    {:.12}",
        ell_power(|l| partner_eta_ratio(l, tau, theta, phi), 1.0, 2.0)?
    );
    println!(
        "ell-power of the background ratio: {:.12}",
        ell_power(|l| background_eta_ratio(l, tau, theta), 1.0, 2.0)?
    );
    Ok(())
}
