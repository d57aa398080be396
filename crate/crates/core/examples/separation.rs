//! Separated angular and temporal equations: potentials in the gauge
//! eA₁ = i cot θ / 2 and the first-order residual of an exact angular pair.
//!
//! cargo run --example separation

use desitter_dirac::calculus::interior_points;
use desitter_dirac::separation::{
    angular_potentials, first_order_residual, temporal_potential, Component, GaugeChoice, SeparatedFields,
};
use desitter_dirac::susy_angular::dirac_angular_pair;
use desitter_dirac::Complex64;
use std::f64::consts::PI;

fn main() -> desitter_dirac::Result<()> {
    let m = 1.0;
    let pair = angular_potentials(m);
    println!("{:>6} {:>14} {:>14}", "theta", "V+", "V-");
    for theta in [0.3, 0.8, PI / 2.0, 2.3, 2.8] {
        println!(
            "{theta:>6.3} {:>14.8} {:>14.8}",
            pair.v_plus(theta)?,
            pair.v_minus(theta)?
        );
    }

    let omega2 = 4.0;
    for component in [Component::One, Component::Two] {
        let u = temporal_potential(1.0, omega2, component);
        println!(
            "U_{}(tau = 1) = {:.10}   (tau -> inf: {:.4})",
            component.index(),
            u.eval(1.0)?,
            u.asymptotic()
        );
    }

    // Θ₁, Θ₂ from the n = 1 Jacobi mode satisfy the first-order system
    let dirac = dirac_angular_pair(m, 1)?;
    let gauge = GaugeChoice::new(1.0)?;
    let th1 = |t: f64| Complex64::new(dirac.theta1(t), 0.0);
    let th2 = |t: f64| Complex64::new(dirac.theta2(t), 0.0);
    let one = |_: f64| Complex64::new(1.0, 0.0);
    let fields = SeparatedFields {
        t1: &one,
        t2: &one,
        theta1: &th1,
        theta2: &th2,
    };
    let grid = interior_points(0.05, PI - 0.05, 2000);
    let r = first_order_residual(&fields, m, dirac.omega, 1.0, &gauge, &[], &grid)?;
    println!(
        "omega = {}, sign = {}, angular residuals = {:.3e}, {:.3e}",
        dirac.omega, dirac.sign, r.angular_1, r.angular_2
    );
    Ok(())
}
