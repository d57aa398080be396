//! Model constants and the time part of the solution: ỹ from a Romanovski
//! polynomial, its transformed-equation residual and T(τ) under both maps.
//!
//! cargo run --example time_part

use desitter_dirac::romanovski::{
    eigencondition, ell_m_of_nu, model_constants, nu_of_ell_m, quantum_consistency, time_solution, TauMap,
};

fn main() -> desitter_dirac::Result<()> {
    let ell_m = 1.0;
    for eps in [1.0, -1.0] {
        let c = model_constants(ell_m, eps)?;
        let (a, b) = c.romanovski_params();
        println!(
            "eps = {eps:+}: a1 = {:.12}, A = {:.12}, B = {:.12}, Romanovski (a, b) = ({a:.6}, {b:.6})",
            c.a1, c.a_big, c.b_big
        );
        for nubar in 0..=3 {
            let sol = time_solution(c.component(), nubar, &c, TauMap::Cot)?;
            let worst = (-100..=100)
                .map(|k| sol.transformed_residual(k as f64 / 10.0).map(|r| r.norm()))
                .collect::<desitter_dirac::Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            let cond = eigencondition(c.a_big, sol.omega2);
            println!(
                "  nubar = {nubar}: omega2 = {:>10.6}, residual on [-10, 10] = {worst:.2e}, eigencondition roots {:?}",
                sol.omega2, cond.roots
            );
        }
        let sol = time_solution(c.component(), 1, &c, TauMap::Coth)?;
        println!(
            "  T(tau = 1) with z = coth tau ({}): {:.10}",
            TauMap::Coth.name(),
            sol.t_of_tau(1.0)?
        );
    }

    let nu = nu_of_ell_m(ell_m, 1.0);
    println!("nu(lM = 1) = {nu:.15}, inverted lM = {:.15}", ell_m_of_nu(nu, 1.0)?);
    let c = model_constants(ell_m, 1.0)?;
    let report = quantum_consistency(1.0, 1, nu, &c, 1.0)?;
    println!("coupling conditions evaluated at (m, n, nu) = (1, 1, nu(lM = 1)):\n{report:#?}");
    Ok(())
}
