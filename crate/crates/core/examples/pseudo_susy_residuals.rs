//! Intertwining residuals of the discretized Dirac operators under grid
//! refinement, with the ablation and the operator variants.
//!
//! cargo run --release --example pseudo_susy_residuals

use desitter_dirac::pseudo_susy::{
    convergence_slope, intertwining_residuals, CotThetaVariant, DiracGrid, DiracParams, ResidualSetup, DEFAULT_WINDOW,
};
use desitter_dirac::separation::GaugeChoice;

fn main() -> desitter_dirac::Result<()> {
    let params = DiracParams::new(1.0, 1.0, 1.0, GaugeChoice::new(1.0)?)?;
    for variant in [CotThetaVariant::Half, CotThetaVariant::Literal] {
        println!("cot theta coefficient: {} ({})", variant.coefficient(), variant.name());
        println!(
            "{:>5} {:>11} {:>11} {:>11} {:>11} {:>11} {:>11}",
            "N", "R72", "ablation", "displayed g", "R71", "R74", "shift"
        );
        let mut points = Vec::new();
        for n in [32, 64, 128] {
            let r = intertwining_residuals(&ResidualSetup {
                params,
                grid: DiracGrid::square(n)?,
                variant,
                exponents: [1.5, 1.0, 1.0],
                dtau: 1e-4,
                window: DEFAULT_WINDOW,
            })?;
            println!(
                "{n:>5} {:>11.3e} {:>11.3e} {:>11.3e} {:>11.3e} {:>11.3e} {:>11.3e}",
                r.r72, r.r72_ablation, r.r72_displayed, r.r71, r.r74, r.derivative_shift
            );
            points.push((r.h_theta, r.r72));
        }
        println!("log-log slope of R72: {:.4}\n", convergence_slope(&points));
    }
    Ok(())
}
