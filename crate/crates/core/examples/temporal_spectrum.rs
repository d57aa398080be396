//! The two temporal operators −∂²_τ + U_k(τ) are elementwise complex
//! conjugates, so their discrete spectra are conjugate sets.
//!
//! cargo run --release --example temporal_spectrum

use desitter_dirac::separation::{temporal_potential, Component};
use desitter_dirac::spectral_numeric::complex_spectrum;
use desitter_dirac::Complex64;

fn discretized(component: Component, n: usize) -> desitter_dirac::Result<(Vec<Complex64>, Vec<Complex64>)> {
    let (lo, hi) = (0.3, 8.0);
    let h = (hi - lo) / (n + 1) as f64;
    let u = temporal_potential(1.0, 4.0, component);
    let diag = (1..=n)
        .map(|i| u.eval(lo + i as f64 * h).map(|v| v + 2.0 / (h * h)))
        .collect::<desitter_dirac::Result<_>>()?;
    Ok((diag, vec![Complex64::new(-1.0 / (h * h), 0.0); n - 1]))
}

fn main() -> desitter_dirac::Result<()> {
    let n = 300;
    let (d1, o1) = discretized(Component::One, n)?;
    let (d2, o2) = discretized(Component::Two, n)?;
    let s1 = complex_spectrum(&d1, &o1, 6)?;
    let s2 = complex_spectrum(&d2, &o2, 6)?;
    let mut worst = 0.0f64;
    for z in &s1 {
        let nearest = s2.iter().map(|w| (w.conj() - z).norm()).fold(f64::INFINITY, f64::min);
        worst = worst.max(nearest);
        println!("{z:.8}");
    }
    println!("max distance to the conjugate of the partner spectrum: {worst:.3e}");
    Ok(())
}
