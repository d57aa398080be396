//! Central finite-difference stencils on callables.
//!
//! These are used for residual checks of closed-form solutions, where the
//! function can be sampled anywhere, so the step is independent of any grid.

use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

/// Default step for the fourth-order stencils. Balances the O(h⁴) truncation
/// against O(ε/h²) round-off of the second derivative.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Field-like values the stencils can operate on (`f64` and `Complex64`).
pub trait Sample: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {}
impl Sample for f64 {}
impl Sample for Complex64 {}

/// Fourth-order central first derivative.
pub fn d1<T: Sample>(f: impl Fn(f64) -> T, x: f64, h: f64) -> T {
    let a = f(x + h) - f(x - h);
    let b = f(x + 2.0 * h) - f(x - 2.0 * h);
    (a * 8.0 - b) * (1.0 / (12.0 * h))
}

/// Fourth-order central second derivative.
pub fn d2<T: Sample>(f: impl Fn(f64) -> T, x: f64, h: f64) -> T {
    let c = f(x);
    let a = f(x + h) + f(x - h);
    let b = f(x + 2.0 * h) + f(x - 2.0 * h);
    (a * 16.0 - b - c * 30.0) * (1.0 / (12.0 * h * h))
}

/// `n` uniformly spaced points strictly inside `(lo, hi)`, spacing `(hi − lo)/(n + 1)`.
pub fn interior_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let h = (hi - lo) / (n as f64 + 1.0);
    (1..=n).map(|i| lo + i as f64 * h).collect()
}
