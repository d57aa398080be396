//! Supersymmetric factorization of the angular problem.
//!
//! With A = m + ½ and B = ½ the superpotential W(θ) = B csc θ − A cot θ
//! factorizes h₊ = A†A and h₋ = AA†, where A = d/dθ + W. The spectra and the
//! Jacobi-polynomial eigenfunctions are closed form; every relation here is
//! checked against the finite-difference oracle in [`crate::spectral_numeric`].
//!
//! Two additive conventions are in use for the same operator:
//! [`Convention::Factorized`] (−d² + W² ∓ W′, ground state at zero) and
//! [`Convention::Separated`], which adds A² and equals the potential that
//! drops out of the separated Dirac equation.

use crate::error::{invalid, Error, Result};
use crate::quadrature;
use crate::separation::{angular_potentials, AngularPotentialPair};
use crate::spectral_numeric::{discretize, Grid1D, TridiagonalOperator};
use std::f64::consts::PI;

/// Additive constant attached to the partner Hamiltonians.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// h± = −d² + W² ∓ W′; the h₊ ground state has zero energy.
    Factorized,
    /// h± shifted by +A²; h₊ then carries the separated angular potential.
    Separated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SusyFactorization {
    pub m: f64,
    pub a_const: f64,
    pub b_const: f64,
}

pub fn susy_factorization(m: f64) -> SusyFactorization {
    SusyFactorization {
        m,
        a_const: (1.0 + 2.0 * m) / 2.0,
        b_const: 0.5,
    }
}

fn trig(theta: f64) -> Result<(f64, f64)> {
    let s = theta.sin();
    if s.abs() < crate::geometry::POLE_TOLERANCE {
        return Err(Error::Domain(format!("θ = {theta} is a pole")));
    }
    Ok((theta.cos() / s, 1.0 / s))
}

impl SusyFactorization {
    pub fn w(&self, theta: f64) -> Result<f64> {
        let (cot, csc) = trig(theta)?;
        Ok(self.b_const * csc - self.a_const * cot)
    }

    /// W′(θ) = −B csc θ cot θ + A csc²θ.
    pub fn dw(&self, theta: f64) -> Result<f64> {
        let (cot, csc) = trig(theta)?;
        Ok(-self.b_const * csc * cot + self.a_const * csc * csc)
    }

    fn offset(&self, convention: Convention) -> f64 {
        match convention {
            Convention::Factorized => 0.0,
            Convention::Separated => self.a_const * self.a_const,
        }
    }

    pub fn v_plus(&self, theta: f64, convention: Convention) -> Result<f64> {
        let w = self.w(theta)?;
        Ok(w * w - self.dw(theta)? + self.offset(convention))
    }

    pub fn v_minus(&self, theta: f64, convention: Convention) -> Result<f64> {
        let w = self.w(theta)?;
        Ok(w * w + self.dw(theta)? + self.offset(convention))
    }

    /// The potentials exactly as they come out of the separated equations.
    pub fn separated_pair(&self) -> AngularPotentialPair {
        angular_potentials(self.m)
    }

    /// Shape invariance: h₋(m) = h₊(m + 1) + (A + 1)² − A² in the factorized
    /// convention, so the partner is the same family with A → A + 1.
    pub fn shifted(&self) -> SusyFactorization {
        susy_factorization(self.m + 1.0)
    }

    /// The constant R such that V₋(θ; m) = V₊(θ; m + 1) + R (factorized).
    pub fn shape_remainder(&self) -> f64 {
        (self.a_const + 1.0).powi(2) - self.a_const.powi(2)
    }

    /// Discretized (h₊, h₋) on `n` interior points of (0, π).
    pub fn discretize_pair(
        &self,
        n: usize,
        convention: Convention,
    ) -> Result<(TridiagonalOperator, TridiagonalOperator)> {
        let grid = Grid1D::new(0.0, PI, n)?;
        let plus = discretize(|t| self.v_plus(t, convention).unwrap_or(f64::NAN), &grid)?;
        let minus = discretize(|t| self.v_minus(t, convention).unwrap_or(f64::NAN), &grid)?;
        Ok((plus, minus))
    }
}

/// ω²_{+,n} = (A + n)² − A² (factorized) or (A + n)² (separated).
pub fn analytic_spectrum(m: f64, n: usize, convention: Convention) -> f64 {
    let s = susy_factorization(m);
    let a = s.a_const;
    (a + n as f64).powi(2) - a * a + s.offset(convention)
}

/// ω²_{+,n+1} − ω²_{+,n} = 2A + 2n + 1, independent of the convention.
pub fn spectral_gap(m: f64, n: usize) -> f64 {
    2.0 * susy_factorization(m).a_const + 2.0 * n as f64 + 1.0
}

/// P_n^{(α,β)}(x) by the three-term recurrence.
pub fn jacobi_poly(n: usize, alpha: f64, beta: f64, x: f64) -> Result<f64> {
    if !(alpha > -1.0) || !(beta > -1.0) {
        return Err(invalid(
            "alpha",
            format!("Jacobi parameters must exceed −1, got ({alpha}, {beta})"),
        ));
    }
    if !(x.abs() <= 1.0 + 1e-12) {
        return Err(Error::Domain(format!("x = {x} outside [−1, 1]")));
    }
    Ok(jacobi_unchecked(n, alpha, beta, x))
}

fn jacobi_unchecked(n: usize, alpha: f64, beta: f64, x: f64) -> f64 {
    let mut p0 = 1.0;
    if n == 0 {
        return p0;
    }
    let mut p1 = (alpha + 1.0) + (alpha + beta + 2.0) * (x - 1.0) / 2.0;
    let ab = alpha + beta;
    for k in 2..=n {
        let k = k as f64;
        let c = 2.0 * k + ab;
        let lead = 2.0 * k * (k + ab) * (c - 2.0);
        let mid = (c - 1.0) * (c * (c - 2.0) * x + alpha * alpha - beta * beta);
        let back = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * c;
        let p2 = (mid * p1 - back * p0) / lead;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// d/dx P_n^{(α,β)} = (n + α + β + 1)/2 · P_{n−1}^{(α+1,β+1)}.
fn jacobi_derivative(n: usize, alpha: f64, beta: f64, x: f64) -> f64 {
    if n == 0 {
        0.0
    } else {
        0.5 * (n as f64 + alpha + beta + 1.0) * jacobi_unchecked(n - 1, alpha + 1.0, beta + 1.0, x)
    }
}

/// ∫_{−1}^{1} (1−x)^α (1+x)^β [P_n^{(α,β)}]² dx.
pub fn jacobi_norm_squared(n: usize, alpha: f64, beta: f64) -> f64 {
    let nf = n as f64;
    let ln = (alpha + beta + 1.0) * std::f64::consts::LN_2 - (2.0 * nf + alpha + beta + 1.0).ln()
        + libm::lgamma(nf + alpha + 1.0)
        + libm::lgamma(nf + beta + 1.0)
        - libm::lgamma(nf + 1.0)
        - libm::lgamma(nf + alpha + beta + 1.0);
    ln.exp()
}

/// The closed-form normalization value quoted alongside the Jacobi modes:
/// 2^{m+2}/(2n+m+2) · Γ(n+m+3/2)Γ(n+3/2) / (n! Γ(n+m+2)).
///
/// It is the squared norm for weight parameters (½, m + ½), which coincide
/// with the true parameters (m − ½, m + ½) only at m = 1. Kept as a
/// cross-check value; [`JacobiMode`] normalizes by quadrature.
pub fn quoted_normalization(m: f64, n: usize) -> f64 {
    jacobi_norm_squared(n, 0.5, m + 0.5)
}

/// Normalized eigenfunction of h₊ with n interior nodes:
/// Θ(θ) = N (1 − cos θ)^{(A−B)/2} (1 + cos θ)^{(A+B)/2} P_n^{(A−B−½, A+B−½)}(cos θ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiMode {
    pub m: f64,
    pub n: usize,
    /// Eigenvalue in the factorized convention.
    pub omega2: f64,
    pub norm_const: f64,
    pub alpha: f64,
    pub beta: f64,
    /// ∫₀^π (unnormalized Θ)² dθ from quadrature.
    pub norm_squared_quadrature: f64,
    /// The same quantity from the Jacobi norm formula.
    pub norm_squared_closed_form: f64,
}

/// Absolute tolerance of the normalization quadrature.
pub const NORM_QUADRATURE_TOL: f64 = 1e-13;

pub fn jacobi_eigenfunction(m: f64, n: usize) -> Result<JacobiMode> {
    let s = susy_factorization(m);
    let (a, b) = (s.a_const, s.b_const);
    let alpha = a - b - 0.5;
    let beta = a + b - 0.5;
    if !(alpha > -1.0) || !(beta > -1.0) {
        return Err(invalid(
            "m",
            format!("Jacobi parameters ({alpha}, {beta}) must exceed −1"),
        ));
    }
    if !(a - b > 0.0) {
        return Err(invalid(
            "m",
            format!("exponent (A − B)/2 = {} must be positive", (a - b) / 2.0),
        ));
    }
    let mut mode = JacobiMode {
        m,
        n,
        omega2: analytic_spectrum(m, n, Convention::Factorized),
        norm_const: 1.0,
        alpha,
        beta,
        norm_squared_quadrature: f64::NAN,
        norm_squared_closed_form: jacobi_norm_squared(n, alpha, beta),
    };
    let raw = quadrature::integrate(|t| mode.eval(t).powi(2), 0.0, PI, NORM_QUADRATURE_TOL, 1e-14, 10_000)?;
    mode.norm_squared_quadrature = raw.value;
    mode.norm_const = 1.0 / raw.value.sqrt();
    Ok(mode)
}

impl JacobiMode {
    fn exponents(&self) -> (f64, f64) {
        let s = susy_factorization(self.m);
        ((s.a_const - s.b_const) / 2.0, (s.a_const + s.b_const) / 2.0)
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let c = theta.cos();
        let (p, q) = self.exponents();
        self.norm_const * (1.0 - c).powf(p) * (1.0 + c).powf(q) * jacobi_unchecked(self.n, self.alpha, self.beta, c)
    }

    /// Analytic dΘ/dθ.
    pub fn derivative(&self, theta: f64) -> f64 {
        let (c, s) = (theta.cos(), theta.sin());
        let (p, q) = self.exponents();
        let u = (1.0 - c).powf(p) * (1.0 + c).powf(q);
        let du_dc = u * (-p / (1.0 - c) + q / (1.0 + c));
        let poly = jacobi_unchecked(self.n, self.alpha, self.beta, c);
        let dpoly = jacobi_derivative(self.n, self.alpha, self.beta, c);
        -s * self.norm_const * (du_dc * poly + u * dpoly)
    }

    /// Sign changes on `samples` interior points; equals n for a correct mode.
    pub fn interior_zeros(&self, samples: usize) -> usize {
        let pts = crate::calculus::interior_points(0.0, PI, samples);
        let vals: Vec<f64> = pts.iter().map(|&t| self.eval(t)).filter(|v| *v != 0.0).collect();
        vals.windows(2).filter(|w| w[0].signum() != w[1].signum()).count()
    }
}

/// Outcome of applying A = d/dθ + W to a mode and comparing with its partner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntertwineReport {
    /// ‖AΘ₊,ₙ − cΘ₋,ₙ₋₁‖∞ with c fitted by least squares on the grid.
    pub residual: f64,
    /// The fitted factor c.
    pub factor: f64,
    /// √(ω²_{+,n}); |c| should equal it.
    pub expected_factor: f64,
}

/// Checks AΘ₊,ₙ ∝ Θ₋,ₙ₋₁ on `grid_points` interior points, building the
/// partner mode from the shifted family (m → m + 1, degree n − 1).
pub fn intertwine_check(m: f64, n: usize, grid_points: usize) -> Result<IntertwineReport> {
    if n == 0 {
        return Err(invalid(
            "n",
            "the partner of the ground state does not exist; use zero_mode_residual",
        ));
    }
    let s = susy_factorization(m);
    let plus = jacobi_eigenfunction(m, n)?;
    let partner = jacobi_eigenfunction(m + 1.0, n - 1)?;
    let pts = crate::calculus::interior_points(0.0, PI, grid_points);
    let lowered: Vec<f64> = pts
        .iter()
        .map(|&t| Ok(plus.derivative(t) + s.w(t)? * plus.eval(t)))
        .collect::<Result<_>>()?;
    let target: Vec<f64> = pts.iter().map(|&t| partner.eval(t)).collect();
    let dot: f64 = lowered.iter().zip(&target).map(|(a, b)| a * b).sum();
    let tt: f64 = target.iter().map(|b| b * b).sum();
    let factor = dot / tt;
    let residual = lowered
        .iter()
        .zip(&target)
        .map(|(a, b)| (a - factor * b).abs())
        .fold(0.0, f64::max);
    Ok(IntertwineReport {
        residual,
        factor,
        expected_factor: plus.omega2.sqrt(),
    })
}

/// ‖(d/dθ + W)Θ₊,₀‖∞ on `grid_points` interior points.
pub fn zero_mode_residual(m: f64, grid_points: usize) -> Result<f64> {
    let s = susy_factorization(m);
    let mode = jacobi_eigenfunction(m, 0)?;
    crate::calculus::interior_points(0.0, PI, grid_points)
        .into_iter()
        .map(|t| Ok((mode.derivative(t) + s.w(t)? * mode.eval(t)).abs()))
        .try_fold(0.0, |acc: f64, r: Result<f64>| Ok(acc.max(r?)))
}

/// exp(−∫W dθ) = sin^A θ · tan^{−B}(θ/2), the unnormalized zero mode.
pub fn zero_mode_from_superpotential(m: f64, theta: f64) -> f64 {
    let s = susy_factorization(m);
    theta.sin().powf(s.a_const) * (theta / 2.0).tan().powf(-s.b_const)
}

/// Angular pair of the separated Dirac system in the imaginary gauge:
/// Θ₁ is the Jacobi mode (m, n) and Θ₂(θ) = sign · Θ₁(π − θ), with
/// ω = m + n + ½.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracAngularPair {
    pub mode: JacobiMode,
    pub omega: f64,
    pub sign: f64,
}

impl DiracAngularPair {
    pub fn theta1(&self, theta: f64) -> f64 {
        self.mode.eval(theta)
    }

    pub fn theta2(&self, theta: f64) -> f64 {
        self.sign * self.mode.eval(PI - theta)
    }
}

pub fn dirac_angular_pair(m: f64, n: usize) -> Result<DiracAngularPair> {
    let mode = jacobi_eigenfunction(m, n)?;
    let omega = m + n as f64 + 0.5;
    // Θ₂ = (d/dθ − m csc θ)Θ₁ / ω; fix the sign by overlap with the reflected mode
    let overlap = quadrature::integrate(
        |t| (mode.derivative(t) - m / t.sin() * mode.eval(t)) / omega * mode.eval(PI - t),
        0.0,
        PI,
        1e-12,
        1e-12,
        10_000,
    )?;
    Ok(DiracAngularPair {
        mode,
        omega,
        sign: if overlap.value < 0.0 { -1.0 } else { 1.0 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral_numeric::{eigen_smallest, richardson};
    use std::f64::consts::FRAC_PI_2;

    fn binom(top: f64, k: usize) -> f64 {
        (0..k).fold(1.0, |acc, j| acc * (top - j as f64) / (j as f64 + 1.0))
    }

    /// Σ_s C(n+α, n−s) C(n+β, s) ((x−1)/2)^s ((x+1)/2)^{n−s}
    fn jacobi_series(n: usize, alpha: f64, beta: f64, x: f64) -> f64 {
        (0..=n)
            .map(|s| {
                binom(n as f64 + alpha, n - s)
                    * binom(n as f64 + beta, s)
                    * ((x - 1.0) / 2.0).powi(s as i32)
                    * ((x + 1.0) / 2.0).powi((n - s) as i32)
            })
            .sum()
    }

    #[test]
    fn constants_and_superpotential() {
        let s = susy_factorization(1.0);
        assert_eq!((s.a_const, s.b_const), (1.5, 0.5));
        assert!((s.w(FRAC_PI_2).unwrap() - 0.5).abs() < 1e-15);
        assert!((s.v_plus(FRAC_PI_2, Convention::Factorized).unwrap() + 1.25).abs() < 1e-14);
        assert!(s.w(0.0).is_err());
    }

    #[test]
    fn factorized_plus_is_separated_potential_minus_a_squared() {
        let s = susy_factorization(1.7);
        let sep = s.separated_pair();
        for k in 1..50 {
            let t = k as f64 * PI / 50.0;
            let v = s.v_plus(t, Convention::Factorized).unwrap();
            let scale = 1.0 + v.abs();
            assert!((v - (sep.v_plus(t).unwrap() - s.a_const.powi(2))).abs() < 1e-12 * scale);
            let vs = s.v_plus(t, Convention::Separated).unwrap();
            assert!((vs - sep.v_plus(t).unwrap()).abs() < 1e-12 * scale);
        }
    }

    #[test]
    fn shape_invariance() {
        let s = susy_factorization(1.0);
        let up = s.shifted();
        let sep = s.separated_pair();
        let flipped = angular_potentials(-1.0);
        for k in 1..50 {
            let t = k as f64 * PI / 50.0;
            let lhs = s.v_minus(t, Convention::Factorized).unwrap();
            let rhs = up.v_plus(t, Convention::Factorized).unwrap() + s.shape_remainder();
            assert!((lhs - rhs).abs() < 1e-11 * (1.0 + lhs.abs()));
            let a = sep.v_minus(t).unwrap();
            assert!((a - flipped.v_plus(t).unwrap()).abs() < 1e-12 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn spectrum_values() {
        assert_eq!(analytic_spectrum(1.0, 0, Convention::Factorized), 0.0);
        assert_eq!(analytic_spectrum(1.0, 1, Convention::Factorized), 4.0);
        assert_eq!(analytic_spectrum(1.0, 1, Convention::Separated), 6.25);
        for n in 0..6 {
            let g = analytic_spectrum(0.5, n + 1, Convention::Factorized)
                - analytic_spectrum(0.5, n, Convention::Factorized);
            assert!((g - spectral_gap(0.5, n)).abs() < 1e-13);
        }
    }

    #[test]
    fn jacobi_against_series() {
        assert_eq!(jacobi_poly(0, 0.3, 2.0, 0.1).unwrap(), 1.0);
        let p1 = jacobi_poly(1, 0.3, 2.0, 0.1).unwrap();
        assert!((p1 - (1.3 + 4.3 * (0.1 - 1.0) / 2.0)).abs() < 1e-15);
        let v = jacobi_poly(5, 1.0, 2.0, 0.3).unwrap();
        assert!((v - jacobi_series(5, 1.0, 2.0, 0.3)).abs() < 1e-12);
        for n in 0..8 {
            for &x in &[-0.9, -0.2, 0.45, 1.0] {
                let a = jacobi_poly(n, 0.5, 1.5, x).unwrap();
                assert!((a - jacobi_series(n, 0.5, 1.5, x)).abs() < 1e-11 * (1.0 + a.abs()));
            }
        }
        assert!(jacobi_poly(2, -1.0, 0.0, 0.0).is_err());
        assert!(jacobi_poly(2, 0.0, 0.0, 1.5).is_err());
    }

    #[test]
    fn jacobi_derivative_matches_stencil() {
        for n in 1..5 {
            let d = jacobi_derivative(n, 0.5, 1.5, 0.3);
            let fd = crate::calculus::d1(|x| jacobi_unchecked(n, 0.5, 1.5, x), 0.3, 1e-3);
            assert!((d - fd).abs() < 1e-9);
        }
    }

    #[test]
    fn modes_are_normalized_and_vanish_at_ends() {
        for n in 0..5 {
            let mode = jacobi_eigenfunction(1.0, n).unwrap();
            let norm = quadrature::integrate(|t| mode.eval(t).powi(2), 0.0, PI, 1e-12, 1e-12, 5000).unwrap();
            assert!((norm.value - 1.0).abs() < 1e-10);
            assert!(
                (mode.norm_squared_quadrature - mode.norm_squared_closed_form).abs()
                    < 1e-10 * mode.norm_squared_closed_form
            );
            assert!(mode.eval(1e-8).abs() < 1e-3 && mode.eval(PI - 1e-8).abs() < 1e-6);
            assert_eq!(mode.interior_zeros(4000), n);
        }
        let ground = jacobi_eigenfunction(2.0, 0).unwrap();
        assert!(crate::calculus::interior_points(0.0, PI, 100)
            .iter()
            .all(|&t| ground.eval(t) > 0.0));
        assert!(jacobi_eigenfunction(-0.6, 0).is_err());
    }

    #[test]
    fn quoted_normalization_agrees_only_at_unit_m() {
        for n in 0..4 {
            let at_one = jacobi_eigenfunction(1.0, n).unwrap();
            assert!((quoted_normalization(1.0, n) - at_one.norm_squared_closed_form).abs() < 1e-12);
            let at_two = jacobi_eigenfunction(2.0, n).unwrap();
            assert!((quoted_normalization(2.0, n) - at_two.norm_squared_closed_form).abs() > 1e-3);
        }
    }

    #[test]
    fn orthogonality() {
        let modes: Vec<_> = (0..=4).map(|n| jacobi_eigenfunction(1.0, n).unwrap()).collect();
        for i in 0..modes.len() {
            for j in (i + 1)..modes.len() {
                let v =
                    quadrature::integrate(|t| modes[i].eval(t) * modes[j].eval(t), 0.0, PI, 1e-12, 0.0, 5000).unwrap();
                assert!(v.value.abs() < 1e-8, "{i} {j} {}", v.value);
            }
        }
    }

    #[test]
    fn eigen_residual_against_oracle_eigenvalue() {
        let m = 1.0;
        let s = susy_factorization(m);
        let (coarse, _) = s.discretize_pair(1000, Convention::Factorized).unwrap();
        let (fine, _) = s.discretize_pair(2001, Convention::Factorized).unwrap();
        let ec = eigen_smallest(&coarse, 3, false).unwrap().eigenvalues;
        let ef = eigen_smallest(&fine, 3, false).unwrap().eigenvalues;
        for n in 0..3 {
            // grid spacings π/1001 and π/2002
            let lambda = richardson(ec[n], ef[n], 2.0, 2);
            let mode = jacobi_eigenfunction(m, n).unwrap();
            let pts = crate::calculus::interior_points(0.2, PI - 0.2, 400);
            let sup = pts.iter().map(|&t| mode.eval(t).abs()).fold(0.0, f64::max);
            let worst = pts
                .iter()
                .map(|&t| {
                    let d2 = crate::calculus::d2(|x| mode.eval(x), t, 1e-3);
                    (-d2 + s.v_plus(t, Convention::Factorized).unwrap() * mode.eval(t) - lambda * mode.eval(t)).abs()
                })
                .fold(0.0, f64::max);
            assert!(worst / sup < 1e-6, "n = {n}: {}", worst / sup);
        }
    }

    #[test]
    fn intertwining_and_zero_mode() {
        for n in 1..=3 {
            let r = intertwine_check(1.0, n, 2000).unwrap();
            assert!(r.residual < 1e-6, "{n}: {}", r.residual);
            assert!((r.factor.abs() - r.expected_factor).abs() < 1e-8);
        }
        assert!(zero_mode_residual(1.0, 2000).unwrap() < 1e-8);
        assert!(intertwine_check(1.0, 0, 10).is_err());
    }

    #[test]
    fn zero_mode_log_derivative() {
        let mode = jacobi_eigenfunction(1.5, 0).unwrap();
        for t in [0.3, 1.0, 2.2] {
            let from_w = crate::calculus::d1(|x| zero_mode_from_superpotential(1.5, x).ln(), t, 1e-3);
            let from_mode = mode.derivative(t) / mode.eval(t);
            assert!((from_w - from_mode).abs() < 1e-8);
        }
    }

    #[test]
    fn partner_spectra_are_degenerate() {
        let s = susy_factorization(1.0);
        let (plus, minus) = s.discretize_pair(4000, Convention::Factorized).unwrap();
        let ep = eigen_smallest(&plus, 6, false).unwrap().eigenvalues;
        let em = eigen_smallest(&minus, 5, false).unwrap().eigenvalues;
        assert!(ep[0].abs() < 1e-4);
        for k in 0..5 {
            assert!((ep[k + 1] - em[k]).abs() < 1e-4, "{k}: {} {}", ep[k + 1], em[k]);
        }
        for n in 0..4 {
            assert!((ep[n + 1] - ep[n] - spectral_gap(1.0, n)).abs() < 1e-4);
        }
    }

    #[test]
    fn dirac_pair_sign_for_ground_state() {
        let p = dirac_angular_pair(1.0, 0).unwrap();
        assert_eq!(p.sign, -1.0);
        assert_eq!(p.omega, 1.5);
    }
}
