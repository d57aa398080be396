//! Separated Dirac equations: the θ-dependent gauge, angular and temporal
//! potentials, residuals of the first-order separated system and assembly of
//! the two-component spinor.

use crate::calculus;
use crate::error::{invalid, Error, Result};
use crate::geometry::POLE_TOLERANCE;
use num_complex::Complex64;

fn check_theta(theta: f64) -> Result<f64> {
    let s = theta.sin();
    if s.abs() < POLE_TOLERANCE {
        return Err(Error::Domain(format!("θ = {theta} is a pole")));
    }
    Ok(s)
}

/// The gauge A₁(θ) = i cot θ / (2e) that turns the angular equations into
/// Schrödinger form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeChoice {
    pub charge: f64,
}

impl GaugeChoice {
    pub fn new(charge: f64) -> Result<Self> {
        if charge == 0.0 || !charge.is_finite() {
            return Err(invalid("charge", "must be nonzero and finite"));
        }
        Ok(Self { charge })
    }

    pub fn a1(&self, theta: f64) -> Result<Complex64> {
        let s = check_theta(theta)?;
        Ok(Complex64::new(0.0, theta.cos() / s / (2.0 * self.charge)))
    }

    /// e·A₁(θ) = i cot θ / 2, independent of the charge.
    pub fn e_a1(&self, theta: f64) -> Result<Complex64> {
        Ok(self.a1(theta)? * self.charge)
    }

    /// ∂A₁/∂θ = −i csc²θ / (2e).
    pub fn da1(&self, theta: f64) -> Result<Complex64> {
        let s = check_theta(theta)?;
        Ok(Complex64::new(0.0, -1.0 / (s * s) / (2.0 * self.charge)))
    }
}

/// Coefficients of the second-order angular equation
/// −Θ″ + c₁ Θ′ + c₀ Θ = ω² Θ for one spinor component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularCoefficients {
    pub first_derivative: Complex64,
    pub potential: Complex64,
}

/// Spinor component label; the temporal sign ε is −1 for the first and +1
/// for the second component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    One,
    Two,
}

impl Component {
    pub fn eps(self) -> f64 {
        match self {
            Component::One => -1.0,
            Component::Two => 1.0,
        }
    }

    pub fn from_index(k: u8) -> Result<Self> {
        match k {
            1 => Ok(Component::One),
            2 => Ok(Component::Two),
            _ => Err(invalid("k", format!("component must be 1 or 2, got {k}"))),
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Component::One => 1,
            Component::Two => 2,
        }
    }
}

/// General second-order angular coefficients for an arbitrary θ-gauge, before
/// any gauge is fixed:
///
/// c₁ = −2ieA₁ − cot θ,
/// c₀ = (eA₁ − i cot θ/2)² ∓ m cot θ csc θ + (m² + ½) csc²θ − ie ∂A₁/∂θ,
///
/// with the upper sign for the first component.
pub fn angular_coefficients(
    m: f64,
    gauge: &GaugeChoice,
    theta: f64,
    component: Component,
) -> Result<AngularCoefficients> {
    let s = check_theta(theta)?;
    let cot = theta.cos() / s;
    let csc = 1.0 / s;
    let i = Complex64::i();
    let ea = gauge.e_a1(theta)?;
    let sign = -component.eps();
    let shifted = ea - i * (cot / 2.0);
    Ok(AngularCoefficients {
        first_derivative: -2.0 * i * ea - cot,
        potential: shifted * shifted - sign * m * cot * csc + (m * m + 0.5) * csc * csc
            - i * gauge.charge * gauge.da1(theta)?,
    })
}

/// V±(θ) = ∓m cot θ csc θ + m² csc²θ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularPotentialPair {
    pub m: f64,
}

pub fn angular_potentials(m: f64) -> AngularPotentialPair {
    AngularPotentialPair { m }
}

impl AngularPotentialPair {
    pub fn v_plus(&self, theta: f64) -> Result<f64> {
        let s = check_theta(theta)?;
        let (cot, csc) = (theta.cos() / s, 1.0 / s);
        Ok(-self.m * cot * csc + self.m * self.m * csc * csc)
    }

    pub fn v_minus(&self, theta: f64) -> Result<f64> {
        let s = check_theta(theta)?;
        let (cot, csc) = (theta.cos() / s, 1.0 / s);
        Ok(self.m * cot * csc + self.m * self.m * csc * csc)
    }
}

/// U_k(τ) = ¼ − ℓ²M² + ε iℓM coth τ − (ω² + ¼) csch²τ, so that the temporal
/// equation reads −y″ + U_k y = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemporalPotential {
    pub ell_m: f64,
    pub omega2: f64,
    pub component: Component,
}

pub fn temporal_potential(ell_m: f64, omega2: f64, component: Component) -> TemporalPotential {
    TemporalPotential {
        ell_m,
        omega2,
        component,
    }
}

impl TemporalPotential {
    pub fn eval(&self, tau: f64) -> Result<Complex64> {
        let sh = tau.sinh();
        if sh == 0.0 || !tau.is_finite() {
            return Err(Error::Domain(format!("τ = {tau}: csch τ is singular")));
        }
        let coth = tau.cosh() / sh;
        let csch2 = 1.0 / (sh * sh);
        let x = self.ell_m;
        Ok(Complex64::new(
            0.25 - x * x - (self.omega2 + 0.25) * csch2,
            self.component.eps() * x * coth,
        ))
    }

    /// Limit τ → ∞ (coth → 1, csch → 0).
    pub fn asymptotic(&self) -> Complex64 {
        let x = self.ell_m;
        Complex64::new(0.25 - x * x, self.component.eps() * x)
    }
}

/// The four functions of a separated solution ψ₁ = T₁Y₁, ψ₂ = T₂Y₂.
pub struct SeparatedFields<'a> {
    pub t1: &'a dyn Fn(f64) -> Complex64,
    pub t2: &'a dyn Fn(f64) -> Complex64,
    pub theta1: &'a dyn Fn(f64) -> Complex64,
    pub theta2: &'a dyn Fn(f64) -> Complex64,
}

/// Residuals of the four first-order separated equations (ω₁ = ω₂ = ω).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderResidual {
    /// (∂τ + coth τ + iℓM) T₁ − iω csch τ T₂
    pub temporal_1: f64,
    /// −(∂τ + coth τ − iℓM) T₂ + iω csch τ T₁
    pub temporal_2: f64,
    /// (−∂θ − cot θ/2 − m csc θ − ieA₁) Θ₂ − ω Θ₁
    pub angular_2: f64,
    /// (∂θ + cot θ/2 − m csc θ + ieA₁) Θ₁ − ω Θ₂
    pub angular_1: f64,
}

impl FirstOrderResidual {
    pub fn max(&self) -> f64 {
        self.temporal_1
            .max(self.temporal_2)
            .max(self.angular_1)
            .max(self.angular_2)
    }
}

fn uniform_spacing(grid: &[f64], name: &'static str) -> Result<f64> {
    if grid.len() < 5 {
        return Err(invalid(name, "need at least 5 points"));
    }
    let h = grid[1] - grid[0];
    if !(h > 0.0) {
        return Err(invalid(name, "grid must be increasing"));
    }
    Ok(h)
}

/// Max-norm residuals of the separated first-order system on uniform interior
/// grids. Derivatives use the fourth-order central stencil with the grid
/// spacing as step; the two outermost points on each side are excluded.
#[allow(clippy::too_many_arguments)]
pub fn first_order_residual(
    fields: &SeparatedFields<'_>,
    m: f64,
    omega: f64,
    ell_m: f64,
    gauge: &GaugeChoice,
    tau_grid: &[f64],
    theta_grid: &[f64],
) -> Result<FirstOrderResidual> {
    let i = Complex64::i();
    let mut out = FirstOrderResidual {
        temporal_1: 0.0,
        temporal_2: 0.0,
        angular_1: 0.0,
        angular_2: 0.0,
    };

    if !tau_grid.is_empty() {
        let h = uniform_spacing(tau_grid, "tau_grid")?;
        if tau_grid[0] - 2.0 * h <= 0.0 {
            // stencil would reach τ ≤ 0
            return Err(Error::Domain("τ grid too close to 0".into()));
        }
        for &tau in &tau_grid[2..tau_grid.len() - 2] {
            let (sh, ch) = (tau.sinh(), tau.cosh());
            let coth = ch / sh;
            let (t1, t2) = ((fields.t1)(tau), (fields.t2)(tau));
            let dt1 = calculus::d1(fields.t1, tau, h);
            let dt2 = calculus::d1(fields.t2, tau, h);
            let r1 = dt1 + (coth + i * ell_m) * t1 - i * omega / sh * t2;
            let r2 = -(dt2 + (coth - i * ell_m) * t2) + i * omega / sh * t1;
            out.temporal_1 = out.temporal_1.max(r1.norm());
            out.temporal_2 = out.temporal_2.max(r2.norm());
        }
    }

    if !theta_grid.is_empty() {
        let h = uniform_spacing(theta_grid, "theta_grid")?;
        let lo = theta_grid[0] - 2.0 * h;
        let hi = theta_grid[theta_grid.len() - 1] + 2.0 * h;
        if lo <= 0.0 || hi >= std::f64::consts::PI {
            return Err(Error::Domain("θ grid touches a pole".into()));
        }
        for &theta in &theta_grid[2..theta_grid.len() - 2] {
            let s = check_theta(theta)?;
            let (cot, csc) = (theta.cos() / s, 1.0 / s);
            let iea = i * gauge.e_a1(theta)?;
            let (th1, th2) = ((fields.theta1)(theta), (fields.theta2)(theta));
            let d_th1 = calculus::d1(fields.theta1, theta, h);
            let d_th2 = calculus::d1(fields.theta2, theta, h);
            let r2 = -d_th2 + (-cot / 2.0 - m * csc - iea) * th2 - omega * th1;
            let r1 = d_th1 + (cot / 2.0 - m * csc + iea) * th1 - omega * th2;
            out.angular_1 = out.angular_1.max(r1.norm());
            out.angular_2 = out.angular_2.max(r2.norm());
        }
    }
    Ok(out)
}

/// ψ₁ = T₁(τ) e^{imφ} Θ₁(θ), ψ₂ = T₂(τ) e^{imφ} Θ₂(θ).
pub struct SpinorField<T1, T2, A1, A2> {
    pub t1: T1,
    pub t2: T2,
    pub theta1: A1,
    pub theta2: A2,
    pub m: f64,
}

pub fn assemble_spinor<T1, T2, A1, A2>(t1: T1, t2: T2, theta1: A1, theta2: A2, m: f64) -> SpinorField<T1, T2, A1, A2>
where
    T1: Fn(f64) -> Complex64,
    T2: Fn(f64) -> Complex64,
    A1: Fn(f64) -> Complex64,
    A2: Fn(f64) -> Complex64,
{
    SpinorField {
        t1,
        t2,
        theta1,
        theta2,
        m,
    }
}

impl<T1, T2, A1, A2> SpinorField<T1, T2, A1, A2>
where
    T1: Fn(f64) -> Complex64,
    T2: Fn(f64) -> Complex64,
    A1: Fn(f64) -> Complex64,
    A2: Fn(f64) -> Complex64,
{
    pub fn eval(&self, tau: f64, theta: f64, phi: f64) -> [Complex64; 2] {
        let phase = Complex64::from_polar(1.0, self.m * phi);
        [
            (self.t1)(tau) * phase * (self.theta1)(theta),
            (self.t2)(tau) * phase * (self.theta2)(theta),
        ]
    }
}
