//! Background geometry: the diagonal de Sitter-like metric in (τ, θ, φ), its
//! dreibein, Levi-Civita connection, the fixed 2×2 gamma matrices and the
//! spinor connection Γ_μ.
//!
//! Coordinates are indexed 0 = τ, 1 = θ, 2 = φ. Angles are in radians and the
//! radius ℓ is carried explicitly in every quantity.

use crate::error::{Error, Result};
use nalgebra::Matrix2;
use num_complex::{Complex, Complex64};

/// Points with `|sin θ|` below this are treated as coordinate poles.
pub const POLE_TOLERANCE: f64 = 1e-14;

/// Local Minkowski metric η^{ab} = diag(+1, −1, −1).
pub const MINKOWSKI: [f64; 3] = [1.0, -1.0, -1.0];

pub type SpinMatrix = Matrix2<Complex64>;

pub(crate) fn check_interior(tau: f64, theta: f64) -> Result<()> {
    if !(tau > 0.0) || tau.sinh() == 0.0 {
        return Err(Error::Domain(format!("τ = {tau} must be > 0")));
    }
    if !(theta > 0.0 && theta < std::f64::consts::PI) || theta.sin().abs() < POLE_TOLERANCE {
        return Err(Error::Domain(format!("θ = {theta} is on or beyond a pole")));
    }
    Ok(())
}

fn check_ell(ell: f64) -> Result<()> {
    if ell > 0.0 && ell.is_finite() {
        Ok(())
    } else {
        Err(crate::error::invalid(
            "ell",
            format!("radius must be positive, got {ell}"),
        ))
    }
}

/// Diagonal metric g_μν at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metric3 {
    pub ell: f64,
    pub g00: f64,
    pub g11: f64,
    pub g22: f64,
}

impl Metric3 {
    pub fn diagonal(&self) -> [f64; 3] {
        [self.g00, self.g11, self.g22]
    }

    pub fn determinant(&self) -> f64 {
        self.g00 * self.g11 * self.g22
    }

    /// Inverse metric g^{μν} (diagonal).
    pub fn inverse_diagonal(&self) -> [f64; 3] {
        [1.0 / self.g00, 1.0 / self.g11, 1.0 / self.g22]
    }
}

pub fn metric_at(ell: f64, tau: f64, theta: f64) -> Result<Metric3> {
    check_ell(ell)?;
    check_interior(tau, theta)?;
    let l2 = ell * ell;
    let sh2 = tau.sinh().powi(2);
    Ok(Metric3 {
        ell,
        g00: l2,
        g11: -l2 * sh2,
        g22: -l2 * sh2 * theta.sin().powi(2),
    })
}

/// Analytic partial derivatives ∂_k g_{ij}, indexed `[k][i][j]`.
pub fn metric_derivatives(ell: f64, tau: f64, theta: f64) -> Result<[[[f64; 3]; 3]; 3]> {
    check_ell(ell)?;
    check_interior(tau, theta)?;
    let l2 = ell * ell;
    let (sh, ch) = (tau.sinh(), tau.cosh());
    let (s, c) = theta.sin_cos();
    let mut d = [[[0.0; 3]; 3]; 3];
    d[0][1][1] = -2.0 * l2 * sh * ch;
    d[0][2][2] = -2.0 * l2 * sh * ch * s * s;
    d[1][2][2] = -2.0 * l2 * sh * sh * s * c;
    Ok(d)
}

/// Diagonal dreibein e_a^μ; `frame[a]` is the only nonzero entry of row a.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vierbein {
    pub frame: [f64; 3],
}

impl Vierbein {
    /// Inverse frame (co-frame) e^a_μ.
    pub fn coframe(&self) -> [f64; 3] {
        self.frame.map(|e| 1.0 / e)
    }

    /// g^{μν} = e_a^μ e_b^ν η^{ab}.
    pub fn inverse_metric(&self) -> [[f64; 3]; 3] {
        let mut g = [[0.0; 3]; 3];
        for (mu, row) in g.iter_mut().enumerate() {
            for (nu, entry) in row.iter_mut().enumerate() {
                // e_a^μ is nonzero only for a = μ
                if mu == nu {
                    *entry = self.frame[mu] * self.frame[nu] * MINKOWSKI[mu];
                }
            }
        }
        g
    }
}

pub fn vierbein_at(ell: f64, tau: f64, theta: f64) -> Result<Vierbein> {
    check_ell(ell)?;
    check_interior(tau, theta)?;
    let sh = tau.sinh();
    Ok(Vierbein {
        frame: [1.0 / ell, 1.0 / (ell * sh), 1.0 / (ell * sh * theta.sin())],
    })
}

/// Analytic ∂_μ e^a_ν of the co-frame, indexed `[mu][a][nu]`.
pub fn coframe_derivatives(ell: f64, tau: f64, theta: f64) -> Result<[[[f64; 3]; 3]; 3]> {
    check_ell(ell)?;
    check_interior(tau, theta)?;
    let (sh, ch) = (tau.sinh(), tau.cosh());
    let (s, c) = theta.sin_cos();
    let mut d = [[[0.0; 3]; 3]; 3];
    d[0][1][1] = ell * ch;
    d[0][2][2] = ell * ch * s;
    d[1][2][2] = ell * sh * c;
    Ok(d)
}

/// Christoffel symbols Γ^ρ_{νμ}, indexed `[rho][nu][mu]`.
pub type Christoffel = [[[f64; 3]; 3]; 3];

/// Levi-Civita connection of the metric from its analytic derivatives:
/// Γ^ρ_{νμ} = ½ g^{ρσ} (∂_ν g_{σμ} + ∂_μ g_{σν} − ∂_σ g_{νμ}).
pub fn christoffel_at(ell: f64, tau: f64, theta: f64) -> Result<Christoffel> {
    let g = metric_at(ell, tau, theta)?;
    let dg = metric_derivatives(ell, tau, theta)?;
    Ok(levi_civita(&g.inverse_diagonal(), &dg))
}

pub(crate) fn levi_civita(ginv_diag: &[f64; 3], dg: &[[[f64; 3]; 3]; 3]) -> Christoffel {
    let mut gamma = [[[0.0; 3]; 3]; 3];
    for (rho, plane) in gamma.iter_mut().enumerate() {
        for (nu, row) in plane.iter_mut().enumerate() {
            for (mu, entry) in row.iter_mut().enumerate() {
                let sigma = rho;
                *entry = 0.5 * ginv_diag[rho] * (dg[nu][sigma][mu] + dg[mu][sigma][nu] - dg[sigma][nu][mu]);
            }
        }
    }
    gamma
}

/// The constant gamma matrices γ⁰ = σ³, γ¹ = iσ¹, γ² = iσ².
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSet {
    pub gamma: [SpinMatrix; 3],
}

impl Default for GammaSet {
    fn default() -> Self {
        Self::standard()
    }
}

fn c(re: i64, im: i64) -> Complex<i64> {
    Complex::new(re, im)
}

impl GammaSet {
    /// The representation with Gaussian-integer entries.
    pub fn integer() -> [Matrix2<Complex<i64>>; 3] {
        [
            Matrix2::new(c(1, 0), c(0, 0), c(0, 0), c(-1, 0)),
            Matrix2::new(c(0, 0), c(0, 1), c(0, 1), c(0, 0)),
            Matrix2::new(c(0, 0), c(1, 0), c(-1, 0), c(0, 0)),
        ]
    }

    pub fn standard() -> Self {
        let to_f64 = |m: &Matrix2<Complex<i64>>| m.map(|z| Complex64::new(z.re as f64, z.im as f64));
        let g = Self::integer();
        Self {
            gamma: [to_f64(&g[0]), to_f64(&g[1]), to_f64(&g[2])],
        }
    }

    /// Checks {γ^a, γ^b} = 2η^{ab} I₂ for all pairs in Gaussian-integer arithmetic.
    pub fn clifford_holds_exactly() -> bool {
        let g = Self::integer();
        let identity = Matrix2::<Complex<i64>>::identity();
        (0..3).all(|a| {
            (0..3).all(|b| {
                let anti = g[a] * g[b] + g[b] * g[a];
                let eta = if a == b { 2 * MINKOWSKI[a] as i64 } else { 0 };
                anti == identity * c(eta, 0)
            })
        })
    }

    /// For each γ^a, the sign s with γ^{a†} = s γ^a.
    ///
    /// The fixed representation gives (+1, −1, −1); the adjoint of γ⁰ is not
    /// forced to −γ⁰.
    pub fn adjoint_signs(&self) -> [f64; 3] {
        self.gamma.map(|g| {
            let adj = g.adjoint();
            if (adj - g).norm() < 1e-15 {
                1.0
            } else if (adj + g).norm() < 1e-15 {
                -1.0
            } else {
                f64::NAN
            }
        })
    }

    /// Product γ^a γ^b.
    pub fn product(&self, a: usize, b: usize) -> SpinMatrix {
        self.gamma[a] * self.gamma[b]
    }
}

/// Γ₀, Γ₁, Γ₂ at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinConnectionValues {
    pub components: [SpinMatrix; 3],
}

impl SpinConnectionValues {
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .flat_map(|(a, b)| (a - b).iter().map(|z| z.norm()).collect::<Vec<_>>())
            .fold(0.0, f64::max)
    }
}

/// Γ_μ = ¼ g_{λρ} (∂_μ e^a_ν e_a^ρ − Γ^ρ_{νμ}) S^{λν} with
/// S^{λν} = ½[γ^λ(x), γ^ν(x)] and γ^μ(x) = e_a^μ γ^a.
pub fn spin_connection_at(ell: f64, tau: f64, theta: f64, gammas: &GammaSet) -> Result<SpinConnectionValues> {
    let g = metric_at(ell, tau, theta)?.diagonal();
    let frame = vierbein_at(ell, tau, theta)?.frame;
    let dcoframe = coframe_derivatives(ell, tau, theta)?;
    let chris = christoffel_at(ell, tau, theta)?;
    Ok(spin_connection_from_parts(&g, &frame, &dcoframe, &chris, gammas))
}

pub(crate) fn spin_connection_from_parts(
    g: &[f64; 3],
    frame: &[f64; 3],
    dcoframe: &[[[f64; 3]; 3]; 3],
    chris: &Christoffel,
    gammas: &GammaSet,
) -> SpinConnectionValues {
    let curved: [SpinMatrix; 3] = std::array::from_fn(|mu| gammas.gamma[mu] * Complex64::from(frame[mu]));
    let spin = |l: usize, n: usize| (curved[l] * curved[n] - curved[n] * curved[l]) * Complex64::from(0.5);

    let components = std::array::from_fn(|mu| {
        let mut total = SpinMatrix::zeros();
        for lambda in 0..3 {
            // g_{λρ} is diagonal, so ρ = λ
            let rho = lambda;
            for nu in 0..3 {
                // e_a^ρ is nonzero only for a = ρ
                let transport = dcoframe[mu][rho][nu] * frame[rho];
                let coeff = 0.25 * g[lambda] * (transport - chris[rho][nu][mu]);
                if coeff != 0.0 {
                    total += spin(lambda, nu) * Complex64::from(coeff);
                }
            }
        }
        total
    });
    SpinConnectionValues { components }
}

/// Closed forms Γ₀ = 0, Γ₁ = −½ cosh τ γ⁰γ¹,
/// Γ₂ = −½ (cosh τ sin θ γ⁰γ² + cos θ γ¹γ²).
pub fn spin_connection_closed_form(tau: f64, theta: f64, gammas: &GammaSet) -> Result<SpinConnectionValues> {
    check_interior(tau, theta)?;
    let ch = tau.cosh();
    let (s, c) = theta.sin_cos();
    let half = Complex64::from(-0.5);
    Ok(SpinConnectionValues {
        components: [
            SpinMatrix::zeros(),
            gammas.product(0, 1) * (half * ch),
            (gammas.product(0, 2) * Complex64::from(ch * s) + gammas.product(1, 2) * Complex64::from(c)) * half,
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    fn asinh1() -> f64 {
        1f64.asinh()
    }

    #[test]
    fn metric_substitutions() {
        let m = metric_at(1.0, asinh1(), FRAC_PI_2).unwrap();
        assert!((m.g00 - 1.0).abs() < 1e-15);
        assert!((m.g11 + 1.0).abs() < 1e-15);
        assert!((m.g22 + 1.0).abs() < 1e-15);

        let m = metric_at(2.0, 1.0, FRAC_PI_2).unwrap();
        let sh2 = 1f64.sinh().powi(2);
        assert_eq!(m.g00, 4.0);
        assert!((m.g11 + 4.0 * sh2).abs() < 1e-14);
        assert!((m.g22 + 4.0 * sh2).abs() < 1e-14);
        assert!(m.determinant() > 0.0);
    }

    #[test]
    fn metric_against_exponential_form() {
        // sinh via exponentials, sin² via 1 − cos²
        let (tau, theta) = (0.7f64, 0.9f64);
        let sh = 0.5 * (tau.exp() - (-tau).exp());
        let s2 = 1.0 - theta.cos().powi(2);
        let m = metric_at(1.0, tau, theta).unwrap();
        assert!((m.g11 + sh * sh).abs() < 1e-15);
        assert!((m.g22 + sh * sh * s2).abs() < 1e-15);
    }

    #[test]
    fn poles_and_tau_zero_rejected() {
        assert!(matches!(metric_at(1.0, 0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(metric_at(1.0, 1.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(vierbein_at(1.0, 1.0, PI), Err(Error::Domain(_))));
        assert!(matches!(christoffel_at(1.0, -0.1, 1.0), Err(Error::Domain(_))));
        assert!(metric_at(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn vierbein_values() {
        let e = vierbein_at(1.0, asinh1(), FRAC_PI_2).unwrap();
        for v in e.frame {
            assert!((v - 1.0).abs() < 1e-15);
        }
        let e = vierbein_at(2.0, 1.0, FRAC_PI_3).unwrap();
        let sh = 1f64.sinh();
        assert!((e.frame[0] - 0.5).abs() < 1e-15);
        assert!((e.frame[1] - 1.0 / (2.0 * sh)).abs() < 1e-15);
        assert!((e.frame[2] - 1.0 / (2.0 * sh * FRAC_PI_3.sin())).abs() < 1e-15);
    }

    #[test]
    fn christoffel_symmetry_and_distinct_indices() {
        let chris = christoffel_at(1.3, 0.8, 1.1).unwrap();
        for (rho, plane) in chris.iter().enumerate() {
            for nu in 0..3 {
                for mu in 0..3 {
                    assert_eq!(plane[nu][mu], plane[mu][nu]);
                    if rho != nu && nu != mu && rho != mu {
                        assert_eq!(plane[nu][mu], 0.0);
                    }
                }
            }
        }
        let (sh, ch) = (0.8f64.sinh(), 0.8f64.cosh());
        assert!((chris[0][1][1] - sh * ch).abs() < 1e-14);
    }

    #[test]
    fn clifford_algebra_exact() {
        assert!(GammaSet::clifford_holds_exactly());
    }

    #[test]
    fn adjoint_signs_of_fixed_representation() {
        assert_eq!(GammaSet::standard().adjoint_signs(), [1.0, -1.0, -1.0]);
    }

    #[test]
    fn gamma0_vanishes_and_traceless() {
        let gs = GammaSet::standard();
        let sc = spin_connection_at(1.7, 0.4, 2.0, &gs).unwrap();
        assert_eq!(sc.components[0], SpinMatrix::zeros());
        for m in &sc.components {
            assert!(m.trace().norm() < 1e-15);
        }
    }

    #[test]
    fn gamma2_at_equator() {
        let gs = GammaSet::standard();
        let tau = 0.9;
        let sc = spin_connection_at(1.0, tau, FRAC_PI_2, &gs).unwrap();
        let expected = gs.product(0, 2) * Complex64::from(-0.5 * tau.cosh());
        assert!((sc.components[2] - expected).norm() < 1e-14);
    }

    #[test]
    fn gamma1_at_unit_sinh() {
        let gs = GammaSet::standard();
        let expected = gs.product(0, 1) * Complex64::from(-std::f64::consts::SQRT_2 / 2.0);
        for theta in [0.3, 1.0, 2.5] {
            let sc = spin_connection_at(1.0, asinh1(), theta, &gs).unwrap();
            assert!((sc.components[1] - expected).norm() < 1e-14);
            let cf = spin_connection_closed_form(asinh1(), theta, &gs).unwrap();
            assert!((cf.components[1] - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn gamma2_reflection_parity() {
        // θ → π − θ: the cos θ term flips sign, the cosh τ sin θ term does not
        let gs = GammaSet::standard();
        let (tau, theta) = (0.6, 0.7);
        let a = spin_connection_closed_form(tau, theta, &gs).unwrap().components[2];
        let b = spin_connection_closed_form(tau, PI - theta, &gs).unwrap().components[2];
        let even = (a + b) * Complex64::from(0.5);
        let odd = (a - b) * Complex64::from(0.5);
        let even_expected = gs.product(0, 2) * Complex64::from(-0.5 * tau.cosh() * theta.sin());
        let odd_expected = gs.product(1, 2) * Complex64::from(-0.5 * theta.cos());
        assert!((even - even_expected).norm() < 1e-14);
        assert!((odd - odd_expected).norm() < 1e-14);
    }
}
