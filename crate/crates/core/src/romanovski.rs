//! Romanovski polynomials and the time-dependent part of the Dirac solution.
//!
//! R_ν̄^{(a,b)} solves (1 + x²) R″ + (2bx + a) R′ − ν̄(ν̄ − 1 + 2b) R = 0 and is
//! built monic by a downward coefficient recurrence. Under the weight
//! (1 + x²)^{b−1} e^{a arctan x} only finitely many of them are square
//! integrable, which is why [`orthogonality_integral`] refuses pairs outside
//! the convergence region.

use crate::calculus;
use crate::error::{invalid, Error, Result};
use crate::quadrature;
use crate::separation::Component;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::f64::consts::FRAC_PI_2;

/// The constants that turn the transformed temporal equation into the
/// Romanovski equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelConstants {
    pub ell_m: f64,
    pub eps: f64,
    pub a_big: f64,
    pub b_big: f64,
    pub a1: f64,
}

impl ModelConstants {
    /// Romanovski parameters (a, b) = (−2B, ½ − A).
    pub fn romanovski_params(&self) -> (f64, f64) {
        (-2.0 * self.b_big, 0.5 - self.a_big)
    }

    pub fn component(&self) -> Component {
        if self.eps < 0.0 {
            Component::One
        } else {
            Component::Two
        }
    }
}

/// a₁ = √((1 + 4ℓ²M²)² + 16ℓ²M²).
pub fn a1_of(ell_m: f64) -> f64 {
    let x2 = ell_m * ell_m;
    ((1.0 + 4.0 * x2).powi(2) + 16.0 * x2).sqrt()
}

pub fn model_constants(ell_m: f64, eps: f64) -> Result<ModelConstants> {
    if ell_m == 0.0 || !ell_m.is_finite() {
        return Err(invalid("ell_m", "ℓM must be nonzero and finite"));
    }
    if eps != 1.0 && eps != -1.0 {
        return Err(invalid("eps", format!("must be ±1, got {eps}")));
    }
    let x = ell_m;
    let x2 = x * x;
    let a1 = a1_of(x);
    // a1 ≥ 1 + 4x² analytically; clamp round-off
    let gap = (a1 - 1.0 - 4.0 * x2).max(0.0);
    let root = gap.sqrt();
    let sqrt2 = std::f64::consts::SQRT_2;
    let a_big = (-8.0 * x * eps + 4.0 * sqrt2 * x2 * root + sqrt2 * (1.0 + a1) * root) / (16.0 * x * eps);
    let b_big = ((a1 - 1.0) / 8.0 - 0.5 * x2).max(0.0).sqrt();
    Ok(ModelConstants {
        ell_m,
        eps,
        a_big,
        b_big,
        a1,
    })
}

/// Monic Romanovski polynomial with floating-point coefficients, lowest power first.
#[derive(Debug, Clone, PartialEq)]
pub struct RomanovskiPoly {
    pub degree: usize,
    pub a: f64,
    pub b: f64,
    pub coeffs: Vec<f64>,
}

impl RomanovskiPoly {
    pub fn eigen_term(&self) -> f64 {
        let n = self.degree as f64;
        // + 0.0 turns the degree-0 value −0 into 0
        n * (n - 1.0 + 2.0 * self.b) + 0.0
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative_coeffs(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| k as f64 * c)
            .collect()
    }

    /// Coefficients of (1+x²)R″ + (2bx+a)R′ − ν̄(ν̄−1+2b)R, lowest power first.
    pub fn ode_residual_coeffs(&self) -> Vec<f64> {
        let n = self.coeffs.len();
        let c = |k: usize| self.coeffs.get(k).copied().unwrap_or(0.0);
        let lambda = self.eigen_term();
        (0..n)
            .map(|k| {
                let kf = k as f64;
                (kf + 2.0) * (kf + 1.0) * c(k + 2)
                    + kf * (kf - 1.0) * c(k)
                    + 2.0 * self.b * kf * c(k)
                    + self.a * (kf + 1.0) * c(k + 1)
                    - lambda * c(k)
            })
            .collect()
    }
}

fn check_denominator(k: usize, degree: usize, denom_is_zero: bool) -> Result<()> {
    if denom_is_zero {
        Err(Error::Degenerate { k, degree })
    } else {
        Ok(())
    }
}

/// Builds R_ν̄^{(a,b)} by equating coefficients from the leading power down:
/// c_ν̄ = 1 and c_k = −[(k+2)(k+1)c_{k+2} + a(k+1)c_{k+1}] / [k(k−1+2b) − ν̄(ν̄−1+2b)].
pub fn romanovski_poly(nubar: usize, a: f64, b: f64) -> Result<RomanovskiPoly> {
    let nf = nubar as f64;
    let lambda = nf * (nf - 1.0 + 2.0 * b);
    let mut coeffs = vec![0.0; nubar + 1];
    coeffs[nubar] = 1.0;
    for k in (0..nubar).rev() {
        let kf = k as f64;
        let denom = kf * (kf - 1.0 + 2.0 * b) - lambda;
        let scale = lambda.abs().max(1.0);
        check_denominator(k, nubar, denom.abs() <= 1e-13 * scale)?;
        let c2 = coeffs.get(k + 2).copied().unwrap_or(0.0);
        let c1 = coeffs[k + 1];
        coeffs[k] = -((kf + 2.0) * (kf + 1.0) * c2 + a * (kf + 1.0) * c1) / denom;
    }
    Ok(RomanovskiPoly {
        degree: nubar,
        a,
        b,
        coeffs,
    })
}

/// Exact-arithmetic Romanovski polynomial for rational (a, b).
#[derive(Debug, Clone, PartialEq)]
pub struct ExactRomanovski {
    pub degree: usize,
    pub a: BigRational,
    pub b: BigRational,
    pub coeffs: Vec<BigRational>,
}

fn rat(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn romanovski_poly_exact(nubar: usize, a: &BigRational, b: &BigRational) -> Result<ExactRomanovski> {
    let two = rat(2);
    let eigen = |k: usize| rat(k) * (rat(k) - BigRational::one() + &two * b);
    let lambda = eigen(nubar);
    let mut coeffs = vec![BigRational::zero(); nubar + 1];
    coeffs[nubar] = BigRational::one();
    for k in (0..nubar).rev() {
        let denom = eigen(k) - &lambda;
        check_denominator(k, nubar, denom.is_zero())?;
        let c2 = coeffs.get(k + 2).cloned().unwrap_or_else(BigRational::zero);
        let numer = rat(k + 2) * rat(k + 1) * c2 + a * rat(k + 1) * &coeffs[k + 1];
        coeffs[k] = -numer / denom;
    }
    Ok(ExactRomanovski {
        degree: nubar,
        a: a.clone(),
        b: b.clone(),
        coeffs,
    })
}

impl ExactRomanovski {
    /// Coefficients of the ODE left-hand side, computed by explicit polynomial
    /// differentiation and multiplication (not by the recurrence).
    pub fn ode_residual(&self) -> Vec<BigRational> {
        let deriv =
            |p: &[BigRational]| -> Vec<BigRational> { p.iter().enumerate().skip(1).map(|(k, c)| rat(k) * c).collect() };
        let add_into = |acc: &mut Vec<BigRational>, shift: usize, p: &[BigRational], scale: &BigRational| {
            for (k, c) in p.iter().enumerate() {
                if acc.len() <= k + shift {
                    acc.resize(k + shift + 1, BigRational::zero());
                }
                acc[k + shift] += c * scale;
            }
        };
        let one = BigRational::one();
        let two = rat(2);
        let r1 = deriv(&self.coeffs);
        let r2 = deriv(&r1);
        let lambda = rat(self.degree) * (rat(self.degree) - &one + &two * &self.b);
        let mut out = Vec::new();
        add_into(&mut out, 0, &r2, &one);
        add_into(&mut out, 2, &r2, &one);
        add_into(&mut out, 1, &r1, &(&two * &self.b));
        add_into(&mut out, 0, &r1, &self.a);
        add_into(&mut out, 0, &self.coeffs, &(-lambda));
        out
    }

    pub fn to_f64(&self) -> RomanovskiPoly {
        let f = |r: &BigRational| {
            use num_traits::ToPrimitive;
            r.to_f64().unwrap_or(f64::NAN)
        };
        RomanovskiPoly {
            degree: self.degree,
            a: f(&self.a),
            b: f(&self.b),
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

/// w(z) = (1 + z²)^{b−1} exp(a arctan z).
pub fn romanovski_weight(z: f64, a: f64, b: f64) -> f64 {
    (1.0 + z * z).powf(b - 1.0) * (a * z.atan()).exp()
}

/// ∫ w R_{ν₁} R_{ν₂} over the real line is finite iff ν₁ + ν₂ + 2(b − 1) < −1.
pub fn orthogonality_converges(nu1: usize, nu2: usize, b: f64) -> bool {
    (nu1 + nu2) as f64 + 2.0 * (b - 1.0) < -1.0
}

/// Absolute tolerance of the orthogonality quadrature.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// ∫_{−∞}^{∞} w(z) R_{ν₁}(z) R_{ν₂}(z) dz, integrated in u with z = tan u.
pub fn orthogonality_integral(nu1: usize, nu2: usize, a: f64, b: f64) -> Result<f64> {
    if !orthogonality_converges(nu1, nu2, b) {
        return Err(Error::Divergent(format!(
            "ν₁ + ν₂ + 2(b − 1) = {} ≥ −1 for (ν₁, ν₂, b) = ({nu1}, {nu2}, {b})",
            (nu1 + nu2) as f64 + 2.0 * (b - 1.0)
        )));
    }
    let p1 = romanovski_poly(nu1, a, b)?;
    let p2 = romanovski_poly(nu2, a, b)?;
    // w(tan u) sec²u = cos^{−2b} u · e^{a u}. The endpoints u = ±π/2 carry
    // an integrable power singularity that floating-point u cannot resolve
    // (the last ulp alone holds ~1e−8 of the integral), so substitute
    // u = ±(π/2 − t²): cos u = sin t², z = ±cot t², du = 2t dt.
    let integrand = |t: f64| {
        let t2 = t * t;
        let (st, ct) = t2.sin_cos();
        if st <= 0.0 {
            return 0.0;
        }
        let cz = ct / st;
        let common = 2.0 * t * st.powf(-2.0 * b);
        let upper = (a * (FRAC_PI_2 - t2)).exp() * p1.eval(cz) * p2.eval(cz);
        let lower = (a * (t2 - FRAC_PI_2)).exp() * p1.eval(-cz) * p2.eval(-cz);
        common * (upper + lower)
    };
    let r = quadrature::integrate(integrand, 0.0, FRAC_PI_2.sqrt(), ORTHOGONALITY_TOL, 1e-14, 20_000)?;
    Ok(r.value)
}

/// How τ is mapped to the real variable z.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TauMap {
    /// z = cot τ on τ ∈ (0, π); this is what i·coth(iτ) reduces to.
    Cot,
    /// z = coth τ on τ > 0. The transformed equation then does not follow
    /// from the temporal one; flagged by [`TauMap::is_caveat`].
    Coth,
}

impl TauMap {
    pub fn z_of_tau(self, tau: f64) -> Result<f64> {
        match self {
            TauMap::Cot => {
                if !(tau > 0.0 && tau < std::f64::consts::PI) {
                    return Err(Error::Domain(format!("cot map needs τ ∈ (0, π), got {tau}")));
                }
                Ok(tau.cos() / tau.sin())
            }
            TauMap::Coth => {
                if !(tau > 0.0) {
                    return Err(Error::Domain(format!("coth map needs τ > 0, got {tau}")));
                }
                Ok(tau.cosh() / tau.sinh())
            }
        }
    }

    pub fn is_caveat(self) -> bool {
        matches!(self, TauMap::Coth)
    }

    pub fn name(self) -> &'static str {
        match self {
            TauMap::Cot => "cot",
            TauMap::Coth => "coth",
        }
    }
}

impl std::str::FromStr for TauMap {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cot" => Ok(TauMap::Cot),
            "coth" => Ok(TauMap::Coth),
            other => Err(invalid("map", format!("expected `cot` or `coth`, got `{other}`"))),
        }
    }
}

/// ỹ(z) = (z+i)^{−(A+iB)/2} (z−i)^{−(A−iB)/2} R_ν̄^{(a,b)}(z) and the derived
/// T_k(τ) = csch^{3/2}τ · (1+z²)^{−1/4} ỹ(z(τ)).
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSolution {
    pub component: Component,
    pub nubar: usize,
    pub constants: ModelConstants,
    pub poly: RomanovskiPoly,
    /// ω² fixed by A² − ω² = −ν̄(ν̄ − 1 + 2b).
    pub omega2: f64,
    pub map: TauMap,
}

fn principal_pow(base: Complex64, exponent: Complex64) -> Result<Complex64> {
    if base.norm() == 0.0 || !base.re.is_finite() || !base.im.is_finite() {
        return Err(Error::BranchCut(format!("branch point reached at base {base}")));
    }
    Ok((exponent * base.ln()).exp())
}

pub fn time_solution(
    component: Component,
    nubar: usize,
    constants: &ModelConstants,
    map: TauMap,
) -> Result<TimeSolution> {
    if component.eps() != constants.eps {
        return Err(invalid(
            "k",
            format!(
                "component {} needs ε = {}, constants carry ε = {}",
                component.index(),
                component.eps(),
                constants.eps
            ),
        ));
    }
    let (a, b) = constants.romanovski_params();
    let poly = romanovski_poly(nubar, a, b)?;
    let omega2 = constants.a_big.powi(2) + poly.eigen_term();
    Ok(TimeSolution {
        component,
        nubar,
        constants: *constants,
        poly,
        omega2,
        map,
    })
}

impl TimeSolution {
    fn exponents(&self) -> (Complex64, Complex64) {
        let (a, b) = (self.constants.a_big, self.constants.b_big);
        (Complex64::new(-a / 2.0, -b / 2.0), Complex64::new(-a / 2.0, b / 2.0))
    }

    /// The non-polynomial prefactor (z+i)^{−(A+iB)/2}(z−i)^{−(A−iB)/2}.
    pub fn prefactor(&self, z: f64) -> Result<Complex64> {
        let (p, q) = self.exponents();
        let i = Complex64::i();
        Ok(principal_pow(z + i, p)? * principal_pow(z - i, q)?)
    }

    pub fn y_tilde(&self, z: f64) -> Result<Complex64> {
        Ok(self.prefactor(z)? * self.poly.eval(z))
    }

    /// y(z) = (1 + z²)^{−1/4} ỹ(z).
    pub fn y(&self, z: f64) -> Result<Complex64> {
        Ok(self.y_tilde(z)? * (1.0 + z * z).powf(-0.25))
    }

    pub fn t_of_tau(&self, tau: f64) -> Result<Complex64> {
        let z = self.map.z_of_tau(tau)?;
        let csch = 1.0 / tau.sinh();
        Ok(self.y(z)? * csch.powf(1.5))
    }

    /// (ỹ, ỹ′, ỹ″) from the product rule with the prefactor's log-derivative
    /// L = −(Az + B)/(1 + z²).
    pub fn y_tilde_jet(&self, z: f64) -> Result<[Complex64; 3]> {
        let p = self.prefactor(z)?;
        let (a, b) = (self.constants.a_big, self.constants.b_big);
        let s = 1.0 + z * z;
        let l = -(a * z + b) / s;
        let dl = (a * z * z + 2.0 * b * z - a) / (s * s);
        let d = self.poly.derivative_coeffs();
        let dd: Vec<f64> = d.iter().enumerate().skip(1).map(|(k, &c)| k as f64 * c).collect();
        let horner = |c: &[f64]| c.iter().rev().fold(0.0, |acc, &v| acc * z + v);
        let (r, r1, r2) = (self.poly.eval(z), horner(&d), horner(&dd));
        Ok([p * r, p * (l * r + r1), p * ((dl + l * l) * r + 2.0 * l * r1 + r2)])
    }

    fn transformed_lhs(&self, z: f64, jet: [Complex64; 3]) -> Complex64 {
        let x = self.constants.ell_m;
        let s = 1.0 + z * z;
        let coeff = -x * x / s + self.omega2 + x * self.constants.eps * z / s;
        -s * jet[2] - z * jet[1] + coeff * jet[0]
    }

    /// Residual of −(1+z²)ỹ″ − zỹ′ + (−ℓ²M²/(1+z²) + ω² + ℓMεz/(1+z²)) ỹ
    /// with exact derivatives of ỹ.
    pub fn transformed_residual(&self, z: f64) -> Result<Complex64> {
        Ok(self.transformed_lhs(z, self.y_tilde_jet(z)?))
    }

    /// Same residual with ỹ′, ỹ″ from fourth-order central differences.
    pub fn transformed_residual_fd(&self, z: f64) -> Result<Complex64> {
        let y = self.y_tilde(z)?;
        let f = |x: f64| self.y_tilde(x).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        let h = calculus::DEFAULT_STEP;
        Ok(self.transformed_lhs(z, [y, calculus::d1(f, z, h), calculus::d2(f, z, h)]))
    }

    /// Strips the prefactor again, Q = ỹ / prefactor, and returns the residual
    /// of (1+z²)Q″ + (z(1−2A) − 2B)Q′ + (A² − ω²)Q.
    pub fn stripped_residual(&self, z: f64) -> Result<Complex64> {
        self.y_tilde(z)?;
        let q = |x: f64| match (self.y_tilde(x), self.prefactor(x)) {
            (Ok(y), Ok(p)) => y / p,
            _ => Complex64::new(f64::NAN, f64::NAN),
        };
        let h = calculus::DEFAULT_STEP;
        let (d1, d2) = (calculus::d1(q, z, h), calculus::d2(q, z, h));
        let (a, b) = (self.constants.a_big, self.constants.b_big);
        Ok((1.0 + z * z) * d2 + (z * (1.0 - 2.0 * a) - 2.0 * b) * d1 + (a * a - self.omega2) * q(z))
    }
}

/// Real roots ν̄ of A² − ω² = −ν̄(ν̄ − 1 + 2b) with b = ½ − A.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenCondition {
    pub roots: Vec<f64>,
    /// Whether each root is a nonnegative integer (to 1e−9).
    pub quantizable: Vec<bool>,
}

pub fn eigencondition(a_big: f64, omega2: f64) -> EigenCondition {
    let b = 0.5 - a_big;
    // ν² + (2b − 1)ν + (A² − ω²) = 0
    let p = 2.0 * b - 1.0;
    let q = a_big * a_big - omega2;
    let disc = p * p - 4.0 * q;
    let mut roots = if disc < 0.0 {
        Vec::new()
    } else if disc == 0.0 {
        vec![-p / 2.0]
    } else {
        let s = disc.sqrt();
        let big = -0.5 * (p + p.signum().max(0.0).mul_add(2.0, -1.0) * s);
        if big == 0.0 {
            vec![0.0, -p]
        } else {
            vec![big, q / big]
        }
    };
    roots.sort_by(f64::total_cmp);
    let quantizable = roots
        .iter()
        .map(|&r| r > -1e-9 && (r - r.round()).abs() < 1e-9)
        .collect();
    EigenCondition { roots, quantizable }
}

/// ν from the closed-form relation
/// ν = √2/(16 ℓM ε) · √(a₁ − 1 − 4ℓ²M²) · (a₁ + 1 + 4ℓ²M²).
pub fn nu_of_ell_m(ell_m: f64, eps: f64) -> f64 {
    let x2 = ell_m * ell_m;
    let a1 = a1_of(ell_m);
    let root = (a1 - 1.0 - 4.0 * x2).max(0.0).sqrt();
    std::f64::consts::SQRT_2 / (16.0 * ell_m * eps) * root * (a1 + 1.0 + 4.0 * x2)
}

/// Inverts [`nu_of_ell_m`] for ℓM > 0 by bracketing and bisection.
pub fn ell_m_of_nu(nu: f64, eps: f64) -> Result<f64> {
    let target = nu * eps;
    // ν·ε increases from ½ (ℓM → 0) without bound
    if !(target > 0.5) || !target.is_finite() {
        return Err(Error::Domain(format!("ν·ε = {target} has no preimage (needs > ½)")));
    }
    let f = |x: f64| nu_of_ell_m(x, eps) * eps - target;
    let mut lo = 1e-6;
    let mut hi = 1.0;
    while f(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e150 {
            return Err(Error::Convergence {
                what: "bracketing ℓM".into(),
                iterations: 500,
            });
        }
    }
    if f(lo) > 0.0 {
        return Err(Error::Domain(format!("ν = {nu} is below the bracketed range")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Residuals of the conditions linking the angular quantum number n, the
/// azimuthal parameter m and the temporal quantum number ν.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport {
    /// A² + (m+½)² − (m+n+½)² + ν(ν − 1 + 2b)
    pub frequency_match: f64,
    /// A − (ν + √(n + 2mn + n²)); NaN when the radicand is negative.
    pub a_root_plus: f64,
    /// A − (ν − √(n + 2mn + n²)); NaN when the radicand is negative.
    pub a_root_minus: f64,
    /// n² + 2mn + n − ½
    pub index_constraint: f64,
    /// m solving n² + 2mn + n = ½ for the given n.
    pub m_solved: f64,
    /// ℓ from inverting the ν(ℓM) relation at the given mass, if ν has a preimage.
    pub ell_solved: Option<f64>,
    /// ν recomputed from `ell_solved`.
    pub nu_roundtrip: Option<f64>,
    /// ω² from the temporal eigencondition, A² + ν(ν − 1 + 2b).
    pub omega2_time: f64,
    /// ω² from the angular spectrum, (m + n + ½)² − (m + ½)².
    pub omega2_angular: f64,
}

pub fn quantum_consistency(
    m: f64,
    n: usize,
    nu: f64,
    constants: &ModelConstants,
    mass: f64,
) -> Result<ConsistencyReport> {
    if n == 0 {
        return Err(invalid("n", "n = 0 leaves n² + 2mn + n = ½ without an m solution"));
    }
    if mass == 0.0 || !mass.is_finite() {
        return Err(invalid("mass", "must be nonzero and finite"));
    }
    let nf = n as f64;
    let a = constants.a_big;
    let (_, b) = constants.romanovski_params();
    let eigen = nu * (nu - 1.0 + 2.0 * b);
    let radicand = nf + 2.0 * m * nf + nf * nf;
    let root = if radicand >= 0.0 { radicand.sqrt() } else { f64::NAN };
    let ell_solved = ell_m_of_nu(nu, constants.eps).ok().map(|x| x / mass);
    let nu_roundtrip = ell_solved.map(|ell| nu_of_ell_m(ell * mass, constants.eps));
    let a_ang = m + 0.5;
    Ok(ConsistencyReport {
        frequency_match: a * a + (m + 0.5).powi(2) - (m + nf + 0.5).powi(2) + eigen,
        a_root_plus: a - (nu + root),
        a_root_minus: a - (nu - root),
        index_constraint: nf * nf + 2.0 * m * nf + nf - 0.5,
        m_solved: (0.5 - nf - nf * nf) / (2.0 * nf),
        ell_solved,
        nu_roundtrip,
        omega2_time: a * a + eigen,
        omega2_angular: (a_ang + nf).powi(2) - a_ang * a_ang,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn constants_at_unit_ell_m() {
        let c = model_constants(1.0, 1.0).unwrap();
        assert!((c.a1 - 41f64.sqrt()).abs() < 1e-14);
        let b_expected = ((41f64.sqrt() - 1.0) / 8.0 - 0.5).sqrt();
        assert!((c.b_big - b_expected).abs() < 1e-14);
        assert!((c.b_big - 0.4188).abs() < 1e-4);
        assert!(model_constants(0.0, 1.0).is_err());
        assert!(model_constants(1.0, 0.5).is_err());
    }

    #[test]
    fn constants_cancel_inverse_square_terms() {
        // B(2A + 1) = ℓMε and A² + A − B² = ℓ²M² are what make the
        // 1/(1+z²) terms drop out of the transformed equation
        for &x in &[0.1, 0.5, 1.0, 2.0, 7.0] {
            for &eps in &[-1.0, 1.0] {
                let c = model_constants(x, eps).unwrap();
                assert!((c.b_big * (2.0 * c.a_big + 1.0) - x * eps).abs() < 1e-10 * x.max(1.0));
                assert!((c.a_big.powi(2) + c.a_big - c.b_big.powi(2) - x * x).abs() < 1e-9 * (x * x).max(1.0));
            }
        }
    }

    #[test]
    fn b_big_increasing() {
        let mut prev = 0.0;
        for i in 0..=200 {
            let x = 0.1 + (10.0 - 0.1) * i as f64 / 200.0;
            let b = model_constants(x, 1.0).unwrap().b_big;
            assert!(b > prev);
            prev = b;
        }
    }

    #[test]
    fn low_degree_polynomials() {
        let p = romanovski_poly(0, 0.3, -2.0).unwrap();
        assert_eq!(p.coeffs, vec![1.0]);
        let (a, b) = (-0.7, 1.3);
        let p = romanovski_poly(1, a, b).unwrap();
        assert!((p.coeffs[0] - a / (2.0 * b)).abs() < 1e-15);
        assert_eq!(p.coeffs[1], 1.0);
        assert!(p.ode_residual_coeffs().iter().all(|r| r.abs() < 1e-14));
    }

    #[test]
    fn exact_residual_vanishes() {
        let p = romanovski_poly_exact(3, &q(-2, 1), &q(-4, 1)).unwrap();
        assert!(p.ode_residual().iter().all(|c| c.is_zero()));
        assert_eq!(p.coeffs[3], BigRational::one());
        let f = p.to_f64();
        assert!(f.ode_residual_coeffs().iter().all(|r| r.abs() < 1e-12));
    }

    #[test]
    fn degeneracy_reports_offending_index() {
        // b = −4: k(k − 9) = 5·(5 − 9) at k = 4
        let err = romanovski_poly(5, -2.0, -4.0).unwrap_err();
        assert_eq!(err, Error::Degenerate { k: 4, degree: 5 });
        let err = romanovski_poly_exact(5, &q(-2, 1), &q(-4, 1)).unwrap_err();
        assert_eq!(err, Error::Degenerate { k: 4, degree: 5 });
    }

    #[test]
    fn weight_properties() {
        assert_eq!(romanovski_weight(0.0, 3.0, -1.5), 1.0);
        for z in [0.3, 1.7, 12.0] {
            let l = romanovski_weight(-z, 0.8, -2.0);
            let r = romanovski_weight(z, -0.8, -2.0);
            assert!((l - r).abs() < 1e-15 * l.max(1.0));
        }
    }

    #[test]
    fn weight_tail_exponent() {
        let c = model_constants(1.0, 1.0).unwrap();
        let (a, b) = c.romanovski_params();
        let (z1, z2) = (1e4, 1e5);
        let slope = (romanovski_weight(z2, a, b) / romanovski_weight(z1, a, b)).ln() / (z2 / z1).ln();
        assert!((slope - 2.0 * (b - 1.0)).abs() < 1e-3, "{slope}");
    }

    #[test]
    fn pairs_at_the_convergence_edge_are_orthogonal() {
        // ν₁ + ν₂ = 3 with 1 − 2b = 3.5: the weighted product decays like |z|^{−3/2}
        for (i, j) in [(0, 3), (1, 2), (0, 1)] {
            assert!(orthogonality_converges(i, j, -1.25));
            let v = orthogonality_integral(i, j, 1.0, -1.25).unwrap();
            assert!(v.abs() < 1e-10, "({i},{j}): {v:e}");
        }
    }

    #[test]
    fn beta_integral() {
        let v = orthogonality_integral(0, 0, 0.0, -4.0).unwrap();
        assert!((v - 35.0 * PI / 128.0).abs() < 1e-10);
    }

    #[test]
    fn orthogonal_pair_and_divergence_gate() {
        assert!(orthogonality_integral(0, 1, -2.0, -4.0).unwrap().abs() < 1e-8);
        assert!(matches!(
            orthogonality_integral(4, 5, -2.0, -4.0),
            Err(Error::Divergent(_))
        ));
        assert!(matches!(
            orthogonality_integral(0, 1, 0.0, 0.5),
            Err(Error::Divergent(_))
        ));
    }

    #[test]
    fn eigencondition_roots() {
        let r = eigencondition(1.7, 1.7 * 1.7);
        let b = 0.5 - 1.7;
        assert_eq!(r.roots.len(), 2);
        assert!(r.roots[0].abs() < 1e-14);
        assert!((r.roots[1] - (1.0 - 2.0 * b)).abs() < 1e-12);
        assert!(r.quantizable[0]);
        assert!(eigencondition(0.0, -1.0).roots.is_empty());
        // roots A ± ω with A = 2, ω = 1 are integers
        let r = eigencondition(2.0, 1.0);
        assert_eq!(r.quantizable, vec![true, true]);
        let r = eigencondition(0.3, 1.0);
        assert_eq!(r.quantizable, vec![false, false]);
    }

    #[test]
    fn tau_maps() {
        assert!((TauMap::Cot.z_of_tau(PI / 4.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(TauMap::Cot.z_of_tau(4.0).is_err());
        assert!(TauMap::Coth.z_of_tau(0.0).is_err());
        assert!(TauMap::Coth.is_caveat());
        assert_eq!("cot".parse::<TauMap>().unwrap(), TauMap::Cot);
    }

    #[test]
    fn time_solution_component_must_match_eps() {
        let c = model_constants(1.0, 1.0).unwrap();
        assert!(time_solution(Component::One, 0, &c, TauMap::Cot).is_err());
        let s = time_solution(Component::Two, 1, &c, TauMap::Cot).unwrap();
        assert!(s.t_of_tau(1.0).unwrap().norm().is_finite());
    }

    #[test]
    fn ground_state_closed_form() {
        // ỹ₀ = e^{Bπ/2} (1+z²)^{−A/2} e^{−B arctan z} on the principal branch
        let c = model_constants(1.0, 1.0).unwrap();
        let s = time_solution(Component::Two, 0, &c, TauMap::Cot).unwrap();
        for z in [-7.0, -1.0, 0.0, 0.4, 3.0] {
            let expected =
                (c.b_big * PI / 2.0).exp() * (1.0f64 + z * z).powf(-c.a_big / 2.0) * (-c.b_big * f64::atan(z)).exp();
            let got = s.y_tilde(z).unwrap();
            assert!((got - expected).norm() < 1e-13 * expected, "{z}");
        }
    }

    #[test]
    fn transformed_equation_holds() {
        for &eps in &[-1.0, 1.0] {
            let c = model_constants(1.0, eps).unwrap();
            let k = if eps < 0.0 { Component::One } else { Component::Two };
            for nubar in 0..4 {
                let s = time_solution(k, nubar, &c, TauMap::Cot).unwrap();
                for i in 0..=40 {
                    let z = -10.0 + 0.5 * i as f64;
                    let exact = s.transformed_residual(z).unwrap().norm();
                    let fd = s.transformed_residual_fd(z).unwrap().norm();
                    let scale = s.y_tilde(z).unwrap().norm().max(1e-3);
                    assert!(exact < 1e-10 * (1.0 + z * z), "{eps} {nubar} {z}: {exact}");
                    assert!(fd < 1e-5 * scale * (1.0 + z * z), "{eps} {nubar} {z}: {fd}");
                    assert!(s.stripped_residual(z).unwrap().norm() < 1e-5 * (1.0 + z * z));
                }
            }
        }
    }

    #[test]
    fn wrong_omega_breaks_transformed_equation() {
        let c = model_constants(1.0, 1.0).unwrap();
        let mut s = time_solution(Component::Two, 2, &c, TauMap::Cot).unwrap();
        s.omega2 += 0.1;
        assert!(s.transformed_residual(0.5).unwrap().norm() > 1e-3);
    }

    #[test]
    fn quantum_consistency_m_solve() {
        let c = model_constants(1.0, 1.0).unwrap();
        let r = quantum_consistency(1.0, 1, 2.0, &c, 1.0).unwrap();
        assert!((r.m_solved + 0.75).abs() < 1e-15);
        let r = quantum_consistency(1.0, 2, 2.0, &c, 1.0).unwrap();
        assert!((r.m_solved + 11.0 / 8.0).abs() < 1e-15);
        assert!(quantum_consistency(1.0, 0, 2.0, &c, 1.0).is_err());
        let ell = r.ell_solved.unwrap();
        assert!((r.nu_roundtrip.unwrap() - 2.0).abs() < 1e-10);
        assert!(ell > 0.0);
    }

    #[test]
    fn nu_relation_limits() {
        assert!((nu_of_ell_m(1e-4, 1.0) - 0.5).abs() < 1e-6);
        assert!(ell_m_of_nu(0.4, 1.0).is_err());
        let x = ell_m_of_nu(-3.0, -1.0).unwrap();
        assert!((nu_of_ell_m(x, -1.0) + 3.0).abs() < 1e-10);
    }
}
