//! Pseudo-supersymmetric partner of the Dirac Hamiltonian at fixed τ.
//!
//! H₋ is discretized on a (θ, φ) grid with the spinor index fastest. The
//! metric operators η₁, η₂ are scalar multiplication operators, so conjugation
//! by them only touches the derivative blocks. Intertwining relations are
//! measured by applying the residual operators to smooth test spinors and
//! taking the max norm over an interior window, away from the Dirichlet ends.
//!
//! The φ grid lives on (0, π) because η₁ contains √sin φ.

use crate::error::{invalid, Error, Result};
use crate::geometry::{metric_at, GammaSet, SpinMatrix};
use crate::separation::GaugeChoice;
use crate::sparse::{CsrMatrix, TripletBuilder};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Uniform interior grids on θ ∈ (0, π) and φ ∈ (0, π).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiracGrid {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl DiracGrid {
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta < 3 || n_phi < 3 {
            return Err(invalid("n", "grids need at least 3 interior points per axis"));
        }
        Ok(Self { n_theta, n_phi })
    }

    pub fn square(n: usize) -> Result<Self> {
        Self::new(n, n)
    }

    pub fn h_theta(&self) -> f64 {
        PI / (self.n_theta as f64 + 1.0)
    }

    pub fn h_phi(&self) -> f64 {
        PI / (self.n_phi as f64 + 1.0)
    }

    pub fn theta(&self, i: usize) -> f64 {
        (i as f64 + 1.0) * self.h_theta()
    }

    pub fn phi(&self, j: usize) -> f64 {
        (j as f64 + 1.0) * self.h_phi()
    }

    pub fn points(&self) -> usize {
        self.n_theta * self.n_phi
    }

    pub fn dim(&self) -> usize {
        2 * self.points()
    }

    /// Index of the grid point (i, j).
    pub fn point(&self, i: usize, j: usize) -> usize {
        i * self.n_phi + j
    }

    /// Row/column index of spinor component `s` at grid point (i, j).
    pub fn index(&self, i: usize, j: usize, s: usize) -> usize {
        2 * self.point(i, j) + s
    }

    pub fn coords(&self, point: usize) -> (usize, usize) {
        (point / self.n_phi, point % self.n_phi)
    }

    /// Samples a two-component field on the grid.
    pub fn sample(&self, f: impl Fn(f64, f64) -> [Complex64; 2]) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.dim()];
        for i in 0..self.n_theta {
            for j in 0..self.n_phi {
                let v = f(self.theta(i), self.phi(j));
                out[self.index(i, j, 0)] = v[0];
                out[self.index(i, j, 1)] = v[1];
            }
        }
        out
    }
}

/// Physical parameters of the fixed-τ operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracParams {
    pub ell: f64,
    pub mass: f64,
    pub tau: f64,
    pub gauge: GaugeChoice,
}

impl DiracParams {
    pub fn new(ell: f64, mass: f64, tau: f64, gauge: GaugeChoice) -> Result<Self> {
        if !(ell > 0.0) || !ell.is_finite() {
            return Err(invalid("ell", "must be positive and finite"));
        }
        if !mass.is_finite() {
            return Err(invalid("mass", "must be finite"));
        }
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::Domain(format!("τ = {tau} must be positive")));
        }
        Ok(Self { ell, mass, tau, gauge })
    }
}

/// Coefficient of the cot θ multiplication term in H₋.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CotThetaVariant {
    /// −i γ⁰γ¹ cot θ / sinh τ, as written in the Hamiltonian.
    Literal,
    /// −i γ⁰γ¹ cot θ / (2 sinh τ), as in the separated first-order system.
    Half,
}

impl CotThetaVariant {
    pub fn coefficient(self) -> f64 {
        match self {
            CotThetaVariant::Literal => 1.0,
            CotThetaVariant::Half => 0.5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CotThetaVariant::Literal => "literal",
            CotThetaVariant::Half => "half",
        }
    }
}

impl std::str::FromStr for CotThetaVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(CotThetaVariant::Literal),
            "half" => Ok(CotThetaVariant::Half),
            other => Err(invalid(
                "variant",
                format!("expected `literal` or `half`, got `{other}`"),
            )),
        }
    }
}

/// The unknown functions of H₊ solved from the intertwining conditions:
/// f = −(i/2)(1 + a₂) cot θ csch τ, g = −(i a₃/2) cot φ csc θ csch τ,
/// U = −i(a₁ + 1) coth τ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FgU {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

pub fn solve_fgu(a1: f64, a2: f64, a3: f64) -> FgU {
    FgU { a1, a2, a3 }
}

impl FgU {
    pub fn f(&self, tau: f64, theta: f64) -> Complex64 {
        -I * 0.5 * (1.0 + self.a2) * theta.cos() / theta.sin() / tau.sinh()
    }

    pub fn g(&self, tau: f64, theta: f64, phi: f64) -> Complex64 {
        -I * 0.5 * self.a3 * phi.cos() / phi.sin() / theta.sin() / tau.sinh()
    }

    pub fn u(&self, tau: f64) -> Complex64 {
        -I * (self.a1 + 1.0) * tau.cosh() / tau.sinh()
    }

    /// The γ⁰γ² coefficient displayed for the worked example (a₃ = 1), which
    /// is −i cot φ csc θ csch τ, twice the solved value.
    pub fn displayed_g(tau: f64, theta: f64, phi: f64) -> Complex64 {
        -I * phi.cos() / phi.sin() / theta.sin() / tau.sinh()
    }

    /// The three bracketed conditions; each vanishes identically.
    pub fn conditions(&self, tau: f64, theta: f64, phi: f64) -> [Complex64; 3] {
        let csch = 1.0 / tau.sinh();
        let cot_t = theta.cos() / theta.sin();
        let cot_p = phi.cos() / phi.sin();
        [
            0.5 * I * cot_t * csch * (1.0 + self.a2) + self.f(tau, theta),
            I * self.a3 / 2.0 * cot_p / theta.sin() * csch + self.g(tau, theta, phi),
            self.u(tau) + I * (self.a1 + 1.0) * tau.cosh() / tau.sinh(),
        ]
    }
}

/// Which (f, g, U) enter H₊.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UnknownTerms {
    Solved(FgU),
    /// f = g = U = 0 (ablation).
    Vanishing,
    /// The worked-example H₊ with the displayed γ⁰γ² coefficient.
    Displayed,
}

impl UnknownTerms {
    fn values(&self, tau: f64, theta: f64, phi: f64) -> (Complex64, Complex64, Complex64) {
        match self {
            UnknownTerms::Solved(s) => (s.f(tau, theta), s.g(tau, theta, phi), s.u(tau)),
            UnknownTerms::Vanishing => (ZERO, ZERO, ZERO),
            UnknownTerms::Displayed => {
                let s = solve_fgu(1.5, 1.0, 1.0);
                (s.f(tau, theta), FgU::displayed_g(tau, theta, phi), s.u(tau))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    HMinus,
    HMinusDagger,
    HPlus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDiracOperator {
    pub kind: OperatorKind,
    pub tau: f64,
    pub grid: DiracGrid,
    pub matrix: CsrMatrix,
}

fn push_block(b: &mut TripletBuilder, grid: &DiracGrid, p: usize, q: usize, coeff: Complex64, m: &SpinMatrix) {
    for s in 0..2 {
        for t in 0..2 {
            b.push(2 * p + s, 2 * q + t, coeff * m[(s, t)]);
        }
    }
    debug_assert!(p < grid.points() && q < grid.points());
}

/// Shared terms: iMℓγ⁰, both derivative terms and the gauge term, plus the
/// per-point multiplication matrix `extra(θ, φ)`.
fn assemble(params: &DiracParams, grid: &DiracGrid, extra: impl Fn(f64, f64) -> SpinMatrix) -> CsrMatrix {
    let gam = GammaSet::standard();
    let g0 = gam.gamma[0];
    let g01 = gam.product(0, 1);
    let g02 = gam.product(0, 2);
    let sh = params.tau.sinh();
    let (ht, hp) = (grid.h_theta(), grid.h_phi());
    let mut b = TripletBuilder::new(grid.dim());
    for i in 0..grid.n_theta {
        let theta = grid.theta(i);
        let st = theta.sin();
        // −i e ℓ sinh τ A₁ γ⁰γ¹; with e A₁ = i cot θ / 2 this is real
        let e_a1 = params.gauge.e_a1(theta).unwrap_or(ZERO);
        let gauge = -I * params.ell * sh * e_a1;
        for j in 0..grid.n_phi {
            let phi = grid.phi(j);
            let p = grid.point(i, j);
            let local = g0 * (I * params.mass * params.ell) + g01 * gauge + extra(theta, phi);
            push_block(&mut b, grid, p, p, Complex64::new(1.0, 0.0), &local);

            let dt = -I / (sh * 2.0 * ht);
            if i + 1 < grid.n_theta {
                push_block(&mut b, grid, p, grid.point(i + 1, j), dt, &g01);
            }
            if i > 0 {
                push_block(&mut b, grid, p, grid.point(i - 1, j), -dt, &g01);
            }
            let dp = -I / (sh * st * 2.0 * hp);
            if j + 1 < grid.n_phi {
                push_block(&mut b, grid, p, grid.point(i, j + 1), dp, &g02);
            }
            if j > 0 {
                push_block(&mut b, grid, p, grid.point(i, j - 1), -dp, &g02);
            }
        }
    }
    b.build()
}

pub fn build_h_minus(params: &DiracParams, grid: &DiracGrid, variant: CotThetaVariant) -> DiscreteDiracOperator {
    let g01 = GammaSet::standard().product(0, 1);
    let sh = params.tau.sinh();
    let coth = params.tau.cosh() / sh;
    let c = variant.coefficient();
    let matrix = assemble(params, grid, |theta, _| {
        SpinMatrix::identity() * (-I * coth) + g01 * (-I * c * theta.cos() / theta.sin() / sh)
    });
    DiscreteDiracOperator {
        kind: OperatorKind::HMinus,
        tau: params.tau,
        grid: *grid,
        matrix,
    }
}

/// The closed-form adjoint: H₋ without the −i coth τ and cot θ terms.
pub fn build_h_minus_dagger(params: &DiracParams, grid: &DiracGrid) -> DiscreteDiracOperator {
    DiscreteDiracOperator {
        kind: OperatorKind::HMinusDagger,
        tau: params.tau,
        grid: *grid,
        matrix: assemble(params, grid, |_, _| SpinMatrix::zeros()),
    }
}

pub fn build_h_plus(params: &DiracParams, grid: &DiracGrid, unknowns: UnknownTerms) -> DiscreteDiracOperator {
    let gam = GammaSet::standard();
    let (g01, g02) = (gam.product(0, 1), gam.product(0, 2));
    let tau = params.tau;
    let matrix = assemble(params, grid, |theta, phi| {
        let (f, g, u) = unknowns.values(tau, theta, phi);
        g01 * f + g02 * g + SpinMatrix::identity() * u
    });
    DiscreteDiracOperator {
        kind: OperatorKind::HPlus,
        tau,
        grid: *grid,
        matrix,
    }
}

/// Largest norm of a 2×2 block's component outside the span of `allowed`,
/// which must be mutually orthogonal in the Frobenius inner product.
pub fn projection_remainder(block: &SpinMatrix, allowed: &[SpinMatrix]) -> f64 {
    let mut rest = *block;
    for a in allowed {
        let coeff = a.adjoint().component_mul(block).sum() / a.adjoint().component_mul(a).sum();
        rest -= a * coeff;
    }
    rest.norm()
}

/// Block-pattern audit of a discretized operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockPattern {
    /// Diagonal blocks outside span{I, γ⁰, γ⁰γ¹, γ⁰γ²}.
    pub diagonal: f64,
    /// θ-neighbour blocks outside span{γ⁰γ¹}.
    pub theta_neighbours: f64,
    /// φ-neighbour blocks outside span{γ⁰γ²}.
    pub phi_neighbours: f64,
    /// Nonzero blocks coupling any other pair of points.
    pub stray_blocks: usize,
}

impl BlockPattern {
    pub fn max(&self) -> f64 {
        self.diagonal.max(self.theta_neighbours).max(self.phi_neighbours)
    }
}

impl DiscreteDiracOperator {
    pub fn blocks(&self) -> BTreeMap<(usize, usize), SpinMatrix> {
        let mut out: BTreeMap<(usize, usize), SpinMatrix> = BTreeMap::new();
        for (r, c, v) in self.matrix.triplets() {
            out.entry((r / 2, c / 2)).or_insert_with(SpinMatrix::zeros)[(r % 2, c % 2)] += v;
        }
        out
    }

    pub fn block_pattern(&self) -> BlockPattern {
        let gam = GammaSet::standard();
        let (g01, g02) = (gam.product(0, 1), gam.product(0, 2));
        let full = [SpinMatrix::identity(), gam.gamma[0], g01, g02];
        let mut pat = BlockPattern {
            diagonal: 0.0,
            theta_neighbours: 0.0,
            phi_neighbours: 0.0,
            stray_blocks: 0,
        };
        for ((p, q), blk) in self.blocks() {
            let (i, j) = self.grid.coords(p);
            let (k, l) = self.grid.coords(q);
            if p == q {
                pat.diagonal = pat.diagonal.max(projection_remainder(&blk, &full));
            } else if j == l && i.abs_diff(k) == 1 {
                pat.theta_neighbours = pat.theta_neighbours.max(projection_remainder(&blk, &[g01]));
            } else if i == k && j.abs_diff(l) == 1 {
                pat.phi_neighbours = pat.phi_neighbours.max(projection_remainder(&blk, &[g02]));
            } else if blk.norm() > 0.0 {
                pat.stray_blocks += 1;
            }
        }
        pat
    }

    pub fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        self.matrix.matvec(psi)
    }

    /// Literal conjugate transpose of the grid matrix.
    pub fn conj_transpose(&self) -> CsrMatrix {
        self.matrix.conj_transpose()
    }
}

/// η = prefactor · sinh^{e₁}τ · (√sin θ)^{e₂} · (√sin φ)^{e₃}.
///
/// The scalar prefactor carries the constant factors (powers of ℓ, a factor
/// i); the functional part is strictly positive at interior points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaOperator {
    pub ell: f64,
    pub prefactor: Complex64,
    pub exponents: [f64; 3],
}

/// η₁ = ℓ² sinh^{a₁}τ (√sin θ)^{a₂} (√sin φ)^{a₃}.
pub fn eta1(ell: f64, a1: f64, a2: f64, a3: f64) -> EtaOperator {
    EtaOperator {
        ell,
        prefactor: Complex64::new(ell * ell, 0.0),
        exponents: [a1, a2, a3],
    }
}

/// η₂ = i ℓ^{3/2} sinh τ √sin θ.
pub fn eta2(ell: f64) -> EtaOperator {
    EtaOperator {
        ell,
        prefactor: I * ell.powf(1.5),
        exponents: [1.0, 1.0, 0.0],
    }
}

/// Smallest |η| accepted on a grid.
pub const ETA_FLOOR: f64 = 1e-12;

impl EtaOperator {
    pub fn functional(&self, tau: f64, theta: f64, phi: f64) -> Result<f64> {
        let (st, sp) = (theta.sin(), phi.sin());
        if !(tau > 0.0) || !(st > 0.0) || (self.exponents[2] != 0.0 && !(sp > 0.0)) {
            return Err(Error::Domain(format!(
                "η undefined at (τ, θ, φ) = ({tau}, {theta}, {phi})"
            )));
        }
        let [e1, e2, e3] = self.exponents;
        Ok(tau.sinh().powf(e1) * st.sqrt().powf(e2) * sp.sqrt().powf(e3))
    }

    pub fn value(&self, tau: f64, theta: f64, phi: f64) -> Result<Complex64> {
        Ok(self.prefactor * self.functional(tau, theta, phi)?)
    }

    /// η⁻¹ ∂η/∂τ = e₁ coth τ.
    pub fn log_tau_derivative(&self, tau: f64) -> f64 {
        self.exponents[0] * tau.cosh() / tau.sinh()
    }

    /// Central-difference version of [`Self::log_tau_derivative`].
    pub fn log_tau_derivative_fd(&self, tau: f64, theta: f64, phi: f64, dtau: f64) -> Result<f64> {
        let up = self.functional(tau + dtau, theta, phi)?;
        let down = self.functional(tau - dtau, theta, phi)?;
        Ok((up - down) / (2.0 * dtau) / self.functional(tau, theta, phi)?)
    }

    /// Values of η on every grid row (spinor components share the value).
    pub fn diagonal(&self, grid: &DiracGrid, tau: f64) -> Result<Vec<Complex64>> {
        let mut out = vec![ZERO; grid.dim()];
        for i in 0..grid.n_theta {
            for j in 0..grid.n_phi {
                let v = self.value(tau, grid.theta(i), grid.phi(j))?;
                if v.norm() < ETA_FLOOR {
                    return Err(Error::Domain(format!("η is singular at grid point ({i}, {j})")));
                }
                out[grid.index(i, j, 0)] = v;
                out[grid.index(i, j, 1)] = v;
            }
        }
        Ok(out)
    }
}

/// Settings for [`intertwining_residuals`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualSetup {
    pub params: DiracParams,
    pub grid: DiracGrid,
    pub variant: CotThetaVariant,
    pub exponents: [f64; 3],
    pub dtau: f64,
    /// Residuals are measured on θ, φ ∈ [δ, π − δ].
    pub window: f64,
}

/// Default window half-width δ = π/8.
pub const DEFAULT_WINDOW: f64 = PI / 8.0;

/// Max-norm residuals of the intertwining relations on test spinors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntertwiningReport {
    pub h_theta: f64,
    /// H₋ − η₁H₊η₁⁻¹ − iη₁⁻¹∂τη₁ with the solved (f, g, U).
    pub r72: f64,
    /// Same with the τ-derivative of η₁ by central differences.
    pub r72_fd: f64,
    /// |r72 − r72_fd| measured pointwise.
    pub derivative_shift: f64,
    /// Same with f = g = U = 0.
    pub r72_ablation: f64,
    /// Same with the displayed worked-example γ⁰γ² coefficient.
    pub r72_displayed: f64,
    /// H₋† − η₂H₋η₂⁻¹ − iη₂⁻¹∂τη₂ with the closed-form H₋†.
    pub r71: f64,
    /// η†η₁H₊ − H₊†η†η₁ − i(∂τη† η₁ − ∂τη₁ η†), η = η₂η₁, literal adjoint.
    pub r74: f64,
    /// Literal conjugate transpose of the H₋ matrix versus the closed-form H₋†.
    pub adjoint_mismatch: f64,
}

/// Smooth spinor vanishing at the grid ends, used as residual probe.
pub fn test_spinor(theta: f64, phi: f64) -> [Complex64; 2] {
    let bump = (theta.sin() * phi.sin()).powi(2);
    [
        Complex64::new(1.0 + 0.3 * theta.cos(), 0.2 * phi.sin()) * bump,
        Complex64::new(0.5, -0.4 * theta.cos() * phi.cos()) * bump,
    ]
}

fn window_max(grid: &DiracGrid, delta: f64, v: &[Complex64]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..grid.n_theta {
        let t = grid.theta(i);
        if t < delta || t > PI - delta {
            continue;
        }
        for j in 0..grid.n_phi {
            let p = grid.phi(j);
            if p < delta || p > PI - delta {
                continue;
            }
            for s in 0..2 {
                worst = worst.max(v[grid.index(i, j, s)].norm());
            }
        }
    }
    worst
}

fn mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

fn inv(a: &[Complex64]) -> Vec<Complex64> {
    a.iter().map(|x| x.inv()).collect()
}

fn axpy(acc: &mut [Complex64], s: Complex64, x: &[Complex64]) {
    acc.iter_mut().zip(x).for_each(|(a, b)| *a += s * b);
}

/// Per-row value of a scalar field over the grid.
fn scalar_field(grid: &DiracGrid, f: impl Fn(f64, f64) -> Result<f64>) -> Result<Vec<Complex64>> {
    let mut out = vec![ZERO; grid.dim()];
    for i in 0..grid.n_theta {
        for j in 0..grid.n_phi {
            let v = Complex64::new(f(grid.theta(i), grid.phi(j))?, 0.0);
            out[grid.index(i, j, 0)] = v;
            out[grid.index(i, j, 1)] = v;
        }
    }
    Ok(out)
}

/// H₋ψ − η(H₊(η⁻¹ψ)) − i·(log-derivative)·ψ.
fn conjugation_residual(
    minus: &DiscreteDiracOperator,
    plus: &DiscreteDiracOperator,
    eta: &[Complex64],
    log_derivative: &[Complex64],
    psi: &[Complex64],
) -> Vec<Complex64> {
    let mut r = minus.apply(psi);
    let conj = mul(eta, &plus.apply(&mul(&inv(eta), psi)));
    axpy(&mut r, Complex64::new(-1.0, 0.0), &conj);
    axpy(&mut r, -I, &mul(log_derivative, psi));
    r
}

pub fn intertwining_residuals(setup: &ResidualSetup) -> Result<IntertwiningReport> {
    let ResidualSetup {
        params,
        grid,
        variant,
        exponents: [a1, a2, a3],
        dtau,
        window,
    } = *setup;
    if !(dtau > 0.0) || dtau >= params.tau {
        return Err(invalid("dtau", "must lie in (0, τ)"));
    }
    let tau = params.tau;
    let psi = grid.sample(test_spinor);
    let minus = build_h_minus(&params, &grid, variant);
    let dagger = build_h_minus_dagger(&params, &grid);
    let solved = solve_fgu(a1, a2, a3);
    let plus = build_h_plus(&params, &grid, UnknownTerms::Solved(solved));
    let ablated = build_h_plus(&params, &grid, UnknownTerms::Vanishing);
    let displayed = build_h_plus(&params, &grid, UnknownTerms::Displayed);

    let e1 = eta1(params.ell, a1, a2, a3);
    let e2 = eta2(params.ell);
    let d1 = e1.diagonal(&grid, tau)?;
    let d2 = e2.diagonal(&grid, tau)?;
    let log1 = vec![Complex64::new(e1.log_tau_derivative(tau), 0.0); grid.dim()];
    let log1_fd = scalar_field(&grid, |t, p| e1.log_tau_derivative_fd(tau, t, p, dtau))?;
    let log2 = vec![Complex64::new(e2.log_tau_derivative(tau), 0.0); grid.dim()];

    let r72v = conjugation_residual(&minus, &plus, &d1, &log1, &psi);
    let r72fdv = conjugation_residual(&minus, &plus, &d1, &log1_fd, &psi);
    let shift: Vec<Complex64> = r72v.iter().zip(&r72fdv).map(|(a, b)| a - b).collect();
    let r72_ablation = conjugation_residual(&minus, &ablated, &d1, &log1, &psi);
    let r72_displayed = conjugation_residual(&minus, &displayed, &d1, &log1, &psi);
    let r71 = conjugation_residual(&dagger, &minus, &d2, &log2, &psi);

    // η = η₂η₁ as scalar fields; ∂τ of each factor from its log-derivative
    let eta: Vec<Complex64> = mul(&d2, &d1);
    let eta_dag: Vec<Complex64> = eta.iter().map(|v| v.conj()).collect();
    let dlog_eta = e1.log_tau_derivative(tau) + e2.log_tau_derivative(tau);
    let d_eta_dag: Vec<Complex64> = eta_dag.iter().map(|v| v * dlog_eta).collect();
    let d_eta1: Vec<Complex64> = d1.iter().map(|v| v * e1.log_tau_derivative(tau)).collect();
    let weight = mul(&eta_dag, &d1);
    let plus_dag = plus.conj_transpose();
    let mut r74 = mul(&weight, &plus.apply(&psi));
    axpy(
        &mut r74,
        Complex64::new(-1.0, 0.0),
        &plus_dag.matvec(&mul(&weight, &psi)),
    );
    let mut bracket = mul(&d_eta_dag, &d1);
    axpy(&mut bracket, Complex64::new(-1.0, 0.0), &mul(&d_eta1, &eta_dag));
    axpy(&mut r74, -I, &mul(&bracket, &psi));

    let literal = minus.conj_transpose();
    let mut mismatch = literal.matvec(&psi);
    axpy(&mut mismatch, Complex64::new(-1.0, 0.0), &dagger.apply(&psi));

    Ok(IntertwiningReport {
        h_theta: grid.h_theta(),
        r72: window_max(&grid, window, &r72v),
        r72_fd: window_max(&grid, window, &r72fdv),
        derivative_shift: window_max(&grid, window, &shift),
        r72_ablation: window_max(&grid, window, &r72_ablation),
        r72_displayed: window_max(&grid, window, &r72_displayed),
        r71: window_max(&grid, window, &r71),
        r74: window_max(&grid, window, &r74),
        adjoint_mismatch: window_max(&grid, window, &mismatch),
    })
}

/// Least-squares slope of log(residual) against log(h).
pub fn convergence_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Diagonal 4D metric diag(−ℓ², ℓ²sinh²τ, ℓ²sinh²τ sin²θ, ℓ²sinh²τ sin²φ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartnerMetric4 {
    pub ell: f64,
    pub diag: [f64; 4],
}

pub fn partner_metric(ell: f64, tau: f64, theta: f64, phi: f64) -> Result<PartnerMetric4> {
    if !(ell > 0.0) {
        return Err(invalid("ell", "must be positive"));
    }
    let l2 = ell * ell;
    let sh2 = tau.sinh().powi(2);
    Ok(PartnerMetric4 {
        ell,
        diag: [
            -l2,
            l2 * sh2,
            l2 * sh2 * theta.sin().powi(2),
            l2 * sh2 * phi.sin().powi(2),
        ],
    })
}

impl PartnerMetric4 {
    pub fn determinant(&self) -> f64 {
        self.diag.iter().product()
    }

    pub fn signature(&self) -> [i8; 4] {
        self.diag.map(|v| {
            if v > 0.0 {
                1
            } else if v < 0.0 {
                -1
            } else {
                0
            }
        })
    }

    /// Coefficients of dτ², dθ², dφ², dχ² in the line element.
    pub fn line_element(&self) -> [f64; 4] {
        self.diag
    }

    /// (−g)^{1/4}(−g^{00})^{1/4}, principal branch.
    pub fn eta_candidate(&self) -> Complex64 {
        let det = Complex64::new(-self.determinant(), 0.0);
        let g00_inv = Complex64::new(-1.0 / self.diag[0], 0.0);
        det.powf(0.25) * g00_inv.powf(0.25)
    }
}

/// (−g)^{1/4}(−g^{00})^{1/4} for the 3D background metric, principal branch.
pub fn background_eta_candidate(ell: f64, tau: f64, theta: f64) -> Result<Complex64> {
    let g = metric_at(ell, tau, theta)?;
    let det = Complex64::new(-g.determinant(), 0.0);
    let inv = Complex64::new(-g.inverse_diagonal()[0], 0.0);
    Ok(det.powf(0.25) * inv.powf(0.25))
}

/// η₁ / (−g₁)^{1/4}(−g₁^{00})^{1/4} for the partner metric.
pub fn partner_eta_ratio(ell: f64, tau: f64, theta: f64, phi: f64) -> Result<Complex64> {
    let eta = eta1(ell, 1.5, 1.0, 1.0).value(tau, theta, phi)?;
    Ok(eta / partner_metric(ell, tau, theta, phi)?.eta_candidate())
}

/// η₂ / (−g)^{1/4}(−g^{00})^{1/4} for the background metric.
pub fn background_eta_ratio(ell: f64, tau: f64, theta: f64) -> Result<Complex64> {
    Ok(eta2(ell).value(tau, theta, 0.0)? / background_eta_candidate(ell, tau, theta)?)
}

/// Exponent p in ratio ∝ ℓ^p from two radii.
pub fn ell_power(ratio: impl Fn(f64) -> Result<Complex64>, ell_a: f64, ell_b: f64) -> Result<f64> {
    Ok((ratio(ell_b)?.norm() / ratio(ell_a)?.norm()).ln() / (ell_b / ell_a).ln())
}

/// Static pseudo-Hermitian toy: H = η⁻¹Dη with D real symmetric tridiagonal
/// and η diagonal positive, which is ρ-pseudo-Hermitian for ρ = η².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToyReport {
    /// max |ρHρ⁻¹ − H†|
    pub residual: f64,
    /// max |H − H†|, showing the toy is not Hermitian itself.
    pub non_hermiticity: f64,
}

pub fn pseudo_hermitian_toy(eta: &[f64]) -> Result<ToyReport> {
    let n = eta.len();
    if n < 2 || eta.iter().any(|v| !(v.abs() > ETA_FLOOR)) {
        return Err(invalid("eta", "need at least two nonzero entries"));
    }
    let mut b = TripletBuilder::new(n);
    for i in 0..n {
        b.push(i, i, Complex64::new(2.0 + 0.1 * i as f64, 0.0));
        if i + 1 < n {
            let off = Complex64::new(-1.0 + 0.05 * (i % 3) as f64, 0.0);
            b.push(i, i + 1, off);
            b.push(i + 1, i, off);
        }
    }
    let d = b.build();
    let e: Vec<Complex64> = eta.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let h = d.conjugate_diagonal(&inv(&e), &e);
    let rho: Vec<Complex64> = e.iter().map(|v| v * v).collect();
    let lhs = h.conjugate_diagonal(&rho, &inv(&rho));
    let dag = h.conj_transpose();
    Ok(ToyReport {
        residual: lhs.sub(&dag).max_abs(),
        non_hermiticity: h.sub(&dag).max_abs(),
    })
}

/// Block supercharge Q = [[0, 0], [η, 0]] of size 2n.
pub fn supercharge(eta: &[Complex64]) -> CsrMatrix {
    let n = eta.len();
    let mut b = TripletBuilder::new(2 * n);
    for (i, &v) in eta.iter().enumerate() {
        b.push(n + i, i, v);
    }
    b.build()
}

/// Number of nonzero entries of Q²; zero for a nilpotent supercharge.
pub fn nilpotency_defect(q: &CsrMatrix) -> usize {
    q.matmul(q).pattern().len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> DiracParams {
        DiracParams::new(1.0, 1.0, 1.0, GaugeChoice::new(1.0).unwrap()).unwrap()
    }

    #[test]
    fn gauge_term_is_real() {
        let p = params();
        for theta in [0.3, 1.2, 2.5] {
            let term = -I * p.ell * p.tau.sinh() * p.gauge.e_a1(theta).unwrap();
            assert_eq!(term.im, 0.0);
        }
    }

    #[test]
    fn block_patterns() {
        let grid = DiracGrid::new(7, 9).unwrap();
        let p = params();
        for op in [
            build_h_minus(&p, &grid, CotThetaVariant::Literal),
            build_h_minus_dagger(&p, &grid),
            build_h_plus(&p, &grid, UnknownTerms::Solved(solve_fgu(1.5, 1.0, 1.0))),
        ] {
            let pat = op.block_pattern();
            assert!(pat.max() < 1e-14, "{pat:?}");
            assert_eq!(pat.stray_blocks, 0);
        }
    }

    #[test]
    fn derivative_blocks_annihilate_constants() {
        let grid = DiracGrid::square(9).unwrap();
        let p = params();
        let op = build_h_minus(&p, &grid, CotThetaVariant::Literal);
        let chi = [Complex64::new(0.7, 0.1), Complex64::new(-0.2, 0.5)];
        let out = op.apply(&grid.sample(|_, _| chi));
        let gam = GammaSet::standard();
        let sh = p.tau.sinh();
        for i in 1..grid.n_theta - 1 {
            for j in 1..grid.n_phi - 1 {
                let t = grid.theta(i);
                let local = gam.gamma[0] * (I * p.mass * p.ell)
                    + SpinMatrix::identity() * (-I * p.tau.cosh() / sh)
                    + gam.product(0, 1) * (-I * t.cos() / t.sin() / sh + p.ell * sh * t.cos() / t.sin() / 2.0);
                let expected = local * nalgebra::Vector2::new(chi[0], chi[1]);
                for s in 0..2 {
                    assert!((out[grid.index(i, j, s)] - expected[s]).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn closed_form_adjoint_differs_by_diagonal_terms() {
        let grid = DiracGrid::square(8).unwrap();
        let p = params();
        let minus = build_h_minus(&p, &grid, CotThetaVariant::Literal);
        let dagger = build_h_minus_dagger(&p, &grid);
        let diff = dagger.matrix.sub(&minus.matrix);
        let g01 = GammaSet::standard().product(0, 1);
        let sh = p.tau.sinh();
        for ((pt, q), blk) in (DiscreteDiracOperator { matrix: diff, ..dagger }).blocks() {
            if blk.norm() == 0.0 {
                continue;
            }
            assert_eq!(pt, q);
            let t = grid.theta(grid.coords(pt).0);
            let expected = SpinMatrix::identity() * (I * p.tau.cosh() / sh) + g01 * (I * t.cos() / t.sin() / sh);
            assert!((blk - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn cot_block_is_odd_under_reflection() {
        let grid = DiracGrid::square(10).unwrap();
        for i in 0..grid.n_theta {
            let a = grid.theta(i);
            let b = grid.theta(grid.n_theta - 1 - i);
            assert!((a.cos() / a.sin() + b.cos() / b.sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn h_plus_adds_only_multiplication_blocks() {
        let grid = DiracGrid::square(8).unwrap();
        let p = params();
        let minus = build_h_minus(&p, &grid, CotThetaVariant::Literal);
        let plus = build_h_plus(&p, &grid, UnknownTerms::Solved(solve_fgu(1.5, 1.0, 1.0)));
        let diff = plus.matrix.sub(&minus.matrix);
        assert!(diff.pattern().iter().all(|&(r, c)| r / 2 == c / 2));
        // zero unknowns leave only the shared terms
        let bare = build_h_plus(&p, &grid, UnknownTerms::Vanishing);
        assert_eq!(bare.matrix, build_h_minus_dagger(&p, &grid).matrix);
    }

    #[test]
    fn fgu_worked_example() {
        let s = solve_fgu(1.5, 1.0, 1.0);
        let (tau, theta, phi) = (0.8, 1.1, 0.4);
        let csch = 1.0 / f64::sinh(tau);
        assert!((s.u(tau) + I * 2.5 * tau.cosh() * csch).norm() < 1e-14);
        assert!((s.f(tau, theta) + I * theta.cos() / theta.sin() * csch).norm() < 1e-14);
        let ratio = FgU::displayed_g(tau, theta, phi) / s.g(tau, theta, phi);
        assert!((ratio - 2.0).norm() < 1e-14);
        for c in s.conditions(tau, theta, phi) {
            assert!(c.norm() < 1e-14);
        }
    }

    #[test]
    fn eta_log_derivatives() {
        let e = eta2(1.3);
        for tau in [0.2, 1.0, 3.0] {
            assert!((e.log_tau_derivative(tau) - tau.cosh() / tau.sinh()).abs() < 1e-12);
        }
        let v = e.value(0.9, std::f64::consts::FRAC_PI_2, 0.0).unwrap();
        assert!((v / (I * 1.3f64.powf(1.5)) - 0.9f64.sinh()).norm() < 1e-14);
        let e1 = eta1(1.0, 1.5, 1.0, 1.0);
        let fd = e1.log_tau_derivative_fd(1.0, 0.7, 0.9, 1e-4).unwrap();
        assert!((fd - e1.log_tau_derivative(1.0)).abs() < 1e-8);
        assert!(e1.value(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn eta_ratios_scale_as_sqrt_ell() {
        let p = ell_power(|l| background_eta_ratio(l, 0.7, 1.1), 1.0, 2.0).unwrap();
        assert!((p - 0.5).abs() < 1e-12);
        let p = ell_power(|l| partner_eta_ratio(l, 0.7, 1.1, 0.6), 1.0, 3.0).unwrap();
        assert!((p - 0.5).abs() < 1e-12);
        let r = background_eta_ratio(1.0, 0.7, 1.1).unwrap();
        assert!((r - 1.0).norm() < 1e-14);
    }

    #[test]
    fn partner_metric_basics() {
        let g = partner_metric(2.0, 0.5, 1.0, 2.0).unwrap();
        assert_eq!(g.signature(), [-1, 1, 1, 1]);
        let expected = 2f64.powi(8) * 0.5f64.sinh().powi(6) * 1f64.sin().powi(2) * 2f64.sin().powi(2);
        assert!((-g.determinant() - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn toy_and_supercharge() {
        let eta: Vec<f64> = (1..=12).map(|k| 1.0 + 0.2 * (k as f64).sin().abs()).collect();
        let r = pseudo_hermitian_toy(&eta).unwrap();
        assert!(r.residual < 1e-13);
        assert!(r.non_hermiticity > 1e-3);
        let q = supercharge(&eta.iter().map(|&v| Complex64::new(v, 0.3)).collect::<Vec<_>>());
        assert_eq!(nilpotency_defect(&q), 0);
        assert!(q.nnz() > 0);
    }

    #[test]
    fn consistent_terms_converge_and_ablation_does_not() {
        let p = params();
        let mut pts = Vec::new();
        for n in [16, 32] {
            let setup = ResidualSetup {
                params: p,
                grid: DiracGrid::square(n).unwrap(),
                variant: CotThetaVariant::Half,
                exponents: [1.5, 1.0, 1.0],
                dtau: 1e-4,
                window: DEFAULT_WINDOW,
            };
            let r = intertwining_residuals(&setup).unwrap();
            assert!(r.r72_ablation > 0.1);
            assert!(r.r71 < 0.1);
            assert!(r.derivative_shift < 1e-8);
            pts.push((r.h_theta, r.r72));
        }
        let slope = convergence_slope(&pts);
        assert!((slope - 2.0).abs() < 0.3, "{slope}");
    }

    #[test]
    fn literal_variant_leaves_order_one_residual() {
        let setup = ResidualSetup {
            params: params(),
            grid: DiracGrid::square(24).unwrap(),
            variant: CotThetaVariant::Literal,
            exponents: [1.5, 1.0, 1.0],
            dtau: 1e-4,
            window: DEFAULT_WINDOW,
        };
        let r = intertwining_residuals(&setup).unwrap();
        assert!(r.r72 > 0.1 && r.r71 > 0.1);
    }
}
