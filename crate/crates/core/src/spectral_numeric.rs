//! Finite-difference oracle for 1D Schrödinger-like operators −d²/dx² + V(x).
//!
//! Operators are discretized with the three-point stencil and homogeneous
//! Dirichlet ends. Eigenvalues come from Sturm-sequence bisection, vectors
//! from inverse iteration. Non-Hermitian tridiagonal matrices go through a
//! dense complex Schur decomposition.

use crate::error::{invalid, Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Uniform grid of `n` interior points on `(lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Grid1D {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(invalid("n", format!("grid needs at least 3 interior points, got {n}")));
        }
        if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(invalid("hi", format!("empty interval ({lo}, {hi})")));
        }
        Ok(Self { lo, hi, n })
    }

    pub fn h(&self) -> f64 {
        (self.hi - self.lo) / (self.n as f64 + 1.0)
    }

    pub fn point(&self, i: usize) -> f64 {
        self.lo + (i as f64 + 1.0) * self.h()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.point(i)).collect()
    }
}

/// Real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
    pub grid: Option<Grid1D>,
}

impl TridiagonalOperator {
    pub fn from_parts(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(invalid("offdiag", "length must be diag.len() − 1"));
        }
        Ok(Self {
            diag,
            offdiag,
            grid: None,
        })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.offdiag[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.offdiag[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.offdiag[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    fn norm_bound(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs())
    }
}

/// diag_i = 2/h² + V(x_i), offdiag = −1/h².
pub fn discretize(potential: impl Fn(f64) -> f64, grid: &Grid1D) -> Result<TridiagonalOperator> {
    let h = grid.h();
    let inv_h2 = 1.0 / (h * h);
    let mut diag = Vec::with_capacity(grid.n);
    for (i, x) in grid.points().into_iter().enumerate() {
        let v = potential(x);
        if !v.is_finite() {
            return Err(Error::Domain(format!(
                "potential is not finite at grid point {i} (x = {x})"
            )));
        }
        diag.push(2.0 * inv_h2 + v);
    }
    Ok(TridiagonalOperator {
        diag,
        offdiag: vec![-inv_h2; grid.n - 1],
        grid: Some(*grid),
    })
}

/// Number of eigenvalues strictly below `x` (negative pivots of the LDLᵀ
/// factorization of T − xI).
pub fn sturm_count(op: &TridiagonalOperator, x: f64) -> usize {
    let guard = f64::MIN_POSITIVE.sqrt() * op.norm_bound().max(1.0);
    let mut count = 0;
    let mut q = op.diag[0] - x;
    for i in 0..op.len() {
        if i > 0 {
            let e = op.offdiag[i - 1];
            q = op.diag[i] - x - e * e / q;
        }
        if q == 0.0 {
            q = -guard;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Normalized so that h Σ v_i² = 1 (h = 1 without a grid).
    pub eigenvectors: Option<Vec<Vec<f64>>>,
}

// bisect down to a few ulps
const REL_TOL: f64 = 4.0 * f64::EPSILON;
const CLUSTER_GAP: f64 = 1e-8;

fn bisect(op: &TridiagonalOperator, index: usize, mut lo: f64, mut hi: f64) -> Result<f64> {
    let floor = 2.0 * f64::EPSILON * op.norm_bound();
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= (REL_TOL * mid.abs()).max(floor) || mid == lo || mid == hi {
            return Ok(mid);
        }
        if sturm_count(op, mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(Error::Convergence {
        what: format!("bisection for eigenvalue {index}"),
        iterations: 400,
    })
}

/// Solves (T − λI)x = b by tridiagonal LU with partial pivoting.
fn shifted_solve(op: &TridiagonalOperator, lambda: f64, b: &[f64]) -> Vec<f64> {
    let n = op.len();
    let tiny = f64::EPSILON * op.norm_bound().max(f64::MIN_POSITIVE);
    // rows of the upper factor: (u0, u1, u2) at columns i, i+1, i+2
    let mut u = vec![[0.0f64; 3]; n];
    let mut rhs = b.to_vec();
    let mut cur = [op.diag[0] - lambda, if n > 1 { op.offdiag[0] } else { 0.0 }, 0.0];
    for i in 0..n {
        if i + 1 == n {
            if cur[0].abs() < tiny {
                cur[0] = tiny;
            }
            u[i] = cur;
            break;
        }
        let sub = op.offdiag[i];
        let next = [
            sub,
            op.diag[i + 1] - lambda,
            if i + 2 < n { op.offdiag[i + 1] } else { 0.0 },
        ];
        let (pivot_row, mut other) = if sub.abs() > cur[0].abs() {
            rhs.swap(i, i + 1);
            (next, cur)
        } else {
            (cur, next)
        };
        let mut pivot_row = pivot_row;
        if pivot_row[0].abs() < tiny {
            pivot_row[0] = tiny;
        }
        let factor = other[0] / pivot_row[0];
        other[0] = other[1] - factor * pivot_row[1];
        other[1] = other[2] - factor * pivot_row[2];
        other[2] = 0.0;
        rhs[i + 1] -= factor * rhs[i];
        u[i] = pivot_row;
        cur = other;
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = rhs[i];
        if i + 1 < n {
            s -= u[i][1] * x[i + 1];
        }
        if i + 2 < n {
            s -= u[i][2] * x[i + 2];
        }
        x[i] = s / u[i][0];
    }
    x
}

fn inverse_iteration(op: &TridiagonalOperator, lambda: f64, previous: &[Vec<f64>]) -> Vec<f64> {
    let n = op.len();
    // deterministic, non-symmetric start vector
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i * 7919 % 101) as f64 / 101.0)).collect();
    let orthogonalize = |v: &mut Vec<f64>| {
        for p in previous {
            let d: f64 = v.iter().zip(p).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(p).for_each(|(a, b)| *a -= d * b);
        }
    };
    for _ in 0..4 {
        orthogonalize(&mut v);
        let mut x = shifted_solve(op, lambda, &v);
        orthogonalize(&mut x);
        let norm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
        v = x.into_iter().map(|a| a / norm).collect();
    }
    v
}

/// The `k` smallest eigenvalues of a symmetric tridiagonal matrix, with
/// eigenvectors on request.
pub fn eigen_smallest(op: &TridiagonalOperator, k: usize, want_vectors: bool) -> Result<EigenResult> {
    if k > op.len() {
        return Err(invalid(
            "k",
            format!("requested {k} eigenvalues of a {}×{} matrix", op.len(), op.len()),
        ));
    }
    let (lo, hi) = op.gershgorin();
    let pad = 1e-12 * (hi - lo).abs().max(1.0);
    let (lo, hi) = (lo - pad, hi + pad);
    let mut eigenvalues = Vec::with_capacity(k);
    for index in 0..k {
        let start = eigenvalues.last().copied().unwrap_or(lo).max(lo);
        eigenvalues.push(bisect(op, index, start, hi)?);
    }

    let eigenvectors = want_vectors.then(|| {
        // unit 2-norm vectors; previous members of a cluster are kept for reorthogonalization
        let mut unit: Vec<Vec<f64>> = Vec::with_capacity(k);
        let mut cluster_start = 0;
        for (j, &lambda) in eigenvalues.iter().enumerate() {
            if j > 0 && (lambda - eigenvalues[j - 1]).abs() >= CLUSTER_GAP * lambda.abs().max(1.0) {
                cluster_start = j;
            }
            let v = inverse_iteration(op, lambda, &unit[cluster_start..j]);
            unit.push(v);
        }
        let h = op.grid.map(|g| g.h()).unwrap_or(1.0);
        unit.into_iter()
            .map(|v| {
                let scale = 1.0 / h.sqrt();
                let sign = v.iter().find(|a| a.abs() > 1e-8).map(|a| a.signum()).unwrap_or(1.0);
                v.into_iter().map(|a| a * scale * sign).collect()
            })
            .collect()
    });
    Ok(EigenResult {
        eigenvalues,
        eigenvectors,
    })
}

/// The `k` eigenvalues of smallest modulus of a complex symmetric tridiagonal
/// matrix, sorted by modulus. Uses a dense Schur decomposition.
pub fn complex_spectrum(diag: &[Complex64], offdiag: &[Complex64], k: usize) -> Result<Vec<Complex64>> {
    let n = diag.len();
    if n == 0 || offdiag.len() + 1 != n {
        return Err(invalid("offdiag", "length must be diag.len() − 1"));
    }
    if k > n {
        return Err(invalid("k", format!("requested {k} eigenvalues of a {n}×{n} matrix")));
    }
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = diag[i];
        if i + 1 < n {
            m[(i, i + 1)] = offdiag[i];
            m[(i + 1, i)] = offdiag[i];
        }
    }
    let max_iter = 100 * n.max(10);
    let schur = nalgebra::linalg::Schur::try_new(m, f64::EPSILON, max_iter).ok_or(Error::Convergence {
        what: "complex Schur decomposition".into(),
        iterations: max_iter,
    })?;
    let (_, t) = schur.unpack();
    let mut values: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    values.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then(a.im.total_cmp(&b.im)));
    values.truncate(k);
    Ok(values)
}

/// One Richardson step for an error expansion c·h^order.
pub fn richardson(coarse: f64, fine: f64, ratio: f64, order: i32) -> f64 {
    let f = ratio.powi(order);
    (f * fine - coarse) / (f - 1.0)
}
