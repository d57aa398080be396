//! Minimal complex CSR matrix for the discretized Dirac operators.

use num_complex::Complex64;
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<Complex64>,
}

/// Accumulates (row, col, value) entries; duplicates are summed on build.
#[derive(Debug, Clone, Default)]
pub struct TripletBuilder {
    n: usize,
    entries: Vec<(usize, usize, Complex64)>,
}

impl TripletBuilder {
    pub fn new(n: usize) -> Self {
        Self { n, entries: Vec::new() }
    }

    pub fn push(&mut self, row: usize, col: usize, value: Complex64) {
        debug_assert!(row < self.n && col < self.n);
        if value != Complex64::new(0.0, 0.0) {
            self.entries.push((row, col, value));
        }
    }

    pub fn build(mut self) -> CsrMatrix {
        self.entries.sort_by_key(|e| (e.0, e.1));
        let mut row_ptr = vec![0; self.n + 1];
        let mut col_idx = Vec::with_capacity(self.entries.len());
        let mut values: Vec<Complex64> = Vec::with_capacity(self.entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in self.entries {
            if last == Some((r, c)) {
                *values.last_mut().expect("previous entry exists") += v;
                continue;
            }
            row_ptr[r + 1] += 1;
            col_idx.push(c);
            values.push(v);
            last = Some((r, c));
        }
        for i in 0..self.n {
            row_ptr[i + 1] += row_ptr[i];
        }
        CsrMatrix {
            n: self.n,
            row_ptr,
            col_idx,
            values,
        }
    }
}

impl CsrMatrix {
    pub fn zeros(n: usize) -> Self {
        TripletBuilder::new(n).build()
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![Complex64::new(1.0, 0.0); n])
    }

    pub fn diagonal(d: &[Complex64]) -> Self {
        let mut b = TripletBuilder::new(d.len());
        for (i, &v) in d.iter().enumerate() {
            b.push(i, i, v);
        }
        b.build()
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let (s, e) = (self.row_ptr[i], self.row_ptr[i + 1]);
        self.col_idx[s..e]
            .iter()
            .copied()
            .zip(self.values[s..e].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.row(i).find(|&(c, _)| c == j).map(|(_, v)| v).unwrap_or_default()
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.n).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.n).map(|i| self.row(i).map(|(j, v)| v * x[j]).sum()).collect()
    }

    fn combine(&self, other: &CsrMatrix, scale: Complex64) -> CsrMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut b = TripletBuilder::new(self.n);
        b.entries.extend(self.triplets());
        b.entries.extend(other.triplets().map(|(i, j, v)| (i, j, v * scale)));
        b.build()
    }

    pub fn add(&self, other: &CsrMatrix) -> CsrMatrix {
        self.combine(other, Complex64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &CsrMatrix) -> CsrMatrix {
        self.combine(other, Complex64::new(-1.0, 0.0))
    }

    pub fn scale(&self, s: Complex64) -> CsrMatrix {
        let mut m = self.clone();
        m.values.iter_mut().for_each(|v| *v *= s);
        m
    }

    pub fn conj_transpose(&self) -> CsrMatrix {
        let mut b = TripletBuilder::new(self.n);
        b.entries.extend(self.triplets().map(|(i, j, v)| (j, i, v.conj())));
        b.build()
    }

    /// diag(left) · A · diag(right).
    pub fn conjugate_diagonal(&self, left: &[Complex64], right: &[Complex64]) -> CsrMatrix {
        let mut m = self.clone();
        for i in 0..self.n {
            for k in m.row_ptr[i]..m.row_ptr[i + 1] {
                m.values[k] = left[i] * m.values[k] * right[m.col_idx[k]];
            }
        }
        m
    }

    pub fn matmul(&self, other: &CsrMatrix) -> CsrMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut b = TripletBuilder::new(self.n);
        for i in 0..self.n {
            for (k, a) in self.row(i) {
                for (j, v) in other.row(k) {
                    b.entries.push((i, j, a * v));
                }
            }
        }
        b.build()
    }

    /// Positions of stored entries whose value is nonzero.
    pub fn pattern(&self) -> BTreeSet<(usize, usize)> {
        self.triplets()
            .filter(|t| t.2 != Complex64::new(0.0, 0.0))
            .map(|(i, j, _)| (i, j))
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample() -> CsrMatrix {
        let mut b = TripletBuilder::new(3);
        b.push(0, 0, c(1.0, 0.0));
        b.push(0, 2, c(0.0, 2.0));
        b.push(2, 1, c(3.0, -1.0));
        b.push(2, 1, c(1.0, 0.0));
        b.build()
    }

    #[test]
    fn duplicates_are_summed() {
        let m = sample();
        assert_eq!(m.nnz(), 3);
        assert_eq!(m.get(2, 1), c(4.0, -1.0));
        assert_eq!(m.get(1, 1), c(0.0, 0.0));
    }

    #[test]
    fn matvec_and_adjoint() {
        let m = sample();
        let x = vec![c(1.0, 0.0), c(0.0, 1.0), c(2.0, 0.0)];
        let y = m.matvec(&x);
        assert_eq!(y[0], c(1.0, 4.0));
        assert_eq!(y[2], c(1.0, 4.0));
        let h = m.conj_transpose();
        assert_eq!(h.get(1, 2), c(4.0, 1.0));
        assert_eq!(h.conj_transpose(), m);
    }

    #[test]
    fn algebra() {
        let m = sample();
        assert_eq!(m.sub(&m).pattern().len(), 0);
        assert_eq!(m.add(&m), m.scale(c(2.0, 0.0)));
        let id = CsrMatrix::identity(3);
        assert_eq!(m.matmul(&id), m);
        let d = vec![c(2.0, 0.0), c(1.0, 0.0), c(0.5, 0.0)];
        let dinv: Vec<_> = d.iter().map(|v| v.inv()).collect();
        let back = m.conjugate_diagonal(&d, &dinv).conjugate_diagonal(&dinv, &d);
        assert!(back.sub(&m).max_abs() < 1e-15);
    }
}
