//! Banded Cholesky factorization for the real symmetric covariance matrices
//! used by both whiteners.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Smallest accepted pivot before a matrix is declared not positive definite.
pub const PIVOT_TOL: f64 = 1e-12;

/// Upper-triangular factor `U` with `A = U^T U`, stored by rows with `bw`
/// superdiagonals. A dense factor is the special case `bw = n - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedUpper {
    n: usize,
    bw: usize,
    // row i holds U[i][i..=i+bw]
    data: Vec<f64>,
}

impl BandedUpper {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j < i || j > i + self.bw || j >= self.n {
            0.0
        } else {
            self.data[i * (self.bw + 1) + (j - i)]
        }
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * (self.bw + 1) + (j - i)] = v;
    }

    /// Factors the symmetric matrix whose entries are `a(i, j)` for
    /// `|i - j| <= bw`; entries outside the band are taken as zero.
    pub fn factor<F: Fn(usize, usize) -> f64>(n: usize, bw: usize, a: F) -> Result<Self> {
        let bw = bw.min(n.saturating_sub(1));
        let mut u = BandedUpper {
            n,
            bw,
            data: vec![0.0; n * (bw + 1)],
        };
        for i in 0..n {
            let k0 = i.saturating_sub(bw);
            let mut d = a(i, i);
            for k in k0..i {
                let v = u.get(k, i);
                d -= v * v;
            }
            if !(d > PIVOT_TOL) {
                return Err(Error::NotPositiveDefinite { row: i, pivot: d });
            }
            let uii = d.sqrt();
            u.set(i, i, uii);
            for j in i + 1..(i + bw + 1).min(n) {
                let mut s = a(i, j);
                for k in j.saturating_sub(bw)..i {
                    s -= u.get(k, i) * u.get(k, j);
                }
                u.set(i, j, s / uii);
            }
        }
        Ok(u)
    }

    /// Solves `U^T z = b` by forward substitution.
    pub fn solve_transpose(&self, b: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(b.len(), self.n, "dimension mismatch");
        let mut z = vec![Complex64::new(0.0, 0.0); self.n];
        for i in 0..self.n {
            let mut s = b[i];
            for k in i.saturating_sub(self.bw)..i {
                s -= z[k] * self.get(k, i);
            }
            z[i] = s / self.get(i, i);
        }
        z
    }

    /// Real-valued variant of [`solve_transpose`](Self::solve_transpose).
    pub fn solve_transpose_real(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n, "dimension mismatch");
        let mut z = vec![0.0; self.n];
        for i in 0..self.n {
            let mut s = b[i];
            for k in i.saturating_sub(self.bw)..i {
                s -= z[k] * self.get(k, i);
            }
            z[i] = s / self.get(i, i);
        }
        z
    }

    /// `(U^T U)[i][j]`, used to check the factorization.
    pub fn reconstruct(&self, i: usize, j: usize) -> f64 {
        (0..=i.min(j)).map(|k| self.get(k, i) * self.get(k, j)).sum()
    }

    /// Dense lower-triangular `U^{-T}` as rows, for small matrices applied
    /// many times.
    pub fn inverse_transpose(&self) -> Vec<Vec<f64>> {
        let mut rows = vec![vec![0.0; self.n]; self.n];
        for c in 0..self.n {
            let mut e = vec![0.0; self.n];
            e[c] = 1.0;
            let col = self.solve_transpose_real(&e);
            for (r, v) in col.into_iter().enumerate() {
                rows[r][c] = v;
            }
        }
        rows
    }
}
