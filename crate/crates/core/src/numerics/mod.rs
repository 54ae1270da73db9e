//! Numerical kernels: symmetric eigendecomposition, SPD solves and the
//! Euclidean projection onto the probability simplex.

mod cholesky;
mod eigen;
pub(crate) mod simplex;

use alloc::vec::Vec;

use crate::error::{dim_err, Error, Result};
use crate::linalg::Matrix;

pub use cholesky::{solve_spd, Cholesky};
pub use eigen::{smallest_k_eigen, symmetric_eigen, Eigen};
pub use simplex::{project_simplex, SimplexVector, SIMPLEX_TOL};

/// A dense symmetric matrix.
///
/// Construction symmetrizes the input as `(A + Aᵀ) / 2`, so
/// `m[(i, j)] == m[(j, i)]` holds bit for bit afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    inner: Matrix,
}

impl SymMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        let (r, c) = m.shape();
        if r != c {
            return Err(dim_err!("symmetric matrix must be square, got {}x{}", r, c));
        }
        if r == 0 {
            return Err(dim_err!("symmetric matrix must be non-empty"));
        }
        if !m.is_finite() {
            return Err(Error::NonFinite("symmetric matrix"));
        }
        let mut m = m;
        for i in 0..r {
            for j in 0..i {
                let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
                m[(i, j)] = avg;
                m[(j, i)] = avg;
            }
        }
        Ok(Self { inner: m })
    }

    pub fn from_diag(diag: &[f64]) -> Result<Self> {
        Self::new(Matrix::from_diag(diag))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.inner.rows()
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.inner
    }

    pub fn into_matrix(self) -> Matrix {
        self.inner
    }

    pub fn trace(&self) -> f64 {
        self.inner.trace()
    }

    /// `Tr(Fᵀ M F)` for an `n × k` matrix `F`.
    pub fn quadratic_trace(&self, f: &Matrix) -> Result<f64> {
        if f.rows() != self.n() {
            return Err(dim_err!(
                "F has {} rows, matrix is {}x{}",
                f.rows(),
                self.n(),
                self.n()
            ));
        }
        let mf = self.inner.matmul(f)?;
        Ok(f.as_slice()
            .iter()
            .zip(mf.as_slice())
            .map(|(a, b)| a * b)
            .sum())
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self.inner[(i, i)]).collect()
    }
}

impl core::ops::Index<(usize, usize)> for SymMatrix {
    type Output = f64;

    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.inner[idx]
    }
}
