use alloc::vec::Vec;

use super::SymMatrix;
use crate::error::{dim_err, Error, Result};
use crate::linalg::Matrix;

/// Relative ridge added when the first factorization attempt fails.
const RIDGE_FACTOR: f64 = 1e-10;
/// Pivots at or below `PIVOT_FLOOR · trace/n` count as singular.
const PIVOT_FLOOR: f64 = 1e-12;

/// Lower-triangular Cholesky factor `A = L Lᵀ`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    // row-major lower triangle, full n×n storage
    l: Vec<f64>,
    ridge: f64,
}

impl Cholesky {
    /// Factors `a`, retrying once with `δ·I`, `δ = 1e-10 · trace/n`, if the
    /// plain factorization hits a non-positive pivot.
    pub fn new(a: &SymMatrix) -> Result<Self> {
        match Self::factor(a, 0.0) {
            Ok(c) => Ok(c),
            Err(_) => {
                let n = a.n() as f64;
                let ridge = RIDGE_FACTOR * (a.trace() / n).abs();
                if ridge == 0.0 {
                    return Self::factor(a, f64::MIN_POSITIVE);
                }
                Self::factor(a, ridge)
            }
        }
    }

    /// Factors without any ridge, `None` when a pivot falls below the floor.
    pub fn factor_exact(a: &SymMatrix) -> Option<Self> {
        Self::factor(a, 0.0).ok()
    }

    fn factor(a: &SymMatrix, ridge: f64) -> Result<Self> {
        let n = a.n();
        let floor = PIVOT_FLOOR * (a.trace() / n as f64).abs();
        let mut l = alloc::vec![0.0; n * n];
        for j in 0..n {
            let mut diag = a[(j, j)] + ridge;
            for k in 0..j {
                diag -= l[j * n + k] * l[j * n + k];
            }
            // written negated so NaN fails too
            #[allow(clippy::neg_cmp_op_on_partial_ord)]
            let rejected = !(diag > floor) || !diag.is_finite();
            if rejected {
                return Err(Error::Singular {
                    pivot: j,
                    value: diag,
                });
            }
            let ljj = libm::sqrt(diag);
            l[j * n + j] = ljj;
            for i in (j + 1)..n {
                let mut s = a[(i, j)];
                let (ri, rj) = (&l[i * n..i * n + j], &l[j * n..j * n + j]);
                for (x, y) in ri.iter().zip(rj) {
                    s -= x * y;
                }
                l[i * n + j] = s / ljj;
            }
        }
        Ok(Self { n, l, ridge })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Ridge that was needed to factor, zero when none.
    pub fn ridge(&self) -> f64 {
        self.ridge
    }

    /// Solves `A x = b` in place for one right-hand side.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.n;
        debug_assert_eq!(b.len(), n);
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= self.l[i * n + k] * b[k];
            }
            b[i] = s / self.l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for k in (i + 1)..n {
                s -= self.l[k * n + i] * b[k];
            }
            b[i] = s / self.l[i * n + i];
        }
    }

    /// Solves `A Y = B` column by column.
    pub fn solve(&self, b: &Matrix) -> Result<Matrix> {
        if b.rows() != self.n {
            return Err(dim_err!(
                "right-hand side has {} rows, system is {}",
                b.rows(),
                self.n
            ));
        }
        // work on Bᵀ so each right-hand side is contiguous
        let mut bt = b.transpose();
        for j in 0..bt.rows() {
            self.solve_in_place(bt.row_mut(j));
        }
        Ok(bt.transpose())
    }
}

/// Solves `a · Y = b` for symmetric positive definite `a`.
pub fn solve_spd(a: &SymMatrix, b: &Matrix) -> Result<Matrix> {
    if !b.is_finite() {
        return Err(Error::NonFinite("right-hand side"));
    }
    Cholesky::new(a)?.solve(b)
}
