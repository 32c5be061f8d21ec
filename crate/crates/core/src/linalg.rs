//! Small complex matrices for affine maps of C^d.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
#[allow(unused_imports)] // f64 math under no_std
use num_traits::Float;

use crate::error::{Error, Result};
use crate::point::CPoint;

const UNITARY_TOL: f64 = 1e-12;

/// Invertible complex d x d matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix(DMatrix<Complex64>);

impl CMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("matrix must be square and nonempty".into()));
        }
        if rows.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("matrix entries must be finite".into()));
        }
        Ok(Self(DMatrix::from_fn(n, n, |i, j| rows[i][j])))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_column_slice(entries)))
    }

    pub fn scalar(n: usize, s: Complex64) -> Self {
        Self(DMatrix::identity(n, n) * s)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.dim()).map(|i| (0..self.dim()).map(|j| self.0[(i, j)]).collect()).collect()
    }

    pub fn try_inverse(&self) -> Result<Self> {
        let inv =
            self.0.clone().try_inverse().ok_or_else(|| Error::InvalidDomain("affine matrix is singular".into()))?;
        if inv.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidDomain("affine matrix is singular".into()));
        }
        Ok(Self(inv))
    }

    pub fn apply(&self, v: &CPoint) -> CPoint {
        let n = self.dim();
        CPoint::raw((0..n).map(|i| (0..n).map(|j| self.0[(i, j)] * v[j]).sum()).collect())
    }

    /// Applies the conjugate transpose.
    pub fn apply_adjoint(&self, v: &CPoint) -> CPoint {
        let n = self.dim();
        CPoint::raw((0..n).map(|i| (0..n).map(|j| self.0[(j, i)].conj() * v[j]).sum()).collect())
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        CMatrix(&self.0 * &other.0)
    }

    /// Returns `s` when the matrix equals `s * U` with U unitary.
    pub fn unitary_scale(&self) -> Option<f64> {
        let g = self.0.adjoint() * &self.0;
        let s2 = g[(0, 0)].re;
        if s2 <= 0.0 {
            return None;
        }
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j { s2 } else { 0.0 };
                if (g[(i, j)] - Complex64::new(expect, 0.0)).norm() > UNITARY_TOL * s2 {
                    return None;
                }
            }
        }
        Some(s2.sqrt())
    }

    /// Diagonal entries when the matrix is diagonal.
    pub fn as_diagonal(&self) -> Option<Vec<Complex64>> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                if i != j && self.0[(i, j)].norm() != 0.0 {
                    return None;
                }
            }
        }
        Some((0..n).map(|i| self.0[(i, i)]).collect())
    }

    /// Splits a block-diagonal matrix at index `k`.
    pub fn split_block_diagonal(&self, k: usize) -> Option<(CMatrix, CMatrix)> {
        let n = self.dim();
        if k == 0 || k >= n {
            return None;
        }
        for i in 0..n {
            for j in 0..n {
                if (i < k) != (j < k) && self.0[(i, j)].norm() != 0.0 {
                    return None;
                }
            }
        }
        let a = self.0.view((0, 0), (k, k)).into_owned();
        let b = self.0.view((k, k), (n - k, n - k)).into_owned();
        Some((CMatrix(a), CMatrix(b)))
    }
}
