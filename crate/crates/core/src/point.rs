//! Points and vectors in C^d.

use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
#[allow(unused_imports)] // f64 math under no_std
use num_traits::Float;

use crate::error::{Error, Result};

/// A point (or vector) of C^d with runtime dimension d >= 1.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct CPoint(Vec<Complex64>);

impl CPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument("points need at least one coordinate".into()));
        }
        if coords.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidArgument("coordinates must be finite".into()));
        }
        Ok(Self(coords))
    }

    /// Builds a point without validation. Callers guarantee finiteness.
    pub(crate) fn raw(coords: Vec<Complex64>) -> Self {
        Self(coords)
    }

    pub fn from_slice(coords: &[Complex64]) -> Self {
        Self(coords.to_vec())
    }

    /// Point with purely real coordinates.
    pub fn real(coords: &[f64]) -> Self {
        Self(coords.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn scalar(z: Complex64) -> Self {
        Self(alloc::vec![z])
    }

    pub fn zeros(dim: usize) -> Self {
        Self(alloc::vec![Complex64::new(0.0, 0.0); dim])
    }

    /// The j-th standard basis vector.
    pub fn basis(dim: usize, j: usize) -> Self {
        let mut p = Self::zeros(dim);
        p.0[j] = Complex64::new(1.0, 0.0);
        p
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Complex64> {
        self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        // scaled to avoid overflow for large dilations
        let scale = self.0.iter().fold(0.0_f64, |m, c| m.max(c.re.abs()).max(c.im.abs()));
        if scale == 0.0 {
            return 0.0;
        }
        let s: f64 = self.0.iter().map(|c| (c / scale).norm_sqr()).sum();
        scale * s.sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    /// Hermitian product `sum conj(self_j) * other_j`.
    pub fn hdot(&self, other: &CPoint) -> Complex64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }

    /// Real inner product of the underlying R^{2d} vectors.
    pub fn rdot(&self, other: &CPoint) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.re * b.re + a.im * b.im).sum()
    }

    pub fn dist(&self, other: &CPoint) -> f64 {
        (self - other).norm()
    }

    pub fn scale(&self, s: f64) -> CPoint {
        CPoint(self.0.iter().map(|c| c * s).collect())
    }

    pub fn cscale(&self, s: Complex64) -> CPoint {
        CPoint(self.0.iter().map(|c| c * s).collect())
    }

    /// Unit vector in the same direction; `None` for the zero vector.
    pub fn normalized(&self) -> Option<CPoint> {
        let n = self.norm();
        (n > 0.0).then(|| self.scale(1.0 / n))
    }

    /// `self + t * dir`
    pub fn offset(&self, dir: &CPoint, t: f64) -> CPoint {
        CPoint(self.0.iter().zip(&dir.0).map(|(a, b)| a + b * t).collect())
    }

    /// `self + zeta * dir` for a complex step.
    pub fn coffset(&self, dir: &CPoint, zeta: Complex64) -> CPoint {
        CPoint(self.0.iter().zip(&dir.0).map(|(a, b)| a + b * zeta).collect())
    }

    /// Linear interpolation `(1-t) self + t other`.
    pub fn lerp(&self, other: &CPoint, t: f64) -> CPoint {
        CPoint(self.0.iter().zip(&other.0).map(|(a, b)| a + (b - a) * t).collect())
    }

    pub fn slice(&self, start: usize, len: usize) -> CPoint {
        CPoint(self.0[start..start + len].to_vec())
    }

    pub fn concat(&self, other: &CPoint) -> CPoint {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        CPoint(v)
    }

    /// Coordinates as a real vector `[re_0, im_0, re_1, im_1, ...]`.
    pub fn to_real(&self) -> Vec<f64> {
        self.0.iter().flat_map(|c| [c.re, c.im]).collect()
    }

    pub fn from_real(v: &[f64]) -> CPoint {
        CPoint(v.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect())
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: dim, found: self.dim() })
        }
    }
}

impl Index<usize> for CPoint {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for CPoint {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.0[i]
    }
}

impl Add for &CPoint {
    type Output = CPoint;
    fn add(self, rhs: &CPoint) -> CPoint {
        CPoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &CPoint {
    type Output = CPoint;
    fn sub(self, rhs: &CPoint) -> CPoint {
        CPoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &CPoint {
    type Output = CPoint;
    fn neg(self) -> CPoint {
        CPoint(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<f64> for &CPoint {
    type Output = CPoint;
    fn mul(self, rhs: f64) -> CPoint {
        self.scale(rhs)
    }
}

impl From<Complex64> for CPoint {
    fn from(z: Complex64) -> Self {
        CPoint::scalar(z)
    }
}

/// Shorthand constructor for a complex number.
#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
