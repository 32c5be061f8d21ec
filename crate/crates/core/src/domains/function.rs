//! Defining functions `r` with `Omega = {r < 0}`.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)] // f64 math under no_std
use num_traits::Float;

use crate::error::{Error, Result};
use crate::point::CPoint;

/// A convex defining function on C^d.
///
/// Gradients are returned as complex vectors whose j-th entry is
/// `dr/dx_j + i dr/dy_j` for `z_j = x_j + i y_j`, i.e. the real gradient
/// packed into C^d.
pub trait DefiningFunction: Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;

    fn value(&self, z: &CPoint) -> f64;

    fn gradient(&self, z: &CPoint) -> CPoint {
        let h = 1e-6 * (1.0 + z.norm());
        let mut g = CPoint::zeros(self.dim());
        for j in 0..self.dim() {
            for (k, unit) in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)].into_iter().enumerate() {
                let mut p = z.clone();
                let mut m = z.clone();
                p[j] += unit * h;
                m[j] -= unit * h;
                let d = (self.value(&p) - self.value(&m)) / (2.0 * h);
                if k == 0 {
                    g[j].re = d;
                } else {
                    g[j].im = d;
                }
            }
        }
        g
    }

    /// Polynomial form in `Re z_j, Im z_j`, when one is known.
    fn polynomial(&self) -> Option<&Polynomial> {
        None
    }
}

/// Real polynomial in the variables `x_1, y_1, ..., x_d, y_d`
/// (`z_j = x_j + i y_j`), stored as a monomial table.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<Vec<u32>, f64>,
}

impl Polynomial {
    /// Builds a polynomial from `(exponents, coefficient)` pairs; exponent
    /// vectors have length `2 * dim` ordered `[x_1, y_1, x_2, y_2, ...]`.
    pub fn new(dim: usize, terms: impl IntoIterator<Item = (Vec<u32>, f64)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("polynomial dimension must be >= 1".into()));
        }
        let mut map = BTreeMap::new();
        for (exps, coef) in terms {
            if exps.len() != 2 * dim {
                return Err(Error::InvalidArgument(alloc::format!(
                    "monomial exponent vector has length {}, expected {}",
                    exps.len(),
                    2 * dim
                )));
            }
            if !coef.is_finite() {
                return Err(Error::InvalidArgument("polynomial coefficients must be finite".into()));
            }
            *map.entry(exps).or_insert(0.0) += coef;
        }
        map.retain(|_, c| *c != 0.0);
        Ok(Self { dim, terms: map })
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, f64)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn real_coords(z: &CPoint) -> Vec<f64> {
        z.to_real()
    }

    pub fn eval_real(&self, xs: &[f64]) -> f64 {
        self.terms.iter().map(|(e, &c)| c * e.iter().zip(xs).map(|(&k, &x)| x.powi(k as i32)).product::<f64>()).sum()
    }

    /// Partial derivative with respect to real variable `var`.
    pub fn partial(&self, var: usize) -> Polynomial {
        let terms = self.terms.iter().filter(|(e, _)| e[var] > 0).map(|(e, &c)| {
            let mut d = e.clone();
            let k = d[var];
            d[var] -= 1;
            (d, c * k as f64)
        });
        Polynomial::new(self.dim, terms).expect("derivative keeps the shape")
    }
}

impl DefiningFunction for Polynomial {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, z: &CPoint) -> f64 {
        self.eval_real(&Self::real_coords(z))
    }

    fn gradient(&self, z: &CPoint) -> CPoint {
        let xs = Self::real_coords(z);
        let mut g = alloc::vec![0.0; 2 * self.dim];
        for (e, &coef) in &self.terms {
            for var in 0..xs.len() {
                if e[var] == 0 {
                    continue;
                }
                let mut term = coef * e[var] as f64;
                for (k, (&p, &x)) in e.iter().zip(&xs).enumerate() {
                    let p = if k == var { p - 1 } else { p };
                    term *= x.powi(p as i32);
                }
                g[var] += term;
            }
        }
        CPoint::from_real(&g)
    }

    fn polynomial(&self) -> Option<&Polynomial> {
        Some(self)
    }
}

type ValueFn = dyn Fn(&CPoint) -> f64 + Send + Sync;

/// Defining function given by a closure; gradients by central differences.
#[derive(Clone)]
pub struct FnDefining {
    dim: usize,
    value: Arc<ValueFn>,
}

impl FnDefining {
    pub fn new(dim: usize, value: impl Fn(&CPoint) -> f64 + Send + Sync + 'static) -> Self {
        Self { dim, value: Arc::new(value) }
    }
}

impl fmt::Debug for FnDefining {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnDefining").field("dim", &self.dim).finish_non_exhaustive()
    }
}

impl DefiningFunction for FnDefining {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, z: &CPoint) -> f64 {
        (self.value)(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::c;
    use alloc::vec;

    fn quartic() -> Polynomial {
        // -Im z1 + |z2|^4
        Polynomial::new(
            2,
            vec![(vec![0, 1, 0, 0], -1.0), (vec![0, 0, 4, 0], 1.0), (vec![0, 0, 2, 2], 2.0), (vec![0, 0, 0, 4], 1.0)],
        )
        .unwrap()
    }

    #[test]
    fn polynomial_value_and_gradient() {
        let p = quartic();
        let z = CPoint::new(vec![c(0.3, 0.2), c(0.5, -0.5)]).unwrap();
        // |z2|^2 = 0.5
        assert!((p.value(&z) - (-0.2 + 0.25)).abs() < 1e-15);
        let g = p.gradient(&z);
        // d/dx2 |z2|^4 = 4 |z2|^2 x2
        assert!((g[1].re - 4.0 * 0.5 * 0.5).abs() < 1e-14);
        assert!((g[0].im + 1.0).abs() < 1e-15);
        let fd = FnDefining::new(2, move |z| quartic().value(z));
        let g2 = fd.gradient(&z);
        assert!((&g - &g2).norm() < 1e-7);
    }

    #[test]
    fn wrong_exponent_length_is_rejected() {
        assert!(Polynomial::new(2, vec![(vec![1, 0], 1.0)]).is_err());
    }
}
