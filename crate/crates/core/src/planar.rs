//! Exact Kobayashi geometry of planar catalog domains.
//!
//! Disks, half-planes and sectors are mapped conformally onto the unit disk,
//! where `k(0; v) = |v|` and `K(z, w) = arctanh |(z - w) / (1 - conj(w) z)|`.
//! Half-planes and sectors are evaluated in upper half-plane coordinates,
//! which keeps distances accurate near the boundary.

use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // f64 math under no_std
use num_traits::Float;

use crate::domains::{ConvexDomain, Node};
use crate::error::{Error, Result};
use crate::point::{c, CPoint};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Kobayashi distance of the unit disk.
pub fn disk_distance(z: Complex64, w: Complex64) -> Result<f64> {
    let (nz, nw) = (z.norm(), w.norm());
    if !(nz < 1.0) || !(nw < 1.0) {
        return Err(Error::NotInDomain);
    }
    Ok(disk_distance_unchecked(z, w))
}

fn disk_distance_unchecked(z: Complex64, w: Complex64) -> f64 {
    let num = (z - w).norm();
    if num == 0.0 {
        return 0.0;
    }
    let den = (Complex64::new(1.0, 0.0) - w.conj() * z).norm();
    let (nz, nw) = (z.norm(), w.norm());
    let gap = ((1.0 - nz) * (1.0 + nz) * (1.0 - nw) * (1.0 + nw)).sqrt();
    ((den + num) / gap).ln()
}

/// Kobayashi distance of the upper half-plane.
fn upper_distance(s: Complex64, t: Complex64) -> f64 {
    let num = (s - t).norm();
    if num == 0.0 {
        return 0.0;
    }
    let den = (s - t.conj()).norm();
    ((den + num) / (2.0 * (s.im * t.im).sqrt())).ln()
}

/// Disk automorphism `w -> e^{i phi} (w - a) / (1 - conj(a) w)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mobius {
    pub a: Complex64,
    pub phi: f64,
}

impl Mobius {
    pub fn new(a: Complex64, phi: f64) -> Result<Self> {
        if !(a.norm() < 1.0) || !phi.is_finite() {
            return Err(Error::InvalidArgument("automorphism needs |a| < 1".into()));
        }
        Ok(Self { a, phi })
    }

    fn rot(&self) -> Complex64 {
        c(self.phi.cos(), self.phi.sin())
    }

    pub fn apply(&self, w: Complex64) -> Complex64 {
        self.rot() * (w - self.a) / (1.0 - self.a.conj() * w)
    }

    pub fn derivative(&self, w: Complex64) -> Complex64 {
        let d = 1.0 - self.a.conj() * w;
        self.rot() * (1.0 - self.a.norm_sqr()) / (d * d)
    }

    pub fn inverse(&self, u: Complex64) -> Complex64 {
        let v = u * self.rot().conj();
        (v + self.a) / (1.0 + self.a.conj() * v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Model {
    Disk {
        center: Complex64,
        radius: f64,
    },
    /// `s = i (z - point) conj(normal)` onto the upper half-plane.
    HalfPlane {
        point: Complex64,
        normal: Complex64,
    },
    /// `s = ((z - vertex) e^{-i alpha})^{pi / opening}` onto the upper half-plane.
    Sector {
        vertex: Complex64,
        alpha: f64,
        power: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ChartKind {
    Disk,
    HalfPlane,
    Sector,
}

/// Biholomorphism of a planar catalog domain onto the unit disk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConformalChart {
    model: Model,
    post: Option<Mobius>,
}

impl ConformalChart {
    pub fn new(domain: &ConvexDomain) -> Result<Self> {
        let model = match *domain.node() {
            Node::Disk { center, radius } => Model::Disk { center, radius },
            Node::HalfPlane { point, normal } => Model::HalfPlane { point, normal },
            Node::Sector { vertex, alpha, beta } => Model::Sector { vertex, alpha, power: PI / (beta - alpha) },
            _ => return Err(Error::NotPlanarCatalog),
        };
        Ok(Self { model, post: None })
    }

    /// The same chart followed by a disk automorphism.
    pub fn with_automorphism(mut self, m: Mobius) -> Self {
        self.post = Some(m);
        self
    }

    pub fn kind(&self) -> ChartKind {
        match self.model {
            Model::Disk { .. } => ChartKind::Disk,
            Model::HalfPlane { .. } => ChartKind::HalfPlane,
            Model::Sector { .. } => ChartKind::Sector,
        }
    }

    /// Upper half-plane coordinate and its derivative (half-planes and sectors only).
    fn upper(&self, z: Complex64) -> Option<(Complex64, Complex64)> {
        match self.model {
            Model::Disk { .. } => None,
            Model::HalfPlane { point, normal } => Some((I * (z - point) * normal.conj(), I * normal.conj())),
            Model::Sector { vertex, alpha, power } => {
                let rot = c(alpha.cos(), -alpha.sin());
                let zeta = (z - vertex) * rot;
                let s = (zeta.ln() * power).exp();
                Some((s, s * power / zeta * rot))
            }
        }
    }

    fn upper_to_domain(&self, s: Complex64) -> Complex64 {
        match self.model {
            Model::Disk { .. } => unreachable!("disk charts have no half-plane stage"),
            Model::HalfPlane { point, normal } => point - I * s * normal,
            Model::Sector { vertex, alpha, power } => {
                let zeta = (s.ln() / power).exp();
                vertex + zeta * c(alpha.cos(), alpha.sin())
            }
        }
    }

    fn base(&self, z: Complex64) -> (Complex64, Complex64) {
        match self.model {
            Model::Disk { center, radius } => ((z - center) / radius, c(1.0 / radius, 0.0)),
            _ => {
                let (s, ds) = self.upper(z).expect("half-plane stage");
                let w = (s - I) / (s + I);
                (w, ds * 2.0 * I / ((s + I) * (s + I)))
            }
        }
    }

    pub fn forward(&self, z: Complex64) -> Complex64 {
        let w = self.base(z).0;
        self.post.map_or(w, |m| m.apply(w))
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let (w, dw) = self.base(z);
        self.post.map_or(dw, |m| m.derivative(w) * dw)
    }

    pub fn inverse(&self, u: Complex64) -> Complex64 {
        let w = self.post.map_or(u, |m| m.inverse(u));
        match self.model {
            Model::Disk { center, radius } => center + w * radius,
            _ => self.upper_to_domain(I * (1.0 + w) / (1.0 - w)),
        }
    }

    /// Kobayashi distance between two points of the domain.
    pub fn distance(&self, z: Complex64, w: Complex64) -> f64 {
        if self.post.is_none() {
            match self.model {
                Model::Disk { center, radius } => {
                    return disk_distance_unchecked((z - center) / radius, (w - center) / radius)
                }
                _ => {
                    let (s, _) = self.upper(z).expect("half-plane stage");
                    let (t, _) = self.upper(w).expect("half-plane stage");
                    return upper_distance(s, t);
                }
            }
        }
        disk_distance_unchecked(self.forward(z), self.forward(w))
    }

    /// Infinitesimal metric `|f'(z) v| / (1 - |f(z)|^2)`.
    pub fn metric(&self, z: Complex64, v: Complex64) -> f64 {
        if self.post.is_none() {
            match self.model {
                Model::Disk { center, radius } => {
                    let r = (z - center).norm();
                    return v.norm() * radius / ((radius - r) * (radius + r));
                }
                _ => {
                    let (s, ds) = self.upper(z).expect("half-plane stage");
                    return (ds * v).norm() / (2.0 * s.im);
                }
            }
        }
        let w = self.forward(z);
        (self.derivative(z) * v).norm() / (1.0 - w.norm_sqr())
    }

    /// Point at fraction `t` of the geodesic from `z` to `w`, parametrized
    /// proportionally to arclength.
    pub fn geodesic(&self, z: Complex64, w: Complex64, t: f64) -> Complex64 {
        if z == w {
            return z;
        }
        if self.post.is_none() && self.kind() != ChartKind::Disk {
            let (s1, _) = self.upper(z).expect("half-plane stage");
            let (s2, _) = self.upper(w).expect("half-plane stage");
            // recenter the half-plane at s1
            let u2 = (s2 - s1) / (s2 - s1.conj());
            let d = upper_distance(s1, s2);
            let u = u2 / u2.norm() * (t * d).tanh();
            return self.upper_to_domain((s1 - s1.conj() * u) / (1.0 - u));
        }
        let a = self.forward(z);
        let b = self.forward(w);
        let m = Mobius { a, phi: 0.0 };
        let bb = m.apply(b);
        let d = disk_distance_unchecked(a, b);
        let u = bb / bb.norm() * (t * d).tanh();
        self.inverse(m.inverse(u))
    }
}

fn planar_point(domain: &ConvexDomain, z: Complex64) -> Result<()> {
    if domain.contains(&CPoint::scalar(z))? {
        Ok(())
    } else {
        Err(Error::NotInDomain)
    }
}

pub fn chart(domain: &ConvexDomain) -> Result<ConformalChart> {
    ConformalChart::new(domain)
}

pub fn planar_distance(domain: &ConvexDomain, z: Complex64, w: Complex64) -> Result<f64> {
    let ch = ConformalChart::new(domain)?;
    planar_point(domain, z)?;
    planar_point(domain, w)?;
    Ok(ch.distance(z, w))
}

pub fn planar_metric(domain: &ConvexDomain, z: Complex64, v: Complex64) -> Result<f64> {
    let ch = ConformalChart::new(domain)?;
    planar_point(domain, z)?;
    Ok(ch.metric(z, v))
}

pub fn planar_geodesic(domain: &ConvexDomain, z: Complex64, w: Complex64, t: f64) -> Result<Complex64> {
    let ch = ConformalChart::new(domain)?;
    planar_point(domain, z)?;
    planar_point(domain, w)?;
    Ok(ch.geodesic(z, w, t))
}
