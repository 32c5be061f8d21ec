//! Windowed Hausdorff distances, rescaling sequences and convergence of
//! Kobayashi distances along them.

use alloc::vec::Vec;

#[allow(unused_imports)] // f64 math under no_std
use num_traits::Float;

use crate::domains::{dykstra, ConvexDomain};
use crate::error::{Error, Result};
use crate::numeric::{ball_point, nelder_mead, rng, sphere_directions};
use crate::point::CPoint;

mod convergence;
mod example36;
mod scaling;

pub use convergence::{convergence_check, ConvergenceRow, ConvergenceTable};
pub use example36::{example36, Example36Config, Example36Report, HausdorffStep};
pub use scaling::{
    frankel_2b, scaling_lemma32, FrankelConfig, FrankelReport, FrankelStep, GraphData, ScalingKind, ScalingSequence,
};

/// Default number of ray directions per set.
pub const DEFAULT_DIRECTIONS: usize = 4096;

/// Sampled Hausdorff distance between the windows `cl(A) ∩ B(0,R)` and `cl(B) ∩ B(0,R)`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HausdorffReading {
    pub radius: f64,
    pub value: f64,
    /// `sup_{a} dist(a, B)` over sampled boundary points of the A window.
    pub excess_ab: f64,
    pub excess_ba: f64,
    /// Largest nearest-neighbour gap between sampled boundary points.
    pub mesh: f64,
    pub directions: usize,
    /// Whether distances to each window used exact projections.
    pub exact_projection: bool,
}

/// A sampled window: anchor and boundary points.
struct Window<'a> {
    domain: &'a ConvexDomain,
    radius: f64,
    points: Vec<CPoint>,
}

fn sphere_exit(a: &CPoint, u: &CPoint, r: f64) -> f64 {
    let b = a.rdot(u);
    let disc = b * b - a.norm_sqr() + r * r;
    -b + disc.max(0.0).sqrt()
}

/// Interior point of `D ∩ B(0,R)` maximizing `min(delta, R - |p|)`.
fn window_anchor(d: &ConvexDomain, r: f64) -> Option<CPoint> {
    let k = 2 * d.dim();
    let score = |p: &CPoint| -> f64 {
        if !d.inside(p) {
            return f64::NEG_INFINITY;
        }
        d.delta_unchecked(p).min(r - p.norm())
    };
    let mut g = rng(0xa9c4);
    let mut best = (CPoint::zeros(d.dim()), score(&CPoint::zeros(d.dim())));
    for _ in 0..512 {
        let p = CPoint::from_real(&ball_point(&mut g, k, r));
        let s = score(&p);
        if s > best.1 {
            best = (p, s);
        }
    }
    if !(best.1 > 0.0) {
        return None;
    }
    let refined = nelder_mead(&best.0.to_real(), &alloc::vec![0.1 * r; k], 200, 1e-12, |x| {
        let s = score(&CPoint::from_real(x));
        if s.is_finite() {
            -s
        } else {
            f64::INFINITY
        }
    });
    let p = CPoint::from_real(&refined.x);
    Some(if -refined.value > best.1 && d.inside(&p) { p } else { best.0 })
}

impl<'a> Window<'a> {
    fn sample(domain: &'a ConvexDomain, radius: f64, directions: usize) -> Result<Self> {
        let anchor = window_anchor(domain, radius).ok_or(Error::EmptyWindow)?;
        let points = sphere_directions(2 * domain.dim(), directions)
            .into_iter()
            .map(|v| {
                let u = CPoint::from_real(&v);
                let t_ball = sphere_exit(&anchor, &u, radius);
                let t = domain.ray_hit(&anchor, &u).map_or(t_ball, |h| h.t.min(t_ball));
                anchor.offset(&u, t)
            })
            .collect();
        Ok(Self { domain, radius, points })
    }

    fn exact(&self) -> bool {
        self.domain.has_projection()
    }

    /// Distance from `p` to the window.
    fn distance(&self, p: &CPoint) -> f64 {
        let r = self.radius;
        if self.exact() {
            let d = self.domain;
            let ball = move |q: &CPoint| {
                let n = q.norm();
                if n <= r {
                    q.clone()
                } else {
                    q.scale(r / n)
                }
            };
            let proj: alloc::boxed::Box<dyn Fn(&CPoint) -> CPoint> =
                alloc::boxed::Box::new(move |q: &CPoint| d.project(q).expect("checked"));
            let q = dykstra(alloc::vec![proj, alloc::boxed::Box::new(ball)], p);
            return p.dist(&q);
        }
        if p.norm() <= r && self.domain.inside(p) {
            return 0.0;
        }
        self.points.iter().map(|q| p.dist(q)).fold(f64::INFINITY, f64::min)
    }

    fn mesh(&self) -> f64 {
        let pts = &self.points;
        let mut worst = 0.0_f64;
        for (i, p) in pts.iter().enumerate() {
            let nearest =
                pts.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, q)| p.dist(q)).fold(f64::INFINITY, f64::min);
            if nearest.is_finite() {
                worst = worst.max(nearest);
            }
        }
        worst
    }
}

/// Windowed Hausdorff distance with the default direction count.
pub fn hausdorff(a: &ConvexDomain, b: &ConvexDomain, r: f64) -> Result<HausdorffReading> {
    hausdorff_with(a, b, r, DEFAULT_DIRECTIONS)
}

/// Windowed Hausdorff distance from boundary points found by ray shooting
/// from an interior anchor of each window.
pub fn hausdorff_with(a: &ConvexDomain, b: &ConvexDomain, r: f64, directions: usize) -> Result<HausdorffReading> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument("window radius must be positive".into()));
    }
    let wa = Window::sample(a, r, directions)?;
    let wb = Window::sample(b, r, directions)?;
    let excess = |from: &Window, to: &Window| from.points.iter().map(|p| to.distance(p)).fold(0.0, f64::max);
    let excess_ab = excess(&wa, &wb);
    let excess_ba = excess(&wb, &wa);
    Ok(HausdorffReading {
        radius: r,
        value: excess_ab.max(excess_ba),
        excess_ab,
        excess_ba,
        mesh: wa.mesh().max(wb.mesh()),
        directions,
        exact_projection: wa.exact() && wb.exact(),
    })
}
