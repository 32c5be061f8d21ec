//! Kobayashi metric and distance on convex domains.
//!
//! Catalog compositions (planar charts, balls, products, affine images) are
//! evaluated exactly. Everything else gets a certified interval: lower
//! bounds from holomorphic maps onto half-planes and member domains, upper
//! bounds from inscribed model domains, planar slices and optimized paths.

mod interval;
mod midpoint;
mod path;
mod sandwich;

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // f64 math under no_std
use num_traits::Float;

pub use interval::{DistanceInterval, Method, Methods};
pub use midpoint::{exact_geodesic, midpoint_search, Midpoint};
pub use path::{curve_length, geodesic_approx, DiscretePath, GeodesicApprox};
pub use sandwich::{projection_lower_bound, slice_upper_bound};

use crate::domains::{ConvexDomain, Node};
use crate::error::{Error, Result};
use crate::planar::{disk_distance, ConformalChart};
use crate::point::CPoint;

/// When the path optimizer runs inside [`distance_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathMode {
    /// Only on domains with closed-form boundary data.
    Auto,
    Always,
    Never,
}

/// Knobs of the bound engine for non-catalog domains.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistanceOptions {
    pub path: PathMode,
    /// Total node count of optimized paths, endpoints included.
    pub path_nodes: usize,
    /// Search inscribed polydisks and balls for upper bounds.
    pub inscribed: bool,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        Self { path: PathMode::Auto, path_nodes: 35, inscribed: true }
    }
}

impl DistanceOptions {
    /// Bounds that avoid the path optimizer.
    pub fn fast() -> Self {
        Self { path: PathMode::Never, ..Self::default() }
    }
}

pub(crate) fn check_point(d: &ConvexDomain, z: &CPoint) -> Result<()> {
    if d.contains(z)? {
        Ok(())
    } else {
        Err(Error::NotInDomain)
    }
}

// -------------------------------------------------------------------- balls

/// `1 - |w|^2` for `w = (z - center) / radius`, without cancellation.
fn ball_gap(z: &CPoint, center: &CPoint, radius: f64) -> f64 {
    let r = (z - center).norm();
    (radius - r) * (radius + r) / (radius * radius)
}

pub(crate) fn ball_metric(center: &CPoint, radius: f64, z: &CPoint, v: &CPoint) -> f64 {
    let w = (z - center).scale(1.0 / radius);
    let u = v.scale(1.0 / radius);
    let gap = ball_gap(z, center, radius);
    ((u.norm_sqr() * gap + w.hdot(&u).norm_sqr()).sqrt()) / gap
}

pub(crate) fn ball_distance(center: &CPoint, radius: f64, x: &CPoint, y: &CPoint) -> f64 {
    let z = (x - center).scale(1.0 / radius);
    let w = (y - center).scale(1.0 / radius);
    let diff = (&z - &w).norm_sqr();
    if diff == 0.0 {
        return 0.0;
    }
    // |z|^2 |w|^2 - |<z,w>|^2 as a sum of 2x2 minors
    let mut cross = 0.0;
    for j in 0..z.dim() {
        for k in j + 1..z.dim() {
            cross += (z[j] * w[k] - z[k] * w[j]).norm_sqr();
        }
    }
    let one_minus = (Complex64::new(1.0, 0.0) - z.hdot(&w)).norm();
    let excess = (diff - cross).max(0.0);
    let gaps = (ball_gap(x, center, radius) * ball_gap(y, center, radius)).sqrt();
    ((one_minus + excess.sqrt()) / gaps).ln()
}

// -------------------------------------------------------------------- infinitesimal

/// Kobayashi metric `k_D(z; v)` as an interval.
pub fn infinitesimal(d: &ConvexDomain, z: &CPoint, v: &CPoint) -> Result<DistanceInterval> {
    check_point(d, z)?;
    v.check_dim(d.dim())?;
    if v.is_zero() {
        return Ok(DistanceInterval::exact(0.0, Methods::single(Method::ExactChart)));
    }
    Ok(metric_interval(d, z, v))
}

pub(crate) fn metric_interval(d: &ConvexDomain, z: &CPoint, v: &CPoint) -> DistanceInterval {
    if v.is_zero() {
        return DistanceInterval::exact(0.0, Methods::empty());
    }
    match d.node() {
        Node::Disk { .. } | Node::HalfPlane { .. } | Node::Sector { .. } => {
            let ch = ConformalChart::new(d).expect("planar catalog");
            DistanceInterval::exact(ch.metric(z[0], v[0]), Methods::single(Method::ExactChart))
        }
        Node::Ball { center, radius } => {
            DistanceInterval::exact(ball_metric(center, *radius, z, v), Methods::single(Method::ExactChart))
        }
        Node::Polydisk { centers, radii } => {
            let m = (0..d.dim())
                .map(|j| {
                    let r = (z[j] - centers[j]).norm();
                    v[j].norm() * radii[j] / ((radii[j] - r) * (radii[j] + r))
                })
                .fold(0.0, f64::max);
            DistanceInterval::exact(m, Methods::single(Method::ProductMax))
        }
        Node::Product(l, r) => {
            let k = l.dim();
            let a = metric_interval(l, &z.slice(0, k), &v.slice(0, k));
            let b = metric_interval(r, &z.slice(k, d.dim() - k), &v.slice(k, d.dim() - k));
            a.max(&b).with(Method::ProductMax)
        }
        Node::AffineImage(img) => {
            metric_interval(img.inner(), &img.pull_point(z), &img.pull_vector(v)).with(Method::AffineInvariance)
        }
        Node::Intersection(ms) => {
            let mut iv = delta_bound(d, z, v);
            for m in ms {
                let lo = metric_interval(m, z, v).lo;
                if lo > iv.lo && lo <= iv.hi {
                    iv.lo = lo;
                    iv.methods.insert(Method::ProjectionLower);
                }
            }
            iv
        }
        Node::Graph(_) => delta_bound(d, z, v),
    }
}

/// Convex two-sided estimate `|v| / (2 delta_dir) <= k <= |v| / delta_dir`.
fn delta_bound(d: &ConvexDomain, z: &CPoint, v: &CPoint) -> DistanceInterval {
    let r = d.slice_radius(z, v);
    if !r.is_finite() {
        return DistanceInterval::exact(0.0, Methods::single(Method::DeltaBound));
    }
    DistanceInterval::new(0.5 / r, 1.0 / r, Methods::single(Method::DeltaBound))
}

// -------------------------------------------------------------------- distance

/// Closed-form distance for catalog compositions.
pub(crate) fn exact_distance(d: &ConvexDomain, x: &CPoint, y: &CPoint) -> Option<(f64, Methods)> {
    match d.node() {
        Node::Disk { .. } | Node::HalfPlane { .. } | Node::Sector { .. } => {
            let ch = ConformalChart::new(d).ok()?;
            Some((ch.distance(x[0], y[0]), Methods::single(Method::ExactChart)))
        }
        Node::Ball { center, radius } => {
            Some((ball_distance(center, *radius, x, y), Methods::single(Method::ExactChart)))
        }
        Node::Polydisk { centers, radii } => {
            let m = (0..d.dim())
                .map(|j| disk_distance((x[j] - centers[j]) / radii[j], (y[j] - centers[j]) / radii[j]).unwrap_or(0.0))
                .fold(0.0, f64::max);
            Some((m, Methods::single(Method::ProductMax)))
        }
        Node::Product(l, r) => {
            let k = l.dim();
            let (a, ma) = exact_distance(l, &x.slice(0, k), &y.slice(0, k))?;
            let (b, mb) = exact_distance(r, &x.slice(k, d.dim() - k), &y.slice(k, d.dim() - k))?;
            Some((a.max(b), ma.union(mb).with(Method::ProductMax)))
        }
        Node::AffineImage(img) => {
            let (v, m) = exact_distance(img.inner(), &img.pull_point(x), &img.pull_point(y))?;
            Some((v, m.with(Method::AffineInvariance)))
        }
        Node::Intersection(_) | Node::Graph(_) => None,
    }
}

/// Kobayashi distance with default options.
pub fn distance(d: &ConvexDomain, x: &CPoint, y: &CPoint) -> Result<DistanceInterval> {
    distance_with(d, x, y, &DistanceOptions::default())
}

pub fn distance_with(d: &ConvexDomain, x: &CPoint, y: &CPoint, opts: &DistanceOptions) -> Result<DistanceInterval> {
    check_point(d, x)?;
    check_point(d, y)?;
    if !d.is_c_proper() {
        return Err(Error::NotCProper);
    }
    Ok(distance_interval(d, x, y, opts))
}

/// Total order on points by coordinate bits, used to evaluate both
/// argument orders identically.
fn precedes(x: &CPoint, y: &CPoint) -> bool {
    let key = |p: &CPoint| p.to_real().into_iter().map(f64::to_bits).collect::<alloc::vec::Vec<_>>();
    key(x) <= key(y)
}

pub(crate) fn distance_interval(d: &ConvexDomain, x: &CPoint, y: &CPoint, opts: &DistanceOptions) -> DistanceInterval {
    if !precedes(x, y) {
        return distance_interval(d, y, x, opts);
    }
    if x == y {
        return DistanceInterval::exact(0.0, Methods::single(Method::ExactChart));
    }
    if let Some((v, m)) = exact_distance(d, x, y) {
        return DistanceInterval::exact(v, m);
    }
    match d.node() {
        Node::Product(l, r) => {
            let k = l.dim();
            let a = distance_interval(l, &x.slice(0, k), &y.slice(0, k), opts);
            let b = distance_interval(r, &x.slice(k, d.dim() - k), &y.slice(k, d.dim() - k), opts);
            a.max(&b).with(Method::ProductMax)
        }
        Node::AffineImage(img) => {
            distance_interval(img.inner(), &img.pull_point(x), &img.pull_point(y), opts).with(Method::AffineInvariance)
        }
        _ => sandwich::sandwich(d, x, y, opts),
    }
}

/// Distances between all pairs of a point list, as intervals.
pub fn pairwise(d: &ConvexDomain, points: &[CPoint]) -> Result<Vec<Vec<DistanceInterval>>> {
    let n = points.len();
    let mut out = alloc::vec![alloc::vec![DistanceInterval::exact(0.0, Methods::empty()); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let iv = distance(d, &points[i], &points[j])?;
            out[i][j] = iv.clone();
            out[j][i] = iv;
        }
    }
    Ok(out)
}
