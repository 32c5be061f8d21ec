//! Two-sided bounds for domains without closed-form distances.
//!
//! Lower bounds come from holomorphic maps that do not increase the
//! Kobayashi distance: inclusions into member domains and complex linear
//! functionals onto supporting half-planes. Upper bounds come from domains
//! contained in D (inscribed polydisks and balls, planar slices) and from
//! the length of explicit paths.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // f64 math under no_std
use num_traits::Float;

use super::path::{curve_length, geodesic_approx, DiscretePath};
use super::{
    ball_distance, check_point, distance_interval, exact_distance, DistanceInterval, DistanceOptions, Method, Methods,
    PathMode,
};
use crate::domains::{ConvexDomain, Node};
use crate::error::Result;
use crate::numeric::{nelder_mead, sphere_directions};
use crate::planar::{disk_distance, ConformalChart};
use crate::point::{c, CPoint};

const FUNCTIONALS: usize = 64;
const PENALTY: f64 = 1e3;

/// Kobayashi distance of `{Re w < s}` between `w1` and `w2`.
fn half_plane_distance(s: f64, w1: Complex64, w2: Complex64) -> Option<f64> {
    let p1 = c(s, 0.0) - w1;
    let p2 = c(s, 0.0) - w2;
    if !(p1.re > 0.0 && p2.re > 0.0) {
        return None;
    }
    let num = (p1 - p2).norm();
    if num == 0.0 {
        return Some(0.0);
    }
    Some(((p1 + p2.conj()).norm() + num).ln() - (2.0 * (p1.re * p2.re).sqrt()).ln())
}

/// Supporting functionals `(a, sup <a, z>_R)` near the chord from `x` to `y`.
fn supporting_functionals(d: &ConvexDomain, x: &CPoint, y: &CPoint) -> Vec<(CPoint, f64)> {
    let dim = d.dim();
    let mut out: Vec<(CPoint, f64)> = Vec::new();
    let u = (y - x).normalized().expect("distinct points");
    let mut dirs: Vec<CPoint> = Vec::new();
    for j in 0..dim {
        for s in [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)] {
            dirs.push(CPoint::basis(dim, j).cscale(s));
        }
    }
    for k in 0..8 {
        let t = core::f64::consts::PI * k as f64 / 4.0;
        dirs.push(u.cscale(c(t.cos(), t.sin())));
    }
    for a in &dirs {
        if let Some(s) = d.support(a) {
            out.push((a.clone(), s));
        }
    }
    // exact supporting hyperplanes at boundary points hit from x and y
    let mut rays = dirs.clone();
    let mid = x.lerp(y, 0.5);
    for v in sphere_directions(2 * dim, 16) {
        rays.push(CPoint::from_real(&v));
    }
    'outer: for base in [x, y, &mid] {
        for r in &rays {
            if out.len() >= FUNCTIONALS {
                break 'outer;
            }
            if let Some(h) = d.ray_hit(base, r) {
                let q = base.offset(r, h.t);
                out.push((h.normal.clone(), h.normal.rdot(&q)));
            }
        }
    }
    out
}

/// Best lower bound from supporting half-planes.
fn half_plane_lower(d: &ConvexDomain, x: &CPoint, y: &CPoint) -> f64 {
    supporting_functionals(d, x, y)
        .into_iter()
        .filter_map(|(a, s)| half_plane_distance(s, a.hdot(x), a.hdot(y)))
        .fold(0.0, f64::max)
}

fn lower(d: &ConvexDomain, x: &CPoint, y: &CPoint) -> f64 {
    if let Some((v, _)) = exact_distance(d, x, y) {
        return v;
    }
    match d.node() {
        Node::Product(l, r) => {
            let k = l.dim();
            lower(l, &x.slice(0, k), &y.slice(0, k)).max(lower(r, &x.slice(k, d.dim() - k), &y.slice(k, d.dim() - k)))
        }
        Node::AffineImage(img) => lower(img.inner(), &img.pull_point(x), &img.pull_point(y)),
        Node::Intersection(ms) => ms.iter().map(|m| lower(m, x, y)).fold(half_plane_lower(d, x, y), f64::max),
        _ => half_plane_lower(d, x, y),
    }
}

/// Lower bound from holomorphic contractions: member inclusions, factor
/// projections and supporting half-planes.
pub fn projection_lower_bound(d: &ConvexDomain, x: &CPoint, y: &CPoint) -> Result<f64> {
    check_point(d, x)?;
    check_point(d, y)?;
    if x == y {
        return Ok(0.0);
    }
    Ok(lower(d, x, y))
}

/// Distance inside the planar slice through `x` and `y`, when the slice is
/// a disk, half-plane or sector.
pub fn slice_upper_bound(d: &ConvexDomain, x: &CPoint, y: &CPoint) -> Result<Option<f64>> {
    check_point(d, x)?;
    check_point(d, y)?;
    if x == y {
        return Ok(Some(0.0));
    }
    Ok(exact_slice(d, x, y))
}

fn exact_slice(d: &ConvexDomain, x: &CPoint, y: &CPoint) -> Option<f64> {
    let p = d.planar_slice_node(x, &(y - x))?;
    let ch = ConformalChart::new(&p).ok()?;
    Some(ch.distance(c(0.0, 0.0), c(1.0, 0.0)))
}

/// Largest `lambda` with the polydisk `P(center, lambda * shape)` inside the closure.
fn inscribed_scale(d: &ConvexDomain, center: &CPoint, shape: &[f64]) -> Option<f64> {
    let delta = d.delta_unchecked(center);
    let norm = shape.iter().map(|s| s * s).sum::<f64>().sqrt();
    let mut lo = delta / norm;
    let radii = |l: f64| -> Vec<f64> { shape.iter().map(|s| s * l).collect() };
    if !d.contains_polydisk(center, &radii(lo))? {
        return Some(lo * 0.999_999);
    }
    let mut hi = 2.0 * lo;
    let mut doublings = 0;
    while d.contains_polydisk(center, &radii(hi))? {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > 80 {
            return Some(lo);
        }
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if d.contains_polydisk(center, &radii(mid))? {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    Some(lo)
}

fn containment_penalty(x: &CPoint, y: &CPoint, c0: &CPoint, radii: &[f64]) -> f64 {
    let mut p = 0.0;
    for j in 0..x.dim() {
        p += ((x[j] - c0[j]).norm() / radii[j] - 1.0).max(0.0);
        p += ((y[j] - c0[j]).norm() / radii[j] - 1.0).max(0.0);
    }
    p
}

/// Smallest polydisk distance over inscribed polydisks containing `x`, `y`.
fn inscribed_polydisk(d: &ConvexDomain, x: &CPoint, y: &CPoint) -> Option<f64> {
    let dim = d.dim();
    let c0 = x.lerp(y, 0.5);
    d.contains_polydisk(&c0, &alloc::vec![0.0; dim])?;
    let objective = |p: &[f64]| -> f64 {
        let center = CPoint::from_real(&p[..2 * dim]);
        if !d.inside(&center) {
            return 2.0 * PENALTY;
        }
        let top = p[2 * dim..].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let shape: Vec<f64> = p[2 * dim..].iter().map(|s| (s - top).exp()).collect();
        let Some(lambda) = inscribed_scale(d, &center, &shape) else { return 2.0 * PENALTY };
        let radii: Vec<f64> = shape.iter().map(|s| s * lambda).collect();
        let pen = containment_penalty(x, y, &center, &radii);
        if pen > 0.0 {
            return PENALTY + pen;
        }
        (0..dim)
            .map(|j| disk_distance((x[j] - center[j]) / radii[j], (y[j] - center[j]) / radii[j]).unwrap_or(PENALTY))
            .fold(0.0, f64::max)
    };
    let mut start = c0.to_real();
    start.extend(core::iter::repeat_n(0.0, dim));
    let size = x.dist(y).max(d.delta_unchecked(&c0));
    let mut step: Vec<f64> = alloc::vec![0.5 * size; 2 * dim];
    step.extend(core::iter::repeat_n(0.5, dim));
    let mut best = nelder_mead(&start, &step, 3000, 1e-12, objective);
    for _ in 0..2 {
        let again = nelder_mead(&best.x, &step, 3000, 1e-12, objective);
        if again.value < best.value {
            best = again;
        } else {
            break;
        }
    }
    (best.value < PENALTY).then_some(best.value)
}

/// Smallest ball distance over balls `B(c, delta(c))` containing `x`, `y`.
fn inscribed_ball(d: &ConvexDomain, x: &CPoint, y: &CPoint, max_evals: usize) -> Option<f64> {
    let dim = d.dim();
    let objective = |p: &[f64]| -> f64 {
        let center = CPoint::from_real(p);
        if !d.inside(&center) {
            return 2.0 * PENALTY;
        }
        let r = d.delta_unchecked(&center) * (1.0 - 1e-9);
        let (ex, ey) = ((x - &center).norm(), (y - &center).norm());
        if ex >= r || ey >= r {
            return PENALTY + (ex / r - 1.0).max(0.0) + (ey / r - 1.0).max(0.0);
        }
        ball_distance(&center, r, x, y)
    };
    let c0 = x.lerp(y, 0.5);
    let size = x.dist(y).max(d.delta_unchecked(&c0));
    let best = nelder_mead(&c0.to_real(), &alloc::vec![0.5 * size; 2 * dim], max_evals, 1e-12, objective);
    (best.value < PENALTY).then_some(best.value)
}

pub(crate) fn sandwich(d: &ConvexDomain, x: &CPoint, y: &CPoint, opts: &DistanceOptions) -> DistanceInterval {
    let mut methods = Methods::single(Method::ProjectionLower);
    let lo = lower(d, x, y);

    let mut hi = f64::INFINITY;
    let mut hi_tag = Method::DeltaBound;
    let mut offer = |v: Option<f64>, tag: Method| {
        if let Some(v) = v {
            if v.is_finite() && v < hi {
                hi = v;
                hi_tag = tag;
            }
        }
    };

    // planar slice through x and y
    match d.planar_slice_node(x, &(y - x)) {
        Some(p) if p.is_planar_catalog() => offer(exact_slice(d, x, y), Method::SliceUpper),
        Some(p) if d.dim() > 1 => {
            let inner = distance_interval(&p, &CPoint::scalar(c(0.0, 0.0)), &CPoint::scalar(c(1.0, 0.0)), opts);
            offer(Some(inner.hi), Method::SliceUpper);
        }
        _ => {}
    }
    if let Ok(len) = curve_length(d, &DiscretePath::straight(x, y, opts.path_nodes.max(2))) {
        offer(Some(len.hi), Method::DeltaBound);
    }
    if opts.inscribed {
        offer(inscribed_polydisk(d, x, y), Method::InclusionUpper);
        let evals = if d.is_catalog() { 2000 } else { 300 };
        offer(inscribed_ball(d, x, y, evals), Method::InclusionUpper);
    }
    let run_path = match opts.path {
        PathMode::Always => true,
        PathMode::Never => false,
        PathMode::Auto => d.is_catalog(),
    };
    if run_path {
        if let Ok(g) = geodesic_approx(d, x, y, opts.path_nodes.max(3)) {
            offer(Some(g.length.hi), Method::PathOptimizer);
        }
    }
    methods.insert(hi_tag);
    DistanceInterval::new(lo, hi, methods)
}
