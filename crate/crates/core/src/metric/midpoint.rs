use super::path::geodesic_approx;
use super::{check_point, distance_interval, exact_distance, DistanceInterval, DistanceOptions, PathMode};
use crate::domains::{ConvexDomain, Node};
use crate::error::{Error, Result};
use crate::numeric::nelder_mead;
use crate::planar::ConformalChart;
use crate::point::{c, CPoint};

/// A midpoint candidate between two points.
#[derive(Clone, Debug)]
pub struct Midpoint {
    pub point: CPoint,
    /// `|K(x,m) - K(m,y)| + |K(x,m) + K(m,y) - K(x,y)|` from interval midpoints.
    pub residual: f64,
    /// Whether the point came from closed-form geodesics.
    pub exact: bool,
    pub to_x: DistanceInterval,
    pub to_y: DistanceInterval,
    pub span: DistanceInterval,
}

/// Closed-form geodesic from `x` to `y` at arclength fraction `t`, for
/// catalog compositions. Product components move simultaneously.
pub fn exact_geodesic(d: &ConvexDomain, x: &CPoint, y: &CPoint, t: f64) -> Option<CPoint> {
    if x == y {
        return Some(x.clone());
    }
    match d.node() {
        Node::Disk { .. } | Node::HalfPlane { .. } | Node::Sector { .. } => {
            let ch = ConformalChart::new(d).ok()?;
            Some(CPoint::scalar(ch.geodesic(x[0], y[0], t)))
        }
        Node::Ball { .. } => {
            // slices of a ball by complex lines are totally geodesic
            let v = y - x;
            let p = d.planar_slice_node(x, &v)?;
            let ch = ConformalChart::new(&p).ok()?;
            Some(x.coffset(&v, ch.geodesic(c(0.0, 0.0), c(1.0, 0.0), t)))
        }
        Node::Polydisk { centers, radii } => {
            let mut out = x.clone();
            for j in 0..d.dim() {
                let disk = ConvexDomain::disk(centers[j], radii[j]).ok()?;
                out[j] = ConformalChart::new(&disk).ok()?.geodesic(x[j], y[j], t);
            }
            Some(out)
        }
        Node::Product(l, r) => {
            let k = l.dim();
            let a = exact_geodesic(l, &x.slice(0, k), &y.slice(0, k), t)?;
            let b = exact_geodesic(r, &x.slice(k, d.dim() - k), &y.slice(k, d.dim() - k), t)?;
            Some(a.concat(&b))
        }
        Node::AffineImage(img) => {
            let w = exact_geodesic(img.inner(), &img.pull_point(x), &img.pull_point(y), t)?;
            Some(img.push_point(&w))
        }
        Node::Intersection(_) | Node::Graph(_) => None,
    }
}

/// Canonical exact midpoint. In products the factor with the larger
/// separation (left on ties) moves to its geodesic midpoint; the other
/// factor stays at its starting value when its separation is at most half
/// the total, and otherwise also moves to its own midpoint.
fn exact_midpoint(d: &ConvexDomain, x: &CPoint, y: &CPoint) -> Option<CPoint> {
    match d.node() {
        Node::Product(l, r) => {
            let k = l.dim();
            let (xl, yl) = (x.slice(0, k), y.slice(0, k));
            let (xr, yr) = (x.slice(k, d.dim() - k), y.slice(k, d.dim() - k));
            let (dl, _) = exact_distance(l, &xl, &yl)?;
            let (dr, _) = exact_distance(r, &xr, &yr)?;
            let total = dl.max(dr);
            let part = |f: &ConvexDomain, a: &CPoint, b: &CPoint, dist: f64, larger: bool| {
                if larger || dist > 0.5 * total {
                    exact_midpoint(f, a, b)
                } else {
                    Some(a.clone())
                }
            };
            let left_larger = dl >= dr;
            Some(part(l, &xl, &yl, dl, left_larger)?.concat(&part(r, &xr, &yr, dr, !left_larger)?))
        }
        Node::Polydisk { centers, radii } => {
            let disks: Option<alloc::vec::Vec<ConvexDomain>> =
                (0..d.dim()).map(|j| ConvexDomain::disk(centers[j], radii[j]).ok()).collect();
            let charts: alloc::vec::Vec<ConformalChart> =
                disks?.iter().map(|q| ConformalChart::new(q).expect("disk")).collect();
            let dists: alloc::vec::Vec<f64> = (0..d.dim()).map(|j| charts[j].distance(x[j], y[j])).collect();
            let total = dists.iter().cloned().fold(0.0, f64::max);
            let big = dists.iter().position(|&v| v == total)?;
            let mut out = x.clone();
            for j in 0..d.dim() {
                if j == big || dists[j] > 0.5 * total {
                    out[j] = charts[j].geodesic(x[j], y[j], 0.5);
                }
            }
            Some(out)
        }
        Node::AffineImage(img) => {
            let w = exact_midpoint(img.inner(), &img.pull_point(x), &img.pull_point(y))?;
            Some(img.push_point(&w))
        }
        _ => exact_geodesic(d, x, y, 0.5),
    }
}

/// Residual of a midpoint candidate, with the three distance intervals.
pub(crate) fn residual(
    d: &ConvexDomain,
    x: &CPoint,
    y: &CPoint,
    m: &CPoint,
    opts: &DistanceOptions,
) -> (f64, DistanceInterval, DistanceInterval, DistanceInterval) {
    let a = distance_interval(d, x, m, opts);
    let b = distance_interval(d, m, y, opts);
    let s = distance_interval(d, x, y, opts);
    let r = (a.mid() - b.mid()).abs() + (a.mid() + b.mid() - s.mid()).abs();
    (r, a, b, s)
}

/// Geodesic midpoint of `x` and `y`; exact on catalog compositions,
/// optimized otherwise. Fails when the residual exceeds `tol`.
pub fn midpoint_search(d: &ConvexDomain, x: &CPoint, y: &CPoint, tol: f64) -> Result<Midpoint> {
    check_point(d, x)?;
    check_point(d, y)?;
    let opts = DistanceOptions { path: PathMode::Never, ..DistanceOptions::default() };
    let (point, exact) = match exact_midpoint(d, x, y) {
        Some(m) => (m, true),
        None => (numeric_midpoint(d, x, y)?, false),
    };
    let (res, to_x, to_y, span) = residual(d, x, y, &point, &opts);
    if res > tol {
        return Err(Error::MidpointNotCertified { residual: res, tol });
    }
    Ok(Midpoint { point, residual: res, exact, to_x, to_y, span })
}

fn numeric_midpoint(d: &ConvexDomain, x: &CPoint, y: &CPoint) -> Result<CPoint> {
    if x == y {
        return Ok(x.clone());
    }
    let g = geodesic_approx(d, x, y, DistanceOptions::default().path_nodes)?;
    // node at half the accumulated length
    let nodes = &g.path.nodes;
    let lens: alloc::vec::Vec<f64> = nodes
        .windows(2)
        .map(|w| super::path::curve_length(d, &super::DiscretePath::straight(&w[0], &w[1], 2)).map(|l| l.hi))
        .collect::<Result<_>>()?;
    let total: f64 = lens.iter().sum();
    let mut acc = 0.0;
    let mut start = nodes[nodes.len() / 2].clone();
    for (i, l) in lens.iter().enumerate() {
        if acc + l >= 0.5 * total {
            let f = if *l > 0.0 { (0.5 * total - acc) / l } else { 0.0 };
            start = nodes[i].lerp(&nodes[i + 1], f);
            break;
        }
        acc += l;
    }
    let quick = DistanceOptions { path: PathMode::Never, inscribed: false, ..DistanceOptions::default() };
    let scale = 0.05 * x.dist(y);
    let best = nelder_mead(&start.to_real(), &alloc::vec![scale; 2 * d.dim()], 300, 1e-10, |p| {
        let m = CPoint::from_real(p);
        if !d.inside(&m) {
            return f64::INFINITY;
        }
        residual(d, x, y, &m, &quick).0
    });
    let m = CPoint::from_real(&best.x);
    Ok(if d.inside(&m) { m } else { start })
}
