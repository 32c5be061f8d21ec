use alloc::vec;
use alloc::vec::Vec;

use super::{check_point, metric_interval, DistanceInterval, Method, Methods};
use crate::domains::{ConvexDomain, Node};
use crate::error::{Error, Result};
use crate::numeric::GaussLegendre;
use crate::point::CPoint;

/// Gauss-Legendre points per path segment.
const SEGMENT_ORDER: usize = 8;
const MAX_SWEEPS: usize = 400;

/// Piecewise-linear path through interior points.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiscretePath {
    pub nodes: Vec<CPoint>,
    /// Parameter value of each node in [0, 1].
    pub params: Vec<f64>,
}

impl DiscretePath {
    /// Path with uniformly spaced parameters.
    pub fn new(nodes: Vec<CPoint>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidArgument("a path needs at least one node".into()));
        }
        let n = nodes.len();
        let params = (0..n).map(|i| if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 }).collect();
        Ok(Self { nodes, params })
    }

    /// Straight segment from `x` to `y` with `n` equally spaced nodes.
    pub fn straight(x: &CPoint, y: &CPoint, n: usize) -> Self {
        let n = n.max(2);
        let nodes = (0..n).map(|i| x.lerp(y, i as f64 / (n - 1) as f64)).collect();
        Self::new(nodes).expect("nonempty")
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

fn segment(d: &ConvexDomain, gl: &GaussLegendre, a: &CPoint, b: &CPoint) -> DistanceInterval {
    let v = b - a;
    if v.is_zero() {
        return DistanceInterval::exact(0.0, Methods::empty());
    }
    let mut lo = 0.0;
    let mut hi = 0.0;
    let mut methods = Methods::empty();
    for (&t, &w) in gl.nodes.iter().zip(&gl.weights) {
        let m = metric_interval(d, &a.lerp(b, t), &v);
        lo += w * m.lo;
        hi += w * m.hi;
        methods = methods.union(m.methods);
    }
    DistanceInterval::new(lo, hi, methods)
}

/// Length of a piecewise-linear path, integrating both ends of the metric interval.
pub fn curve_length(d: &ConvexDomain, path: &DiscretePath) -> Result<DistanceInterval> {
    for p in &path.nodes {
        check_point(d, p)?;
    }
    let gl = GaussLegendre::new(SEGMENT_ORDER);
    let mut total = DistanceInterval::exact(0.0, Methods::empty());
    for w in path.nodes.windows(2) {
        let s = segment(d, &gl, &w[0], &w[1]);
        total.lo += s.lo;
        total.hi += s.hi;
        total.methods = total.methods.union(s.methods);
    }
    Ok(total)
}

/// Output of [`geodesic_approx`].
#[derive(Clone, Debug)]
pub struct GeodesicApprox {
    pub path: DiscretePath,
    pub length: DistanceInterval,
    /// Length of the initial straight segment (upper end).
    pub straight_length: f64,
    /// False when no move improved the straight segment.
    pub improved: bool,
}

/// Shortens the straight segment from `x` to `y` by coordinate descent on
/// the interior nodes, minimizing the upper length bound.
pub fn geodesic_approx(d: &ConvexDomain, x: &CPoint, y: &CPoint, n: usize) -> Result<GeodesicApprox> {
    check_point(d, x)?;
    check_point(d, y)?;
    if x == y {
        let path = DiscretePath::new(vec![x.clone()])?;
        return Ok(GeodesicApprox {
            path,
            length: DistanceInterval::exact(0.0, Methods::empty()),
            straight_length: 0.0,
            improved: false,
        });
    }
    if n < 3 {
        return Err(Error::InvalidArgument("geodesic approximation needs at least 3 nodes".into()));
    }
    let gl = GaussLegendre::new(SEGMENT_ORDER);
    let straight_nodes = DiscretePath::straight(x, y, n).nodes;
    let straight: f64 = straight_nodes.windows(2).map(|w| segment(d, &gl, &w[0], &w[1]).hi).sum();
    let mut nodes = match d.node() {
        Node::Product(l, r) => synchronized(l, r, x, y, n)?,
        _ => straight_nodes,
    };
    let mut seg: Vec<f64> = nodes.windows(2).map(|w| segment(d, &gl, &w[0], &w[1]).hi).collect();
    let mut improved = seg.iter().sum::<f64>() < straight;

    let k = 2 * d.dim();
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    for a in 0..k {
        for s in [1.0, -1.0] {
            let mut v = vec![0.0; k];
            v[a] = s;
            dirs.push(v);
        }
    }
    let h = core::f64::consts::FRAC_1_SQRT_2;
    for a in 0..k {
        for b in a + 1..k {
            for (sa, sb) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let mut v = vec![0.0; k];
                v[a] = sa * h;
                v[b] = sb * h;
                dirs.push(v);
            }
        }
    }
    let dirs: Vec<CPoint> = dirs.iter().map(|v| CPoint::from_real(v)).collect();

    let scale = 1.0 + x.norm() + y.norm();
    let mut step = 0.5 * x.dist(y) / (n - 1) as f64;
    let mut history: Vec<f64> = vec![seg.iter().sum()];
    let mut halvings = 0;
    for _ in 0..MAX_SWEEPS {
        let mut moved = false;
        for i in 1..n - 1 {
            for dir in &dirs {
                let cand = nodes[i].offset(dir, step);
                if !d.inside(&cand) {
                    continue;
                }
                let a = segment(d, &gl, &nodes[i - 1], &cand).hi;
                let b = segment(d, &gl, &cand, &nodes[i + 1]).hi;
                if a + b < seg[i - 1] + seg[i] - 1e-15 * (seg[i - 1] + seg[i]) {
                    nodes[i] = cand;
                    seg[i - 1] = a;
                    seg[i] = b;
                    moved = true;
                }
            }
        }
        let total: f64 = seg.iter().sum();
        history.push(total);
        if moved {
            improved = true;
        } else {
            step *= 0.5;
            halvings += 1;
        }
        if step < 1e-12 * scale {
            break;
        }
        let m = history.len();
        if halvings >= 5 && m > 5 && (history[m - 6] - total) <= 1e-6 * total {
            break;
        }
    }
    let path = DiscretePath::new(nodes)?;
    let length = curve_length(d, &path)?.with(Method::PathOptimizer);
    Ok(GeodesicApprox { path, length, straight_length: straight, improved })
}

/// Nodes at equal fractions of the upper length of `path`.
fn resample(d: &ConvexDomain, path: &DiscretePath, n: usize) -> Vec<CPoint> {
    let pts = &path.nodes;
    if pts.len() < 2 {
        return vec![pts[0].clone(); n];
    }
    let gl = GaussLegendre::new(SEGMENT_ORDER);
    let mut cum = vec![0.0];
    for w in pts.windows(2) {
        let last = *cum.last().expect("nonempty");
        cum.push(last + segment(d, &gl, &w[0], &w[1]).hi);
    }
    let total = *cum.last().expect("nonempty");
    let mut j = 0;
    (0..n)
        .map(|i| {
            let target = total * i as f64 / (n - 1) as f64;
            while j + 2 < cum.len() && cum[j + 1] < target {
                j += 1;
            }
            let len = cum[j + 1] - cum[j];
            let t = if len > 0.0 { ((target - cum[j]) / len).clamp(0.0, 1.0) } else { 0.0 };
            pts[j].lerp(&pts[j + 1], t)
        })
        .collect()
}

/// Factor paths traversed at constant speed, so the max metric of the
/// product integrates to the larger factor length.
fn synchronized(l: &ConvexDomain, r: &ConvexDomain, x: &CPoint, y: &CPoint, n: usize) -> Result<Vec<CPoint>> {
    let k = l.dim();
    let (xl, xr) = (x.slice(0, k), x.slice(k, r.dim()));
    let (yl, yr) = (y.slice(0, k), y.slice(k, r.dim()));
    let factor = |d: &ConvexDomain, a: &CPoint, b: &CPoint| -> Result<Vec<CPoint>> {
        if a == b {
            return Ok(vec![a.clone(); n]);
        }
        let g = geodesic_approx(d, a, b, n)?;
        Ok(resample(d, &g.path, n))
    };
    let left = factor(l, &xl, &yl)?;
    let right = factor(r, &xr, &yr)?;
    Ok(left.iter().zip(&right).map(|(a, b)| a.concat(b)).collect())
}
