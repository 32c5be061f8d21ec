//! CAT(0) tests: midpoint defects, comparison triangles, product-domain
//! violation certificates and Gromov-product diagnostics.

use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)] // f64 math under no_std
use num_traits::Float;
use rand::Rng;

use crate::domains::{ConvexDomain, Node};
use crate::error::{Error, Result};
use crate::metric::{
    self, check_point, distance_interval, exact_geodesic, midpoint_search, DistanceInterval, DistanceOptions,
};
use crate::numeric::{bisect, rng, unit_vector};
use crate::point::{c, CPoint};

/// Midpoint residual tolerance when all distances are exact.
pub const EXACT_TOL: f64 = 1e-9;
/// Midpoint residual tolerance for optimized midpoints.
pub const APPROX_TOL: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Verdict {
    ViolationCertified,
    NoViolationFound,
}

/// Midpoint-inequality test at `z` for the pair `x`, `y` with midpoint `m`.
#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Cat0Certificate {
    pub x: CPoint,
    pub y: CPoint,
    pub z: CPoint,
    pub m: CPoint,
    pub midpoint_residual: f64,
    pub tolerance: f64,
    pub d_xy: DistanceInterval,
    pub d_zx: DistanceInterval,
    pub d_zy: DistanceInterval,
    pub d_zm: DistanceInterval,
    /// `lo(zm)^2 - (hi(zx)^2 / 2 + hi(zy)^2 / 2 - lo(xy)^2 / 4)`.
    pub defect: f64,
    pub verdict: Verdict,
    pub diagnostic: Option<String>,
}

fn require_c_proper(d: &ConvexDomain) -> Result<()> {
    if d.is_c_proper() {
        Ok(())
    } else {
        Err(Error::NotCProper)
    }
}

/// Midpoint defect with the midpoint found by [`midpoint_search`].
pub fn midpoint_defect(d: &ConvexDomain, x: &CPoint, y: &CPoint, z: &CPoint, tol: f64) -> Result<Cat0Certificate> {
    require_c_proper(d)?;
    check_point(d, z)?;
    let m = midpoint_search(d, x, y, tol)?;
    midpoint_defect_at(d, x, y, z, &m.point, tol, &DistanceOptions::default())
}

/// Midpoint defect at a supplied midpoint candidate.
pub fn midpoint_defect_at(
    d: &ConvexDomain,
    x: &CPoint,
    y: &CPoint,
    z: &CPoint,
    m: &CPoint,
    tol: f64,
    opts: &DistanceOptions,
) -> Result<Cat0Certificate> {
    require_c_proper(d)?;
    for p in [x, y, z, m] {
        check_point(d, p)?;
    }
    let d_xy = distance_interval(d, x, y, opts);
    let d_xm = distance_interval(d, x, m, opts);
    let d_my = distance_interval(d, m, y, opts);
    let residual = (d_xm.mid() - d_my.mid()).abs() + (d_xm.mid() + d_my.mid() - d_xy.mid()).abs();
    let d_zx = distance_interval(d, z, x, opts);
    let d_zy = distance_interval(d, z, y, opts);
    let d_zm = distance_interval(d, z, m, opts);
    let defect = d_zm.lo.powi(2) - (0.5 * (d_zx.hi.powi(2) + d_zy.hi.powi(2)) - 0.25 * d_xy.lo.powi(2));
    let optimistic = d_zm.hi.powi(2) - (0.5 * (d_zx.lo.powi(2) + d_zy.lo.powi(2)) - 0.25 * d_xy.hi.powi(2));
    let certified = defect > 0.0 && residual <= tol;
    let diagnostic = if certified {
        None
    } else if defect > 0.0 {
        Some(alloc::format!("midpoint residual {residual:e} exceeds tolerance {tol:e}"))
    } else if optimistic > 0.0 {
        Some(alloc::format!("interval too wide to decide: defect lies in [{defect:e}, {optimistic:e}]"))
    } else {
        None
    };
    Ok(Cat0Certificate {
        x: x.clone(),
        y: y.clone(),
        z: z.clone(),
        m: m.clone(),
        midpoint_residual: residual,
        tolerance: tol,
        d_xy,
        d_zx,
        d_zy,
        d_zm,
        defect,
        verdict: if certified { Verdict::ViolationCertified } else { Verdict::NoViolationFound },
        diagnostic,
    })
}

/// One sampled pair of the comparison test.
#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComparisonSample {
    pub s: f64,
    pub t: f64,
    /// `dist(p, q) - |p_bar - q_bar|`.
    pub slack: f64,
}

#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComparisonReport {
    pub a: CPoint,
    pub b: CPoint,
    pub c: CPoint,
    /// Side lengths `d(a,b)`, `d(a,c)`, `d(b,c)`.
    pub sides: [f64; 3],
    pub samples: Vec<ComparisonSample>,
    pub max_slack: f64,
    /// Whether both geodesics were closed-form.
    pub exact: bool,
}

/// Geodesic parametrized by arclength fraction: closed form or an optimized path.
enum Geodesic {
    Exact,
    Path(Vec<CPoint>, Vec<f64>),
}

fn geodesic(d: &ConvexDomain, x: &CPoint, y: &CPoint) -> Result<Geodesic> {
    if exact_geodesic(d, x, y, 0.5).is_some() {
        return Ok(Geodesic::Exact);
    }
    let g = metric::geodesic_approx(d, x, y, DistanceOptions::default().path_nodes)?;
    let nodes = g.path.nodes;
    let mut acc = alloc::vec![0.0];
    for w in nodes.windows(2) {
        let l = metric::curve_length(d, &metric::DiscretePath::straight(&w[0], &w[1], 2))?.hi;
        acc.push(acc.last().unwrap() + l);
    }
    let total = *acc.last().unwrap();
    Ok(Geodesic::Path(nodes, acc.into_iter().map(|a| if total > 0.0 { a / total } else { 0.0 }).collect()))
}

fn geodesic_point(g: &Geodesic, d: &ConvexDomain, x: &CPoint, y: &CPoint, t: f64) -> CPoint {
    match g {
        Geodesic::Exact => exact_geodesic(d, x, y, t).expect("closed form"),
        Geodesic::Path(nodes, fr) => {
            let i = fr.iter().position(|&f| f >= t).unwrap_or(fr.len() - 1).max(1);
            let span = fr[i] - fr[i - 1];
            let f = if span > 0.0 { (t - fr[i - 1]) / span } else { 0.0 };
            nodes[i - 1].lerp(&nodes[i], f.clamp(0.0, 1.0))
        }
    }
}

/// Compares distances between points on the sides `[a,b]` and `[a,c]`
/// with the Euclidean comparison triangle.
pub fn comparison_test(
    d: &ConvexDomain,
    a: &CPoint,
    b: &CPoint,
    cc: &CPoint,
    sample_count: usize,
    seed: u64,
) -> Result<ComparisonReport> {
    require_c_proper(d)?;
    for p in [a, b, cc] {
        check_point(d, p)?;
    }
    let opts = DistanceOptions::default();
    let dab = distance_interval(d, a, b, &opts).mid();
    let dac = distance_interval(d, a, cc, &opts).mid();
    let dbc = distance_interval(d, b, cc, &opts).mid();
    if dab <= 0.0 || dac <= 0.0 || dbc <= 0.0 {
        return Err(Error::Degenerate("comparison triangle has a zero side".into()));
    }
    let cx = (dab * dab + dac * dac - dbc * dbc) / (2.0 * dab);
    let cy = (dac * dac - cx * cx).max(0.0).sqrt();
    let gab = geodesic(d, a, b)?;
    let gac = geodesic(d, a, cc)?;
    let exact = matches!((&gab, &gac), (Geodesic::Exact, Geodesic::Exact));
    let mut r = rng(seed);
    let mut samples = Vec::with_capacity(sample_count);
    let mut max_slack = f64::NEG_INFINITY;
    for _ in 0..sample_count {
        let (s, t): (f64, f64) = (r.gen(), r.gen());
        let p = geodesic_point(&gab, d, a, b, s);
        let q = geodesic_point(&gac, d, a, cc, t);
        let dx = distance_interval(d, &p, &q, &opts);
        let dpq = if exact { dx.mid() } else { dx.lo };
        let bar = ((s * dab - t * cx).powi(2) + (t * cy).powi(2)).sqrt();
        let slack = dpq - bar;
        max_slack = max_slack.max(slack);
        samples.push(ComparisonSample { s, t, slack });
    }
    Ok(ComparisonReport {
        a: a.clone(),
        b: b.clone(),
        c: cc.clone(),
        sides: [dab, dac, dbc],
        samples,
        max_slack,
        exact,
    })
}

/// A canonical interior point of a catalog domain.
pub fn base_point(d: &ConvexDomain) -> Result<CPoint> {
    Ok(match d.node() {
        Node::Disk { center, .. } => CPoint::scalar(*center),
        Node::HalfPlane { point, normal } => CPoint::scalar(point + normal),
        Node::Sector { vertex, alpha, beta } => {
            let mid = 0.5 * (alpha + beta);
            CPoint::scalar(vertex + c(mid.cos(), mid.sin()))
        }
        Node::Ball { center, .. } => center.clone(),
        Node::Polydisk { centers, .. } => centers.clone(),
        Node::Product(l, r) => base_point(l)?.concat(&base_point(r)?),
        Node::AffineImage(img) => img.push_point(&base_point(img.inner())?),
        Node::Intersection(_) | Node::Graph(_) => {
            return Err(Error::InvalidArgument("no canonical base point for this domain".into()))
        }
    })
}

/// Violation certificate in `D1 x D2` built from a pair `x != y` in `D1`:
/// with `m` the midpoint of `x, y` and `z` at distance `K(x, y) / 2` from
/// `w`, the points `(x,w)`, `(y,w)`, `(m,z)` violate the midpoint
/// inequality by `K(z, w)^2`.
pub fn product_certificate(
    d1: &ConvexDomain,
    d2: &ConvexDomain,
    x: &CPoint,
    y: &CPoint,
    w: &CPoint,
    seed: u64,
) -> Result<Cat0Certificate> {
    require_c_proper(d1)?;
    require_c_proper(d2)?;
    check_point(d1, x)?;
    check_point(d1, y)?;
    check_point(d2, w)?;
    if x == y {
        return Err(Error::Degenerate("x and y coincide".into()));
    }
    let opts = DistanceOptions::default();
    let target = 0.5 * distance_interval(d1, x, y, &opts).mid();
    let m = midpoint_search(d1, x, y, EXACT_TOL)?;

    let mut directions = alloc::vec![CPoint::basis(d2.dim(), 0)];
    let mut r = rng(seed);
    for _ in 0..16 {
        directions.push(CPoint::from_real(&unit_vector(&mut r, 2 * d2.dim())));
    }
    let mut z = None;
    for u in &directions {
        if let Some(t) = solve_along(d2, w, u, target, &opts) {
            z = Some(w.offset(u, t));
            break;
        }
    }
    let z = z.ok_or(Error::ChooseCloserPoints { needed: target })?;

    let d = ConvexDomain::product(d1.clone(), d2.clone());
    let xx = x.concat(w);
    let yy = y.concat(w);
    let zz = m.point.concat(&z);
    let mm = m.point.concat(w);
    midpoint_defect_at(&d, &xx, &yy, &zz, &mm, EXACT_TOL, &opts)
}

/// Parameter `t` with `K(w, w + t u) = target`, by bisection to 1e-12.
fn solve_along(d: &ConvexDomain, w: &CPoint, u: &CPoint, target: f64, opts: &DistanceOptions) -> Option<f64> {
    let f = |t: f64| distance_interval(d, w, &w.offset(u, t), opts).mid() - target;
    let exit = d.ray_hit(w, u).map(|h| h.t);
    let mut hi = exit.map_or(1.0, |e| 0.5 * e);
    loop {
        let p = w.offset(u, hi);
        if !d.inside(&p) {
            return None;
        }
        if f(hi) >= 0.0 {
            break;
        }
        hi = match exit {
            Some(e) => {
                let next = hi + 0.5 * (e - hi);
                if next <= hi || e - next < 1e-15 * e {
                    return None;
                }
                next
            }
            None => {
                if hi > 1e12 {
                    return None;
                }
                2.0 * hi
            }
        };
    }
    Some(bisect(0.0, hi, 1e-12 * hi.max(1.0), f))
}

/// Gromov product `(x|y)_o` from interval midpoints.
pub fn gromov_product(d: &ConvexDomain, o: &CPoint, x: &CPoint, y: &CPoint) -> Result<f64> {
    for p in [o, x, y] {
        check_point(d, p)?;
    }
    require_c_proper(d)?;
    let opts = DistanceOptions::default();
    let dist = |a: &CPoint, b: &CPoint| distance_interval(d, a, b, &opts).mid();
    Ok(0.5 * (dist(x, o) + dist(o, y) - dist(x, y)))
}

/// Largest four-point defect `min{(x|z)_o, (z|y)_o} - (x|y)_o` over all
/// ordered quadruples of the sample.
pub fn four_point_delta(d: &ConvexDomain, points: &[CPoint]) -> Result<f64> {
    require_c_proper(d)?;
    for p in points {
        check_point(d, p)?;
    }
    let n = points.len();
    let opts = DistanceOptions::default();
    let mut dm = alloc::vec![alloc::vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = distance_interval(d, &points[i], &points[j], &opts).mid();
            dm[i][j] = v;
            dm[j][i] = v;
        }
    }
    let gp = |o: usize, a: usize, b: usize| 0.5 * (dm[a][o] + dm[o][b] - dm[a][b]);
    let mut best = 0.0_f64;
    for o in 0..n {
        for x in 0..n {
            for y in 0..n {
                let xy = gp(o, x, y);
                for z in 0..n {
                    best = best.max(gp(o, x, z).min(gp(o, z, y)) - xy);
                }
            }
        }
    }
    Ok(best)
}
