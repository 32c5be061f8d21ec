//! Boundary convexity diagnostics: m-convexity exponents and constants,
//! orders of vanishing along complex lines, and line type.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)] // f64 math under no_std
use num_traits::Float;
use rand::Rng;

use crate::domains::{ConvexDomain, DefiningFunction, Polynomial};
use crate::error::{Error, Result};
use crate::numeric::{ball_point, linear_fit, nelder_mead, rng, sphere_directions, unit_vector};
use crate::point::{c, CPoint};

/// Orders above this count as infinite on the numeric path.
pub const ORDER_CAP: u32 = 16;
/// Largest distance from an integer accepted for a numeric order.
pub const ORDER_RESIDUAL: f64 = 0.1;
/// Approach depths used to detect unbounded constants.
pub const DEPTH_LEVELS: [f64; 4] = [1e-2, 1e-4, 1e-6, 1e-8];
/// A constant counts as unbounded when `log C` falls faster than this
/// slope against `log epsilon`.
pub const UNBOUNDED_SLOPE: f64 = -1.0 / 32.0;

/// One `(z, v)` sample with its boundary distances.
#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MSample {
    pub z: CPoint,
    pub v: CPoint,
    pub delta: f64,
    pub delta_dir: f64,
}

#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MConvexityReport {
    pub samples: Vec<MSample>,
    /// Least-squares slope of `log delta_dir` against `log delta`.
    pub fitted_exponent: f64,
    /// Smallest `C` with `delta_dir <= C delta^(1/m)` on all samples
    /// (for exponent fits: with the fitted exponent).
    pub fitted_constant: f64,
    pub window_radius: Option<f64>,
    pub target_m: Option<u32>,
    /// True when the constant grows without bound along approach sequences.
    pub unbounded: bool,
    pub pass: Option<bool>,
    pub diagnostic: Option<String>,
}

/// Samples `z = p + eps u` and fits the exponent of `delta_dir(z, v)` against `delta(z)`.
pub fn exponent_fit(
    d: &ConvexDomain,
    p: &CPoint,
    u: &CPoint,
    v: &CPoint,
    eps_grid: &[f64],
) -> Result<MConvexityReport> {
    p.check_dim(d.dim())?;
    u.check_dim(d.dim())?;
    v.check_dim(d.dim())?;
    if v.is_zero() {
        return Err(Error::ZeroDirection);
    }
    let mut samples = Vec::new();
    for &eps in eps_grid {
        let z = p.offset(u, eps);
        if !d.inside(&z) {
            continue;
        }
        let delta = d.delta_unchecked(&z);
        let delta_dir = d.delta_dir_unchecked(&z, v);
        if delta > 0.0 && delta_dir.is_finite() && delta_dir > 0.0 {
            samples.push(MSample { z, v: v.clone(), delta, delta_dir });
        }
    }
    if samples.len() < 3 {
        return Err(Error::TooFewSamples { found: samples.len(), needed: 3 });
    }
    let xs: Vec<f64> = samples.iter().map(|s| s.delta.ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.delta_dir.ln()).collect();
    let (slope, _, _) = linear_fit(&xs, &ys);
    let constant = samples.iter().map(|s| s.delta_dir / s.delta.powf(slope)).fold(0.0, f64::max);
    Ok(MConvexityReport {
        samples,
        fitted_exponent: slope,
        fitted_constant: constant,
        window_radius: None,
        target_m: None,
        unbounded: false,
        pass: None,
        diagnostic: None,
    })
}

/// Settings of [`local_m_convex_check_with`].
#[derive(Clone, Debug)]
pub struct MConvexConfig {
    pub window_radius: f64,
    pub m: u32,
    pub sample_count: usize,
    pub seed: u64,
    /// Constant to test against; without one only boundedness is checked.
    pub constant: Option<f64>,
    /// Extra boundary points approached by depth sequences.
    pub probes: Vec<CPoint>,
    /// Number of boundary points reached by random rays for depth sequences.
    pub depth_sequences: usize,
}

impl MConvexConfig {
    pub fn new(window_radius: f64, m: u32, sample_count: usize, seed: u64) -> Self {
        Self { window_radius, m, sample_count, seed, constant: None, probes: Vec::new(), depth_sequences: 16 }
    }
}

/// Complex direction in C^d from real angle parameters (`2d - 2` of them).
fn direction_from_angles(d: usize, a: &[f64]) -> CPoint {
    if d == 1 {
        return CPoint::scalar(c(1.0, 0.0));
    }
    // hyperspherical moduli from the even angles, phases from the odd ones
    let mut coords = vec![c(0.0, 0.0); d];
    let mut rem = 1.0;
    for j in 0..d - 1 {
        let phi = a[2 * j];
        coords[j] = c(rem * phi.cos(), 0.0);
        rem *= phi.sin();
    }
    coords[d - 1] = c(rem, 0.0);
    for j in 1..d {
        let psi = a[2 * j - 1];
        coords[j] *= c(psi.cos(), psi.sin());
    }
    CPoint::raw(coords)
}

/// Direction maximizing `delta_dir(z, .)`: a grid over complex directions, then refinement.
fn worst_direction(d: &ConvexDomain, z: &CPoint) -> (CPoint, f64) {
    let dim = d.dim();
    if dim == 1 {
        let v = CPoint::scalar(c(1.0, 0.0));
        let dd = d.delta_dir_unchecked(z, &v);
        return (v, dd);
    }
    let eval = |a: &[f64]| d.delta_dir_unchecked(z, &direction_from_angles(dim, a));
    let (np, nq) = if d.is_catalog() { (9, 16) } else { (5, 8) };
    let mut best = (vec![0.0; 2 * dim - 2], f64::NEG_INFINITY);
    if dim == 2 {
        for i in 0..=np {
            let phi = 0.5 * PI * i as f64 / np as f64;
            for k in 0..nq {
                let psi = 2.0 * PI * k as f64 / nq as f64;
                let a = [phi, psi];
                let v = eval(&a);
                if v > best.1 {
                    best = (a.to_vec(), v);
                }
            }
        }
    } else {
        let mut r = rng(0xd1ec);
        for _ in 0..64 {
            let a: Vec<f64> = (0..2 * dim - 2).map(|_| r.gen::<f64>() * 2.0 * PI).collect();
            let v = eval(&a);
            if v > best.1 {
                best = (a, v);
            }
        }
    }
    if best.1.is_finite() {
        let evals = if d.is_catalog() { 120 } else { 40 };
        let step = vec![0.5 * PI / np as f64; 2 * dim - 2];
        let refined = nelder_mead(&best.0, &step, evals, 1e-10, |a| {
            let v = eval(a);
            if v.is_finite() {
                -v
            } else {
                f64::NEG_INFINITY
            }
        });
        if -refined.value > best.1 {
            best = (refined.x, -refined.value);
        }
    }
    (direction_from_angles(dim, &best.0), best.1)
}

/// Empirical m-convexity check on `B(0, R)`; see [`local_m_convex_check_with`].
pub fn local_m_convex_check(
    d: &ConvexDomain,
    r: f64,
    m: u32,
    sample_count: usize,
    seed: u64,
) -> Result<MConvexityReport> {
    local_m_convex_check_with(d, &MConvexConfig::new(r, m, sample_count, seed))
}

/// Estimates the smallest `C` with `delta_dir(z, v) <= C delta(z)^(1/m)` on
/// the window, from random interior samples and from depth sequences that
/// approach boundary points. The constant is reported unbounded when it
/// keeps growing along the depth sequences.
pub fn local_m_convex_check_with(d: &ConvexDomain, cfg: &MConvexConfig) -> Result<MConvexityReport> {
    if cfg.m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    if !d.is_c_proper() {
        return Err(Error::NotCProper);
    }
    let dim = d.dim();
    let inv_m = 1.0 / cfg.m as f64;
    let mut r = rng(cfg.seed);
    let mut interior = Vec::new();
    let mut attempts = 0;
    while interior.len() < cfg.sample_count && attempts < 200 * cfg.sample_count.max(1) {
        attempts += 1;
        let z = CPoint::from_real(&ball_point(&mut r, 2 * dim, cfg.window_radius));
        if d.inside(&z) {
            interior.push(z);
        }
    }
    if interior.is_empty() {
        return Err(Error::NoInteriorSamples);
    }

    let measure = |z: CPoint| -> Option<MSample> {
        let delta = d.delta_unchecked(&z);
        if !(delta > 0.0) {
            return None;
        }
        let (v, delta_dir) = worst_direction(d, &z);
        Some(MSample { z, v, delta, delta_dir })
    };
    let ratio = |s: &MSample| s.delta_dir / s.delta.powf(inv_m);
    let mut samples = Vec::new();
    let mut constant = 0.0_f64;
    for z in &interior {
        if let Some(s) = measure(z.clone()) {
            constant = constant.max(ratio(&s));
            samples.push(s);
        }
    }

    // depth sequences towards boundary points inside the window
    let mut targets: Vec<(CPoint, CPoint)> = Vec::new();
    for anchor in interior.iter().take(cfg.depth_sequences) {
        let u = CPoint::from_real(&unit_vector(&mut r, 2 * dim));
        if let Some(h) = d.ray_hit(anchor, &u) {
            let q = anchor.offset(&u, h.t);
            if q.norm() < cfg.window_radius {
                targets.push((q, anchor.clone()));
            }
        }
    }
    for p in &cfg.probes {
        p.check_dim(dim)?;
        let anchor = interior.iter().min_by(|a, b| a.dist(p).total_cmp(&b.dist(p))).expect("nonempty").clone();
        targets.push((p.clone(), anchor));
    }
    let mut level_max = vec![0.0_f64; DEPTH_LEVELS.len()];
    let mut depth_pts: Vec<(f64, f64)> = Vec::new();
    for (q, anchor) in &targets {
        let Some(towards) = (anchor - q).normalized() else { continue };
        for (k, &eps) in DEPTH_LEVELS.iter().enumerate() {
            let z = q.offset(&towards, eps);
            if !d.inside(&z) {
                continue;
            }
            if let Some(s) = measure(z) {
                let q = ratio(&s);
                constant = constant.max(q);
                level_max[k] = level_max[k].max(q);
                if s.delta_dir.is_finite() {
                    depth_pts.push((s.delta.ln(), s.delta_dir.ln()));
                }
                samples.push(s);
            }
        }
    }
    let levels: Vec<(f64, f64)> = DEPTH_LEVELS
        .iter()
        .zip(&level_max)
        .filter(|(_, &c)| c > 0.0 && c.is_finite())
        .map(|(&e, &c)| (e.ln(), c.ln()))
        .collect();
    let any_infinite = !constant.is_finite();
    let level_slope = if levels.len() >= 2 {
        let (xs, ys): (Vec<f64>, Vec<f64>) = levels.iter().cloned().unzip();
        linear_fit(&xs, &ys).0
    } else {
        0.0
    };
    let unbounded = any_infinite || level_slope < UNBOUNDED_SLOPE;
    let fitted_exponent = if depth_pts.len() >= 2 {
        let (xs, ys): (Vec<f64>, Vec<f64>) = depth_pts.into_iter().unzip();
        linear_fit(&xs, &ys).0
    } else {
        f64::NAN
    };
    let pass = !unbounded && cfg.constant.is_none_or(|cb| constant <= cb);
    let diagnostic = if unbounded {
        Some(alloc::format!(
            "empirical constant grows without bound near the boundary (log-log slope {level_slope:.3} against depth)"
        ))
    } else if !pass {
        Some(alloc::format!("empirical constant {constant:.6} exceeds the supplied bound"))
    } else {
        None
    };
    Ok(MConvexityReport {
        samples,
        fitted_exponent,
        fitted_constant: constant,
        window_radius: Some(cfg.window_radius),
        target_m: Some(cfg.m),
        unbounded,
        pass: Some(pass),
        diagnostic,
    })
}

// -------------------------------------------------------------------- vanishing order

/// Order of vanishing, possibly infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Order {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        match self {
            Order::Finite(n) => s.serialize_u32(*n),
            Order::Infinite => s.serialize_str("inf"),
        }
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Order {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u32),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) => Ok(Order::Finite(n)),
            Raw::S(s) if s == "inf" => Ok(Order::Infinite),
            Raw::S(s) => Err(serde::de::Error::custom(alloc::format!("invalid order {s}"))),
        }
    }
}

/// Dense bivariate polynomial in `(s, tau)`, indexed `[i][j]` for `s^i tau^j`.
struct Bivariate(Vec<Vec<f64>>);

impl Bivariate {
    fn constant(v: f64, deg: usize) -> Self {
        let mut m = vec![vec![0.0; deg + 1]; deg + 1];
        m[0][0] = v;
        Self(m)
    }

    fn mul_linear(&mut self, a: f64, b: f64, cc: f64) {
        let n = self.0.len();
        let mut out = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n - i {
                let v = self.0[i][j];
                if v == 0.0 {
                    continue;
                }
                out[i][j] += a * v;
                if i + j + 1 < n {
                    out[i + 1][j] += b * v;
                    out[i][j + 1] += cc * v;
                }
            }
        }
        self.0 = out;
    }
}

/// Lowest total degree of `p(x + t w)` in `t = s + i tau`, or `None` when it vanishes identically.
fn symbolic_order(p: &Polynomial, x: &CPoint, w: &CPoint) -> Option<u32> {
    let deg = p.degree() as usize;
    let n = deg + 1;
    let mut total = vec![vec![0.0; n]; n];
    // real coordinate k as a + b s + c tau
    let mut lin: Vec<(f64, f64, f64)> = Vec::new();
    for j in 0..x.dim() {
        lin.push((x[j].re, w[j].re, -w[j].im));
        lin.push((x[j].im, w[j].im, w[j].re));
    }
    let mut scale = 0.0_f64;
    for (exps, coef) in p.terms() {
        let mut b = Bivariate::constant(coef, deg);
        for (k, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                b.mul_linear(lin[k].0, lin[k].1, lin[k].2);
            }
        }
        for (row, src) in total.iter_mut().zip(&b.0) {
            for (t, &v) in row.iter_mut().zip(src) {
                *t += v;
                scale = scale.max(v.abs());
            }
        }
    }
    let tol = 1e-12 * scale.max(f64::MIN_POSITIVE);
    (0..n).find(|&k| (0..=k).any(|i| total[i][k - i].abs() > tol)).map(|k| k as u32)
}

/// Order of `|r(x + t w)|` at `t = 0` from its decay over `|t| in {1e-2, ..., 1e-5}`.
fn numeric_order(r: &dyn DefiningFunction, x: &CPoint, w: &CPoint) -> Result<Order> {
    let radii = [1e-2, 1e-3, 1e-4, 1e-5];
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &rho in &radii {
        let mut best = 0.0_f64;
        for k in 0..16 {
            let a = 2.0 * PI * k as f64 / 16.0;
            let t = c(rho * a.cos(), rho * a.sin());
            best = best.max(r.value(&x.coffset(w, t)).abs());
        }
        if best == 0.0 {
            return Ok(Order::Infinite);
        }
        xs.push(rho.ln());
        ys.push(best.ln());
    }
    let (slope, _, _) = linear_fit(&xs, &ys);
    if slope > ORDER_CAP as f64 {
        return Ok(Order::Infinite);
    }
    let rounded = slope.round();
    if (slope - rounded).abs() >= ORDER_RESIDUAL || rounded < 1.0 {
        return Err(Error::OrderNotResolved { slope });
    }
    Ok(Order::Finite(rounded as u32))
}

fn check_boundary(r: &dyn DefiningFunction, x: &CPoint) -> Result<()> {
    x.check_dim(r.dim())?;
    let value = r.value(x);
    let scale = 1.0 + x.norm();
    if value.abs() > 1e-9 * scale {
        return Err(Error::NotOnBoundary { value });
    }
    Ok(())
}

/// Order of vanishing of `r` along the complex line `t -> x + t w`.
pub fn vanishing_order(r: &dyn DefiningFunction, x: &CPoint, w: &CPoint) -> Result<Order> {
    check_boundary(r, x)?;
    w.check_dim(r.dim())?;
    if w.is_zero() {
        return Err(Error::ZeroDirection);
    }
    order_along(r, x, w)
}

fn order_along(r: &dyn DefiningFunction, x: &CPoint, w: &CPoint) -> Result<Order> {
    match r.polynomial() {
        Some(p) => Ok(symbolic_order(p, x, w).map_or(Order::Infinite, Order::Finite)),
        None => numeric_order(r, x, w),
    }
}

/// Numeric order, even when a polynomial form is available.
pub fn vanishing_order_numeric(r: &dyn DefiningFunction, x: &CPoint, w: &CPoint) -> Result<Order> {
    check_boundary(r, x)?;
    numeric_order(r, x, w)
}

#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LineTypeResult {
    pub base: CPoint,
    /// Supremum of the orders over all complex lines through the base point.
    pub line_type: Order,
    /// A complex tangent direction realizing the supremum.
    pub direction: CPoint,
    pub per_line: Vec<(CPoint, Order)>,
    pub symbolic: bool,
}

/// Orthonormal basis of `{w : sum_j dr/dz_j w_j = 0}`.
fn complex_tangent_basis(g: &CPoint) -> Vec<CPoint> {
    let n = g.normalized().expect("nonzero gradient");
    let mut basis: Vec<CPoint> = Vec::new();
    for j in 0..g.dim() {
        let mut v = CPoint::basis(g.dim(), j);
        for b in core::iter::once(&n).chain(basis.iter()) {
            let p = b.hdot(&v);
            v = &v - &b.cscale(p);
        }
        if let Some(u) = v.normalized() {
            if v.norm() > 1e-8 {
                basis.push(u);
            }
        }
        if basis.len() + 1 == g.dim() {
            break;
        }
    }
    basis
}

fn combine(basis: &[CPoint], coefs: &[Complex64]) -> CPoint {
    let mut v = CPoint::zeros(basis[0].dim());
    for (b, &k) in basis.iter().zip(coefs) {
        v = &v + &b.cscale(k);
    }
    v
}

/// Line type of `{r < 0}` at the boundary point `x`: the largest order of
/// vanishing of `r` along complex lines through `x`.
pub fn line_type(r: &dyn DefiningFunction, x: &CPoint, grid: usize) -> Result<LineTypeResult> {
    check_boundary(r, x)?;
    let g = r.gradient(x);
    if !(g.norm() > 1e-12) {
        return Err(Error::GradientVanishes);
    }
    let symbolic = r.polynomial().is_some();
    let basis = complex_tangent_basis(&g);
    let mut per_line: Vec<(CPoint, Order)> = Vec::new();
    if basis.is_empty() {
        // only transversal lines
        let w = g.normalized().expect("nonzero");
        let o = order_along(r, x, &w)?;
        return Ok(LineTypeResult {
            base: x.clone(),
            line_type: o,
            direction: w.clone(),
            per_line: vec![(w, o)],
            symbolic,
        });
    }
    let k = basis.len();
    let mut candidates: Vec<Vec<Complex64>> = Vec::new();
    if k == 1 {
        candidates.push(vec![c(1.0, 0.0)]);
    } else {
        for v in sphere_directions(2 * k, grid.max(1)) {
            candidates.push(v.chunks(2).map(|p| c(p[0], p[1])).collect());
        }
    }
    let mut best: Option<(Vec<Complex64>, Order)> = None;
    let mut last_err = None;
    let mut evaluate = |coefs: Vec<Complex64>, best: &mut Option<(Vec<Complex64>, Order)>| {
        let w = combine(&basis, &coefs);
        match order_along(r, x, &w) {
            Ok(o) => {
                per_line.push((w, o));
                if best.as_ref().is_none_or(|b| o > b.1) {
                    *best = Some((coefs, o));
                }
            }
            Err(e) => last_err = Some(e),
        }
    };
    for cand in candidates {
        evaluate(cand, &mut best);
    }
    if k > 1 {
        let mut rr = rng(0x11e7);
        let mut scale = 0.5;
        for _ in 0..3 {
            let Some((centre, _)) = best.clone() else { break };
            for _ in 0..32 {
                let pert: Vec<Complex64> = centre
                    .iter()
                    .map(|z| z + c(scale * (rr.gen::<f64>() - 0.5), scale * (rr.gen::<f64>() - 0.5)))
                    .collect();
                let n = pert.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if n > 0.0 {
                    evaluate(pert.into_iter().map(|z| z / n).collect(), &mut best);
                }
            }
            scale *= 0.5;
        }
    }
    let (coefs, order) = match best {
        Some(b) => b,
        None => return Err(last_err.unwrap_or(Error::OrderNotResolved { slope: f64::NAN })),
    };
    Ok(LineTypeResult { base: x.clone(), line_type: order, direction: combine(&basis, &coefs), per_line, symbolic })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::FnDefining;

    fn quartic() -> Polynomial {
        Polynomial::new(
            2,
            vec![(vec![0, 1, 0, 0], -1.0), (vec![0, 0, 4, 0], 1.0), (vec![0, 0, 2, 2], 2.0), (vec![0, 0, 0, 4], 1.0)],
        )
        .unwrap()
    }

    fn ball_fn() -> Polynomial {
        Polynomial::new(
            2,
            vec![
                (vec![2, 0, 0, 0], 1.0),
                (vec![0, 2, 0, 0], 1.0),
                (vec![0, 0, 2, 0], 1.0),
                (vec![0, 0, 0, 2], 1.0),
                (vec![0, 0, 0, 0], -1.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn exponent_fits() {
        let eps = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
        let b = ConvexDomain::unit_ball(2);
        let p = CPoint::real(&[1.0, 0.0]);
        let rep = exponent_fit(&b, &p, &CPoint::real(&[-1.0, 0.0]), &CPoint::real(&[0.0, 1.0]), &eps).unwrap();
        assert!((rep.fitted_exponent - 0.5).abs() < 0.02);
        let pd = ConvexDomain::unit_polydisk(2);
        let rep = exponent_fit(&pd, &p, &CPoint::real(&[-1.0, 0.0]), &CPoint::real(&[0.0, 1.0]), &eps).unwrap();
        assert!(rep.fitted_exponent.abs() < 1e-3);
        let disk = ConvexDomain::unit_disk();
        let rep =
            exponent_fit(&disk, &CPoint::real(&[1.0]), &CPoint::real(&[-1.0]), &CPoint::real(&[1.0]), &eps).unwrap();
        assert!((rep.fitted_exponent - 1.0).abs() < 1e-9);
        assert!(exponent_fit(&disk, &CPoint::real(&[1.0]), &CPoint::real(&[1.0]), &CPoint::real(&[1.0]), &eps).is_err());
    }

    #[test]
    fn ball_is_two_convex_and_polydisk_is_not() {
        let b = ConvexDomain::unit_ball(2);
        let rep = local_m_convex_check(&b, 2.0, 2, 60, 1).unwrap();
        assert_eq!(rep.pass, Some(true), "{:?}", rep.diagnostic);
        assert!(rep.fitted_constant <= 1.5);
        assert!(rep.samples.iter().all(|s| s.z.norm() < 2.0));
        let pd = ConvexDomain::unit_polydisk(2);
        let rep = local_m_convex_check(&pd, 2.0, 2, 60, 1).unwrap();
        assert!(rep.unbounded);
        assert_eq!(rep.pass, Some(false));
    }

    #[test]
    fn vanishing_orders() {
        let q = quartic();
        let zero = CPoint::zeros(2);
        assert_eq!(vanishing_order(&q, &zero, &CPoint::real(&[0.0, 1.0])).unwrap(), Order::Finite(4));
        assert_eq!(vanishing_order(&q, &zero, &CPoint::real(&[1.0, 0.0])).unwrap(), Order::Finite(1));
        let b = ball_fn();
        let x = CPoint::real(&[1.0, 0.0]);
        assert_eq!(vanishing_order(&b, &x, &CPoint::real(&[0.0, 1.0])).unwrap(), Order::Finite(2));
        // reparametrization invariance
        for k in [c(2.0, 0.0), c(0.0, 1.0)] {
            let w = CPoint::real(&[0.0, 1.0]).cscale(k);
            assert_eq!(vanishing_order(&q, &zero, &w).unwrap(), Order::Finite(4));
        }
        assert!(vanishing_order(&q, &CPoint::real(&[0.0, 0.5]), &CPoint::real(&[0.0, 1.0])).is_err());
        let num = vanishing_order_numeric(&q, &zero, &CPoint::real(&[0.0, 1.0])).unwrap();
        assert_eq!(num, Order::Finite(4));
    }

    #[test]
    fn line_types() {
        let b = ball_fn();
        let r = line_type(&b, &CPoint::real(&[1.0, 0.0]), 256).unwrap();
        assert_eq!(r.line_type, Order::Finite(2));
        let q = quartic();
        let r = line_type(&q, &CPoint::zeros(2), 256).unwrap();
        assert_eq!(r.line_type, Order::Finite(4));
        assert!(r.direction[0].norm() < 1e-12 && (r.direction[1].norm() - 1.0).abs() < 1e-12);
        let flat = FnDefining::new(2, |z: &CPoint| {
            let m = z[1].norm_sqr();
            -z[0].im + if m > 0.0 { (-1.0 / m).exp() } else { 0.0 }
        });
        let r = line_type(&flat, &CPoint::zeros(2), 256).unwrap();
        assert_eq!(r.line_type, Order::Infinite);
    }

    #[test]
    fn line_type_in_three_dimensions() {
        // -Im z1 + |z2|^2 + |z3|^6: the z3 line dominates
        let mut terms =
            vec![(vec![0, 1, 0, 0, 0, 0], -1.0), (vec![0, 0, 2, 0, 0, 0], 1.0), (vec![0, 0, 0, 2, 0, 0], 1.0)];
        for (a, b, k) in [(6, 0, 1.0), (4, 2, 3.0), (2, 4, 3.0), (0, 6, 1.0)] {
            terms.push((vec![0, 0, 0, 0, a, b], k));
        }
        let p = Polynomial::new(3, terms).unwrap();
        let r = line_type(&p, &CPoint::zeros(3), 256).unwrap();
        assert_eq!(r.line_type, Order::Finite(6));
    }
}
