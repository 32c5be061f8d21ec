use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // f64 math under no_std
use num_traits::Float;

use super::{hausdorff_with, HausdorffReading};
use crate::domains::{ConvexDomain, FnDefining, Node};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::point::{c, CPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ScalingKind {
    Lemma32,
    Frankel2b,
    Dilation,
}

#[derive(Clone, Debug)]
enum Rule {
    /// `A_n = diag(n, 1, ..., 1)`.
    FirstCoordinate,
    /// `A_n = n I`.
    Linear,
    /// `A_n = (1 + 1/n) I`.
    Shrinking,
    Table(BTreeMap<u64, CMatrix>),
}

/// Affine maps `z -> A_n z + b_n` with the source domain and the claimed limit of `A_n D`.
#[derive(Clone, Debug)]
pub struct ScalingSequence {
    pub kind: ScalingKind,
    pub source: ConvexDomain,
    pub claimed_limit: ConvexDomain,
    rule: Rule,
}

impl ScalingSequence {
    /// Dilations `n D` with a claimed limit.
    pub fn dilation(source: ConvexDomain, claimed_limit: ConvexDomain) -> Self {
        Self { kind: ScalingKind::Dilation, source, claimed_limit, rule: Rule::Linear }
    }

    /// Dilations `(1 + 1/n) D`, converging to `D` itself.
    pub fn shrinking_dilation(source: ConvexDomain) -> Self {
        let claimed_limit = source.clone();
        Self { kind: ScalingKind::Dilation, source, claimed_limit, rule: Rule::Shrinking }
    }

    pub fn map(&self, n: u64) -> Result<(CMatrix, CPoint)> {
        if n == 0 {
            return Err(Error::InvalidArgument("sequence index starts at 1".into()));
        }
        let d = self.source.dim();
        let a = match &self.rule {
            Rule::FirstCoordinate => {
                let mut diag = vec![c(1.0, 0.0); d];
                diag[0] = c(n as f64, 0.0);
                CMatrix::diagonal(&diag)
            }
            Rule::Linear => CMatrix::scalar(d, c(n as f64, 0.0)),
            Rule::Shrinking => CMatrix::scalar(d, c(1.0 + 1.0 / n as f64, 0.0)),
            Rule::Table(t) => t
                .get(&n)
                .cloned()
                .ok_or_else(|| Error::InvalidArgument(alloc::format!("no map computed for n = {n}")))?,
        };
        Ok((a, CPoint::zeros(d)))
    }

    /// `A_n D + b_n`.
    pub fn domain(&self, n: u64) -> Result<ConvexDomain> {
        let (a, b) = self.map(n)?;
        self.source.affine_image(&a, &b)
    }

    pub fn domains(&self, ns: &[u64]) -> Result<Vec<(u64, ConvexDomain)>> {
        ns.iter().map(|&n| Ok((n, self.domain(n)?))).collect()
    }

    /// Indices with a stored map (table-driven sequences only).
    pub fn indices(&self) -> Option<Vec<u64>> {
        match &self.rule {
            Rule::Table(t) => Some(t.keys().copied().collect()),
            _ => None,
        }
    }
}

const BOUNDARY_TOL: f64 = 1e-12;

/// Arc of directions `(alpha, beta)` of the tangent cone at 0 of a planar
/// domain with 0 on its boundary; `None` for the whole plane.
fn tangent_cone(p: &ConvexDomain) -> Result<Option<(f64, f64)>> {
    let not_boundary = || Error::InvalidArgument("0 is not on the boundary of the first-coordinate slice".into());
    let half = |n: Complex64| Some((n.arg() - PI / 2.0, n.arg() + PI / 2.0));
    match p.node() {
        Node::Disk { center, radius } => {
            let gap = center.norm() - radius;
            if gap.abs() <= BOUNDARY_TOL * (1.0 + radius) {
                Ok(half(*center))
            } else if gap < 0.0 {
                Ok(None)
            } else {
                Err(not_boundary())
            }
        }
        Node::HalfPlane { point, normal } => {
            let s = (-point * normal.conj()).re;
            if s.abs() <= BOUNDARY_TOL * (1.0 + point.norm()) {
                Ok(half(*normal))
            } else if s > 0.0 {
                Ok(None)
            } else {
                Err(not_boundary())
            }
        }
        Node::Sector { vertex, alpha, beta } => {
            let scale = 1.0 + vertex.norm();
            if vertex.norm() <= BOUNDARY_TOL * scale {
                return Ok(Some((*alpha, *beta)));
            }
            let y = -vertex;
            let side = |ang: f64| (y * c(ang.cos(), -ang.sin())).im;
            let along = |ang: f64| (y * c(ang.cos(), -ang.sin())).re;
            let (sa, sb) = (side(*alpha), -side(*beta));
            if sa.abs() <= BOUNDARY_TOL * scale && along(*alpha) > 0.0 {
                Ok(Some((*alpha, alpha + PI)))
            } else if sb.abs() <= BOUNDARY_TOL * scale && along(*beta) > 0.0 {
                Ok(Some((beta - PI, *beta)))
            } else if p.inside(&CPoint::zeros(1)) {
                Ok(None)
            } else {
                Err(not_boundary())
            }
        }
        Node::Intersection(ms) => {
            let mut arc: Option<(f64, f64)> = None;
            for m in ms {
                let Some((a, b)) = tangent_cone(m)? else { continue };
                arc = Some(match arc {
                    None => (a, b),
                    Some((a0, b0)) => {
                        // shift (a, b) by a multiple of 2 pi to overlap (a0, b0)
                        let mid0 = 0.5 * (a0 + b0);
                        let k = ((mid0 - 0.5 * (a + b)) / (2.0 * PI)).round();
                        let (a, b) = (a + 2.0 * PI * k, b + 2.0 * PI * k);
                        let (lo, hi) = (a0.max(a), b0.min(b));
                        if hi <= lo {
                            return Err(Error::Degenerate("tangent cone at 0 is empty".into()));
                        }
                        (lo, hi)
                    }
                });
            }
            match arc {
                Some(x) => Ok(Some(x)),
                None if p.inside(&CPoint::zeros(1)) => Ok(None),
                None => Err(not_boundary()),
            }
        }
        _ => numeric_tangent_cone(p).map(Some),
    }
}

/// Tangent cone from the inside test on a small circle, by bisection on angle.
fn numeric_tangent_cone(p: &ConvexDomain) -> Result<(f64, f64)> {
    let eps = 1e-9;
    let inside = |a: f64| p.inside(&CPoint::scalar(c(eps * a.cos(), eps * a.sin())));
    if p.inside(&CPoint::zeros(1)) {
        return Err(Error::InvalidArgument("0 is not on the boundary of the first-coordinate slice".into()));
    }
    let n = 1024;
    let flags: Vec<bool> = (0..n).map(|i| inside(2.0 * PI * i as f64 / n as f64)).collect();
    let start = (0..n)
        .find(|&i| flags[i] && !flags[(i + n - 1) % n])
        .ok_or_else(|| Error::InvalidArgument("0 is not on the boundary of the first-coordinate slice".into()))?;
    let end = (1..=n).map(|k| (start + k) % n).find(|&i| !flags[i]).expect("boundary exists");
    let step = 2.0 * PI / n as f64;
    let a0 = start as f64 * step;
    let mut b0 = end as f64 * step;
    if b0 <= a0 {
        b0 += 2.0 * PI;
    }
    let alpha = crate::numeric::bisect(a0 - step, a0, 1e-12, |a| if inside(a) { 1.0 } else { -1.0 });
    let beta = crate::numeric::bisect(b0 - step, b0, 1e-12, |a| if inside(a) { -1.0 } else { 1.0 });
    Ok((alpha, beta))
}

/// First-coordinate blow-up `A_n = diag(n, I)` at 0. The claimed limit is
/// the tangent cone of `D ∩ (C x {0})` at 0 times the remaining factor,
/// which requires `D` to be a product with a one-dimensional first factor.
pub fn scaling_lemma32(d: &ConvexDomain) -> Result<ScalingSequence> {
    if d.dim() < 2 {
        return Err(Error::InvalidArgument("the first-coordinate blow-up needs dimension at least 2".into()));
    }
    let slice = d
        .planar_slice_node(&CPoint::zeros(d.dim()), &CPoint::basis(d.dim(), 0))
        .ok_or_else(|| Error::InvalidArgument("first-coordinate slice through 0 is empty or not structural".into()))?;
    let (alpha, beta) = tangent_cone(&slice)?
        .ok_or_else(|| Error::InvalidArgument("0 is not on the boundary of the first-coordinate slice".into()))?;
    let cone = ConvexDomain::sector(c(0.0, 0.0), alpha, beta)?;
    let rest = match d.node() {
        Node::Product(l, r) if l.dim() == 1 => (**r).clone(),
        _ => {
            return Err(Error::InvalidArgument(
                "no structural remainder: the domain must be a product with a one-dimensional first factor".into(),
            ))
        }
    };
    Ok(ScalingSequence {
        kind: ScalingKind::Lemma32,
        source: d.clone(),
        claimed_limit: ConvexDomain::product(cone, rest),
        rule: Rule::FirstCoordinate,
    })
}

/// Boundary data `f(x, z)` of `{(x + iy, z) : y > f(x, z)}` near 0 in C^2.
pub type GraphData = Arc<dyn Fn(f64, Complex64) -> f64 + Send + Sync>;

#[derive(Clone, Debug)]
pub struct FrankelConfig {
    pub ns: Vec<u32>,
    pub search_radius: f64,
    pub radial: usize,
    pub angular: usize,
    /// Verification samples of `f_n(0, w) <= |w|^n` on `|w| < 1`.
    pub verify_samples: usize,
    /// Window radius for the Hausdorff reading; `None` skips it.
    pub window: Option<f64>,
    pub directions: usize,
}

impl Default for FrankelConfig {
    fn default() -> Self {
        Self {
            ns: vec![2, 4, 8, 16],
            search_radius: 0.9,
            radial: 512,
            angular: 256,
            verify_samples: 100,
            window: Some(1.0),
            directions: 1024,
        }
    }
}

#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FrankelStep {
    pub n: u32,
    pub z_n: Complex64,
    /// `a_n = f(0, z_n) / |z_n|^n`.
    pub a_n: f64,
    pub scale: f64,
    /// Largest `f_n(0, w) / |w|^n` over the verification samples.
    pub max_ratio: f64,
    /// Set when some sample exceeds the bound (grid argmax error).
    pub flagged: bool,
    pub hausdorff: Option<HausdorffReading>,
}

#[derive(Clone, Debug)]
pub struct FrankelReport {
    pub sequence: ScalingSequence,
    pub steps: Vec<FrankelStep>,
}

/// Argmax of `f(0, w) / |w|^n` over a polar grid on `|w| <= r0`, with one
/// finer round around the winner.
fn polar_argmax(f: &GraphData, n: u32, cfg: &FrankelConfig) -> Result<(Complex64, f64)> {
    let r0 = cfg.search_radius;
    let dr = r0 / cfg.radial as f64;
    let da = 2.0 * PI / cfg.angular as f64;
    let ratio = |r: f64, a: f64| f(0.0, c(r * a.cos(), r * a.sin())) / r.powi(n as i32);
    let mut best = (1usize, 0usize, f64::NEG_INFINITY);
    for i in 1..=cfg.radial {
        let r = dr * i as f64;
        for k in 0..cfg.angular {
            let v = ratio(r, da * k as f64);
            if v > best.2 {
                best = (i, k, v);
            }
        }
    }
    if best.0 == cfg.radial {
        return Err(Error::EnlargeSearchRadius { n });
    }
    if best.0 == 1 {
        return Err(Error::ArgmaxAtOrigin { n });
    }
    let (mut r_best, mut a_best, mut v_best) = (dr * best.0 as f64, da * best.1 as f64, best.2);
    let (rc, ac) = (r_best, a_best);
    for i in -10..=10 {
        let r = rc + dr * i as f64 / 10.0;
        if r <= 0.0 || r > r0 {
            continue;
        }
        for k in -10..=10 {
            let a = ac + da * k as f64 / 10.0;
            let v = ratio(r, a);
            if v > v_best {
                (r_best, a_best, v_best) = (r, a, v);
            }
        }
    }
    Ok((c(r_best * a_best.cos(), r_best * a_best.sin()), v_best))
}

/// Rescaling `A_n = diag(1 / f(0, z_n), 1 / z_n)` of `{y > f(x, z)}` along
/// `z_n = argmax f(0, w) / |w|^n`, towards `H x Delta`.
pub fn frankel_2b(f: GraphData, cfg: &FrankelConfig) -> Result<FrankelReport> {
    let g = f.clone();
    let r = FnDefining::new(2, move |z: &CPoint| g(z[0].re, z[1]) - z[0].im);
    let source = ConvexDomain::graph(Arc::new(r), true)?;
    let limit = ConvexDomain::product(ConvexDomain::upper_half_plane(), ConvexDomain::unit_disk());
    let mut table = BTreeMap::new();
    let mut steps = Vec::new();
    for &n in &cfg.ns {
        let (z_n, a_n) = polar_argmax(&f, n, cfg)?;
        let scale = f(0.0, z_n);
        if !(scale > 0.0) {
            return Err(Error::ZeroScale { n });
        }
        let m = CMatrix::diagonal(&[c(1.0 / scale, 0.0), c(1.0, 0.0) / z_n]);
        let mut max_ratio = 0.0_f64;
        let side = (cfg.verify_samples as f64).sqrt().ceil().max(1.0) as usize;
        for i in 0..side {
            for k in 0..side {
                let rho = (i as f64 + 0.5) / side as f64;
                let a = 2.0 * PI * k as f64 / side as f64;
                let w = c(rho * a.cos(), rho * a.sin());
                let fnw = f(0.0, z_n * w) / scale;
                max_ratio = max_ratio.max(fnw / rho.powi(n as i32));
            }
        }
        let hausdorff = match cfg.window {
            Some(rw) => {
                let img = source.affine_image(&m, &CPoint::zeros(2))?;
                Some(hausdorff_with(&img, &limit, rw, cfg.directions)?)
            }
            None => None,
        };
        table.insert(n as u64, m);
        steps.push(FrankelStep { n, z_n, a_n, scale, max_ratio, flagged: max_ratio > 1.0 + 1e-9, hausdorff });
    }
    let sequence =
        ScalingSequence { kind: ScalingKind::Frankel2b, source, claimed_limit: limit, rule: Rule::Table(table) };
    Ok(FrankelReport { sequence, steps })
}
