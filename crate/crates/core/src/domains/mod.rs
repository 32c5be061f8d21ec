//! Convex domains in C^d and their Euclidean boundary geometry.
//!
//! A [`ConvexDomain`] is a tree of catalog nodes (disks, half-planes, sectors,
//! balls, polydisks, products, affine images, intersections) with sublevel
//! sets of convex defining functions as leaves. Every query recurses over
//! the tree; closed forms are used wherever the node allows one and
//! ray-shooting against the boundary otherwise.

mod function;
mod slice;

use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // f64 math under no_std
use num_traits::Float;

pub use function::{DefiningFunction, FnDefining, Polynomial};
pub use slice::PlanarSlice;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::numeric::sphere_directions;
use crate::point::{c, CPoint};

/// Openings within this distance of pi are treated as half-planes.
const HALF_PLANE_OPENING_TOL: f64 = 1e-12;
/// Rays longer than this count as unbounded.
const RAY_CAP: f64 = 1e9;
const FIXED_POINT_ITERS: usize = 4000;

/// A boundary point reached by a ray, with the outward unit normal there.
#[derive(Clone, Debug, PartialEq)]
pub struct RayHit {
    /// Ray parameter: the boundary point is `z + t * u`.
    pub t: f64,
    /// Outward unit normal packed into C^d (real part / imaginary part per coordinate).
    pub normal: CPoint,
}

/// An affine image `{A w + b : w in inner}`.
#[derive(Clone, Debug)]
pub struct AffineImage {
    matrix: CMatrix,
    inverse: CMatrix,
    offset: CPoint,
    inner: ConvexDomain,
    unitary_scale: Option<f64>,
}

impl AffineImage {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn offset(&self) -> &CPoint {
        &self.offset
    }

    pub fn inner(&self) -> &ConvexDomain {
        &self.inner
    }

    /// Maps an ambient point back into the inner domain's coordinates.
    pub fn pull_point(&self, z: &CPoint) -> CPoint {
        self.inverse.apply(&(z - &self.offset))
    }

    pub fn pull_vector(&self, v: &CPoint) -> CPoint {
        self.inverse.apply(v)
    }

    pub fn push_point(&self, w: &CPoint) -> CPoint {
        &self.matrix.apply(w) + &self.offset
    }
}

/// Sublevel set `{r < 0}` of a convex defining function.
#[derive(Clone, Debug)]
pub struct Graph {
    function: Arc<dyn DefiningFunction>,
    c_proper: bool,
}

impl Graph {
    pub fn function(&self) -> &Arc<dyn DefiningFunction> {
        &self.function
    }

    pub fn declared_c_proper(&self) -> bool {
        self.c_proper
    }
}

/// Node of a domain tree.
#[derive(Clone, Debug)]
pub enum Node {
    Disk {
        center: Complex64,
        radius: f64,
    },
    /// `{z : Re((z - point) conj(normal)) > 0}` with `|normal| = 1` pointing inward.
    HalfPlane {
        point: Complex64,
        normal: Complex64,
    },
    /// `vertex + {z : arg z in (alpha, beta)}` with opening in (0, pi).
    Sector {
        vertex: Complex64,
        alpha: f64,
        beta: f64,
    },
    Ball {
        center: CPoint,
        radius: f64,
    },
    Polydisk {
        centers: CPoint,
        radii: Vec<f64>,
    },
    Product(Box<ConvexDomain>, Box<ConvexDomain>),
    AffineImage(Box<AffineImage>),
    Intersection(Vec<ConvexDomain>),
    Graph(Graph),
}

/// Convex domain in C^d; immutable after construction.
#[derive(Clone, Debug)]
pub struct ConvexDomain {
    node: Node,
    dim: usize,
    c_proper: bool,
}

fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

fn positive(r: f64, what: &str) -> Result<()> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidDomain(alloc::format!("{what} must be positive and finite")))
    }
}

impl ConvexDomain {
    // ---------------------------------------------------------------- construction

    pub fn disk(center: Complex64, radius: f64) -> Result<Self> {
        positive(radius, "disk radius")?;
        if !finite(center) {
            return Err(Error::InvalidDomain("disk center must be finite".into()));
        }
        Ok(Self { node: Node::Disk { center, radius }, dim: 1, c_proper: true })
    }

    pub fn unit_disk() -> Self {
        Self::disk(c(0.0, 0.0), 1.0).expect("valid")
    }

    /// Half-plane `{Re((z - point) conj(normal)) > 0}`; the normal is normalized.
    pub fn half_plane(point: Complex64, normal: Complex64) -> Result<Self> {
        let n = normal.norm();
        if !(n > 0.0) || !n.is_finite() || !finite(point) {
            return Err(Error::InvalidDomain("half-plane needs a finite point and nonzero normal".into()));
        }
        Ok(Self { node: Node::HalfPlane { point, normal: normal / n }, dim: 1, c_proper: true })
    }

    /// Upper half-plane `{Im z > 0}`.
    pub fn upper_half_plane() -> Self {
        Self::half_plane(c(0.0, 0.0), c(0.0, 1.0)).expect("valid")
    }

    /// Right half-plane `{Re z > 0}`.
    pub fn right_half_plane() -> Self {
        Self::half_plane(c(0.0, 0.0), c(1.0, 0.0)).expect("valid")
    }

    /// Sector `vertex + C(alpha, beta)`. An opening of exactly pi becomes a half-plane.
    pub fn sector(vertex: Complex64, alpha: f64, beta: f64) -> Result<Self> {
        let opening = beta - alpha;
        if !finite(vertex) || !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidDomain("sector parameters must be finite".into()));
        }
        if !(opening > 0.0) || opening > PI + HALF_PLANE_OPENING_TOL {
            return Err(Error::InvalidDomain("sector opening must lie in (0, pi]".into()));
        }
        if (opening - PI).abs() <= HALF_PLANE_OPENING_TOL {
            let mid = alpha + 0.5 * PI;
            return Self::half_plane(vertex, c(mid.cos(), mid.sin()));
        }
        Ok(Self { node: Node::Sector { vertex, alpha, beta }, dim: 1, c_proper: true })
    }

    pub fn ball(center: CPoint, radius: f64) -> Result<Self> {
        positive(radius, "ball radius")?;
        let dim = center.dim();
        Ok(Self { node: Node::Ball { center, radius }, dim, c_proper: true })
    }

    pub fn unit_ball(dim: usize) -> Self {
        Self::ball(CPoint::zeros(dim), 1.0).expect("valid")
    }

    pub fn polydisk(centers: CPoint, radii: Vec<f64>) -> Result<Self> {
        if centers.dim() != radii.len() {
            return Err(Error::InvalidDomain("polydisk needs one radius per coordinate".into()));
        }
        for &r in &radii {
            positive(r, "polydisk radius")?;
        }
        let dim = centers.dim();
        Ok(Self { node: Node::Polydisk { centers, radii }, dim, c_proper: true })
    }

    pub fn unit_polydisk(dim: usize) -> Self {
        Self::polydisk(CPoint::zeros(dim), vec![1.0; dim]).expect("valid")
    }

    pub fn product(left: ConvexDomain, right: ConvexDomain) -> Self {
        let dim = left.dim + right.dim;
        let c_proper = left.c_proper && right.c_proper;
        Self { node: Node::Product(Box::new(left), Box::new(right)), dim, c_proper }
    }

    /// Raw affine-image node, without structural simplification.
    pub fn affine_image_node(matrix: CMatrix, offset: CPoint, inner: ConvexDomain) -> Result<Self> {
        if matrix.dim() != inner.dim {
            return Err(Error::DimensionMismatch { expected: inner.dim, found: matrix.dim() });
        }
        offset.check_dim(inner.dim)?;
        let inverse = matrix.try_inverse()?;
        let unitary_scale = matrix.unitary_scale();
        let dim = inner.dim;
        let c_proper = inner.c_proper;
        Ok(Self {
            node: Node::AffineImage(Box::new(AffineImage { matrix, inverse, offset, inner, unitary_scale })),
            dim,
            c_proper,
        })
    }

    /// Image `{A z + b : z in self}`, simplified to a catalog node when the
    /// map preserves the node type (scaled unitary maps of balls, diagonal
    /// maps of polydisks, block-diagonal maps of products, ...).
    pub fn affine_image(&self, a: &CMatrix, b: &CPoint) -> Result<Self> {
        if a.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: a.dim() });
        }
        b.check_dim(self.dim)?;
        a.try_inverse()?;
        match &self.node {
            Node::Disk { center, radius } => {
                let l = a.get(0, 0);
                Self::disk(l * center + b[0], l.norm() * radius)
            }
            Node::HalfPlane { point, normal } => {
                let l = a.get(0, 0);
                Self::half_plane(l * point + b[0], l * normal)
            }
            Node::Sector { vertex, alpha, beta } => {
                let l = a.get(0, 0);
                let rot = l.arg();
                Self::sector(l * vertex + b[0], alpha + rot, beta + rot)
            }
            Node::Ball { center, radius } => match a.unitary_scale() {
                Some(s) => Self::ball(&a.apply(center) + b, s * radius),
                None => Self::affine_image_node(a.clone(), b.clone(), self.clone()),
            },
            Node::Polydisk { centers, radii } => match a.as_diagonal() {
                Some(diag) => {
                    let new_c = &a.apply(centers) + b;
                    let new_r = radii.iter().zip(&diag).map(|(r, l)| r * l.norm()).collect();
                    Self::polydisk(new_c, new_r)
                }
                None => Self::affine_image_node(a.clone(), b.clone(), self.clone()),
            },
            Node::Product(l, r) => match a.split_block_diagonal(l.dim) {
                Some((a1, a2)) => Ok(Self::product(
                    l.affine_image(&a1, &b.slice(0, l.dim))?,
                    r.affine_image(&a2, &b.slice(l.dim, r.dim))?,
                )),
                None => Self::affine_image_node(a.clone(), b.clone(), self.clone()),
            },
            Node::Intersection(ms) => {
                Self::intersection(ms.iter().map(|m| m.affine_image(a, b)).collect::<Result<Vec<_>>>()?)
            }
            Node::AffineImage(img) => {
                let composed = a.mul(&img.matrix);
                let off = &a.apply(&img.offset) + b;
                img.inner.affine_image(&composed, &off)
            }
            Node::Graph(_) => Self::affine_image_node(a.clone(), b.clone(), self.clone()),
        }
    }

    /// Dilation `s * self`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        self.affine_image(&CMatrix::scalar(self.dim, c(s, 0.0)), &CPoint::zeros(self.dim))
    }

    pub fn intersection(members: Vec<ConvexDomain>) -> Result<Self> {
        let first = members.first().ok_or_else(|| Error::InvalidDomain("empty intersection".into()))?;
        let dim = first.dim;
        if let Some(m) = members.iter().find(|m| m.dim != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: m.dim });
        }
        let c_proper = members.iter().any(|m| m.c_proper);
        Ok(Self { node: Node::Intersection(members), dim, c_proper })
    }

    /// `{r < 0}`; C-properness is the caller's declaration.
    pub fn graph(function: Arc<dyn DefiningFunction>, c_proper: bool) -> Result<Self> {
        let dim = function.dim();
        if dim == 0 {
            return Err(Error::InvalidDomain("defining function has dimension 0".into()));
        }
        Ok(Self { node: Node::Graph(Graph { function, c_proper }), dim, c_proper })
    }

    // ---------------------------------------------------------------- accessors

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_c_proper(&self) -> bool {
        self.c_proper
    }

    /// True for disks, half-planes and sectors, the nodes with conformal charts.
    pub fn is_planar_catalog(&self) -> bool {
        matches!(self.node, Node::Disk { .. } | Node::HalfPlane { .. } | Node::Sector { .. })
    }

    /// Every node except defining-function leaves has closed-form boundary data.
    pub fn is_catalog(&self) -> bool {
        match &self.node {
            Node::Graph(_) => false,
            Node::Product(l, r) => l.is_catalog() && r.is_catalog(),
            Node::AffineImage(img) => img.inner.is_catalog(),
            Node::Intersection(ms) => ms.iter().all(|m| m.is_catalog()),
            _ => true,
        }
    }

    fn split(&self, z: &CPoint, l: &ConvexDomain) -> (CPoint, CPoint) {
        (z.slice(0, l.dim), z.slice(l.dim, self.dim - l.dim))
    }

    // ---------------------------------------------------------------- membership

    pub fn contains(&self, z: &CPoint) -> Result<bool> {
        z.check_dim(self.dim)?;
        Ok(self.inside(z))
    }

    /// Strict membership without the dimension check.
    pub fn inside(&self, z: &CPoint) -> bool {
        match &self.node {
            Node::Disk { center, radius } => (z[0] - center).norm() < *radius,
            Node::HalfPlane { point, normal } => ((z[0] - point) * normal.conj()).re > 0.0,
            Node::Sector { vertex, alpha, beta } => {
                let (da, db) = sector_line_distances(z[0] - vertex, *alpha, *beta);
                da > 0.0 && db > 0.0
            }
            Node::Ball { center, radius } => (z - center).norm() < *radius,
            Node::Polydisk { centers, radii } => (0..self.dim).all(|j| (z[j] - centers[j]).norm() < radii[j]),
            Node::Product(l, r) => {
                let (a, b) = self.split(z, l);
                l.inside(&a) && r.inside(&b)
            }
            Node::AffineImage(img) => img.inner.inside(&img.pull_point(z)),
            Node::Intersection(ms) => ms.iter().all(|m| m.inside(z)),
            Node::Graph(g) => g.function.value(z) < 0.0,
        }
    }

    fn require_inside(&self, z: &CPoint) -> Result<()> {
        z.check_dim(self.dim)?;
        if self.inside(z) {
            Ok(())
        } else {
            Err(Error::NotInDomain)
        }
    }

    // ---------------------------------------------------------------- boundary distance

    /// Euclidean distance from an interior point to the boundary.
    pub fn delta(&self, z: &CPoint) -> Result<f64> {
        self.require_inside(z)?;
        Ok(self.delta_unchecked(z))
    }

    pub(crate) fn delta_unchecked(&self, z: &CPoint) -> f64 {
        match &self.node {
            Node::Disk { center, radius } => radius - (z[0] - center).norm(),
            Node::HalfPlane { point, normal } => ((z[0] - point) * normal.conj()).re,
            Node::Sector { vertex, alpha, beta } => {
                let (da, db) = sector_line_distances(z[0] - vertex, *alpha, *beta);
                da.min(db)
            }
            Node::Ball { center, radius } => radius - (z - center).norm(),
            Node::Polydisk { centers, radii } => {
                (0..self.dim).map(|j| radii[j] - (z[j] - centers[j]).norm()).fold(f64::INFINITY, f64::min)
            }
            Node::Product(l, r) => {
                let (a, b) = self.split(z, l);
                l.delta_unchecked(&a).min(r.delta_unchecked(&b))
            }
            Node::AffineImage(img) => match img.unitary_scale {
                Some(s) => s * img.inner.delta_unchecked(&img.pull_point(z)),
                None => self.numeric_delta(z),
            },
            Node::Intersection(ms) => ms.iter().map(|m| m.delta_unchecked(z)).fold(f64::INFINITY, f64::min),
            Node::Graph(_) => self.numeric_delta(z),
        }
    }

    /// Distance to the boundary inside the complex line `z + C v`
    /// (`+inf` when the whole line lies in the domain).
    pub fn delta_dir(&self, z: &CPoint, v: &CPoint) -> Result<f64> {
        self.require_inside(z)?;
        v.check_dim(self.dim)?;
        if v.is_zero() {
            return Err(Error::ZeroDirection);
        }
        Ok(self.delta_dir_unchecked(z, v))
    }

    pub(crate) fn delta_dir_unchecked(&self, z: &CPoint, v: &CPoint) -> f64 {
        v.norm() * self.slice_radius(z, v)
    }

    /// Boundary distance from `0` in the slice `{zeta : z + zeta v in D}`, in zeta units.
    pub(crate) fn slice_radius(&self, z: &CPoint, v: &CPoint) -> f64 {
        match &self.node {
            Node::Disk { .. } | Node::HalfPlane { .. } | Node::Sector { .. } => self.delta_unchecked(z) / v[0].norm(),
            Node::Ball { center, radius } => {
                let w = z - center;
                let vv = v.norm_sqr();
                let proj = v.hdot(&w);
                let zeta0 = proj.norm() / vv;
                let r2 = (radius * radius - w.norm_sqr() + proj.norm_sqr() / vv) / vv;
                r2.max(0.0).sqrt() - zeta0
            }
            Node::Polydisk { centers, radii } => (0..self.dim)
                .filter(|&j| v[j].norm() > 0.0)
                .map(|j| (radii[j] - (z[j] - centers[j]).norm()) / v[j].norm())
                .fold(f64::INFINITY, f64::min),
            Node::Product(l, r) => {
                let (za, zb) = self.split(z, l);
                let (va, vb) = self.split(v, l);
                let a = if va.is_zero() { f64::INFINITY } else { l.slice_radius(&za, &va) };
                let b = if vb.is_zero() { f64::INFINITY } else { r.slice_radius(&zb, &vb) };
                a.min(b)
            }
            Node::AffineImage(img) => img.inner.slice_radius(&img.pull_point(z), &img.pull_vector(v)),
            Node::Intersection(ms) => ms.iter().map(|m| m.slice_radius(z, v)).fold(f64::INFINITY, f64::min),
            Node::Graph(_) => self.numeric_slice_radius(z, v),
        }
    }

    // ---------------------------------------------------------------- rays and supports

    /// First boundary crossing of the ray `z + t u`, `t > 0`, from an interior point.
    /// `None` when the ray stays inside.
    pub fn ray_hit(&self, z: &CPoint, u: &CPoint) -> Option<RayHit> {
        match &self.node {
            Node::Disk { center, radius } => sphere_hit(&CPoint::scalar(z[0] - center), &CPoint::scalar(u[0]), *radius),
            Node::HalfPlane { point, normal } => {
                half_plane_hit(z[0] - point, u[0], *normal).map(|(t, n)| RayHit { t, normal: CPoint::scalar(n) })
            }
            Node::Sector { vertex, alpha, beta } => {
                let (na, nb) = sector_normals(*alpha, *beta);
                let y = z[0] - vertex;
                let a = half_plane_hit(y, u[0], na);
                let b = half_plane_hit(y, u[0], nb);
                min_hit(a, b).map(|(t, n)| RayHit { t, normal: CPoint::scalar(n) })
            }
            Node::Ball { center, radius } => sphere_hit(&(z - center), u, *radius),
            Node::Polydisk { centers, radii } => {
                let mut best: Option<RayHit> = None;
                for j in 0..self.dim {
                    if u[j].norm() == 0.0 {
                        continue;
                    }
                    if let Some(h) = sphere_hit(&CPoint::scalar(z[j] - centers[j]), &CPoint::scalar(u[j]), radii[j]) {
                        if best.as_ref().is_none_or(|b| h.t < b.t) {
                            let mut n = CPoint::zeros(self.dim);
                            n[j] = h.normal[0];
                            best = Some(RayHit { t: h.t, normal: n });
                        }
                    }
                }
                best
            }
            Node::Product(l, r) => {
                let (za, zb) = self.split(z, l);
                let (ua, ub) = self.split(u, l);
                let ha = if ua.is_zero() { None } else { l.ray_hit(&za, &ua) };
                let hb = if ub.is_zero() { None } else { r.ray_hit(&zb, &ub) };
                match (ha, hb) {
                    (Some(a), Some(b)) if a.t <= b.t => {
                        Some(RayHit { t: a.t, normal: a.normal.concat(&CPoint::zeros(r.dim)) })
                    }
                    (Some(_), Some(b)) | (None, Some(b)) => {
                        Some(RayHit { t: b.t, normal: CPoint::zeros(l.dim).concat(&b.normal) })
                    }
                    (Some(a), None) => Some(RayHit { t: a.t, normal: a.normal.concat(&CPoint::zeros(r.dim)) }),
                    (None, None) => None,
                }
            }
            Node::AffineImage(img) => {
                let h = img.inner.ray_hit(&img.pull_point(z), &img.pull_vector(u))?;
                let n = img.inverse.apply_adjoint(&h.normal).normalized()?;
                Some(RayHit { t: h.t, normal: n })
            }
            Node::Intersection(ms) => {
                let mut best: Option<RayHit> = None;
                for m in ms {
                    if let Some(h) = m.ray_hit(z, u) {
                        if best.as_ref().is_none_or(|b| h.t < b.t) {
                            best = Some(h);
                        }
                    }
                }
                best
            }
            Node::Graph(g) => graph_hit(g, z, u),
        }
    }

    /// Support function `sup { <a, z>_R : z in D }`; `None` when infinite or unknown.
    pub fn support(&self, a: &CPoint) -> Option<f64> {
        match &self.node {
            Node::Disk { center, radius } => Some((a[0].conj() * center).re + radius * a[0].norm()),
            Node::HalfPlane { point, normal } => {
                let an = a[0].norm();
                ((a[0] + normal * an).norm() <= 1e-12 * an.max(1e-300)).then(|| (a[0].conj() * point).re)
            }
            Node::Sector { vertex, alpha, beta } => {
                let ra = (a[0].conj() * c(alpha.cos(), alpha.sin())).re;
                let rb = (a[0].conj() * c(beta.cos(), beta.sin())).re;
                let tol = 1e-12 * a[0].norm();
                (ra <= tol && rb <= tol).then(|| (a[0].conj() * vertex).re)
            }
            Node::Ball { center, radius } => Some(a.rdot(center) + radius * a.norm()),
            Node::Polydisk { centers, radii } => {
                Some((0..self.dim).map(|j| (a[j].conj() * centers[j]).re + radii[j] * a[j].norm()).sum())
            }
            Node::Product(l, r) => {
                let (aa, ab) = self.split(a, l);
                let sa = if aa.is_zero() { Some(0.0) } else { l.support(&aa) };
                let sb = if ab.is_zero() { Some(0.0) } else { r.support(&ab) };
                Some(sa? + sb?)
            }
            Node::AffineImage(img) => Some(img.inner.support(&img.matrix.apply_adjoint(a))? + a.rdot(&img.offset)),
            Node::Intersection(ms) => ms.iter().filter_map(|m| m.support(a)).reduce(f64::min),
            Node::Graph(_) => None,
        }
    }

    /// Nearest point of the closure; `None` when no exact projection is available.
    pub fn project(&self, x: &CPoint) -> Option<CPoint> {
        match &self.node {
            Node::Disk { center, radius } => Some(CPoint::scalar(project_disk(x[0], *center, *radius))),
            Node::HalfPlane { point, normal } => {
                let s = ((x[0] - point) * normal.conj()).re;
                Some(if s >= 0.0 { x.clone() } else { CPoint::scalar(x[0] - normal * s) })
            }
            Node::Sector { vertex, alpha, beta } => {
                let y = x[0] - vertex;
                let (da, db) = sector_line_distances(y, *alpha, *beta);
                if da >= 0.0 && db >= 0.0 {
                    return Some(x.clone());
                }
                let ray = |ang: f64| {
                    let e = c(ang.cos(), ang.sin());
                    e * (y * e.conj()).re.max(0.0)
                };
                let (pa, pb) = (ray(*alpha), ray(*beta));
                let p = if (y - pa).norm() <= (y - pb).norm() { pa } else { pb };
                Some(CPoint::scalar(vertex + p))
            }
            Node::Ball { center, radius } => {
                let w = x - center;
                let n = w.norm();
                Some(if n <= *radius { x.clone() } else { center.offset(&w, radius / n) })
            }
            Node::Polydisk { centers, radii } => {
                Some(CPoint::raw((0..self.dim).map(|j| project_disk(x[j], centers[j], radii[j])).collect()))
            }
            Node::Product(l, r) => {
                let (a, b) = self.split(x, l);
                Some(l.project(&a)?.concat(&r.project(&b)?))
            }
            Node::AffineImage(img) => {
                img.unitary_scale?;
                Some(img.push_point(&img.inner.project(&img.pull_point(x))?))
            }
            Node::Intersection(ms) => {
                if ms.iter().all(|m| m.has_projection()) {
                    Some(dykstra(ms.iter().map(|m| move |p: &CPoint| m.project(p).expect("checked")).collect(), x))
                } else {
                    None
                }
            }
            Node::Graph(_) => None,
        }
    }

    pub(crate) fn has_projection(&self) -> bool {
        match &self.node {
            Node::Graph(_) => false,
            Node::Product(l, r) => l.has_projection() && r.has_projection(),
            Node::AffineImage(img) => img.unitary_scale.is_some() && img.inner.has_projection(),
            Node::Intersection(ms) => ms.iter().all(|m| m.has_projection()),
            _ => true,
        }
    }

    /// Whether the closed polydisk with the given centers and radii lies in the
    /// closure; `None` when the node has no exact containment test.
    pub fn contains_polydisk(&self, centers: &CPoint, radii: &[f64]) -> Option<bool> {
        match &self.node {
            Node::Disk { center, radius } => Some((centers[0] - center).norm() + radii[0] <= *radius),
            Node::HalfPlane { point, normal } => Some(((centers[0] - point) * normal.conj()).re >= radii[0]),
            Node::Sector { vertex, alpha, beta } => {
                let (da, db) = sector_line_distances(centers[0] - vertex, *alpha, *beta);
                Some(da >= radii[0] && db >= radii[0])
            }
            Node::Ball { center, radius } => {
                let s: f64 = (0..self.dim).map(|j| ((centers[j] - center[j]).norm() + radii[j]).powi(2)).sum();
                Some(s.sqrt() <= *radius)
            }
            Node::Polydisk { centers: cs, radii: rs } => {
                Some((0..self.dim).all(|j| (centers[j] - cs[j]).norm() + radii[j] <= rs[j]))
            }
            Node::Product(l, r) => {
                let (a, b) = self.split(centers, l);
                Some(l.contains_polydisk(&a, &radii[..l.dim])? && r.contains_polydisk(&b, &radii[l.dim..])?)
            }
            Node::AffineImage(img) => {
                let diag = img.matrix.as_diagonal()?;
                let pulled: Vec<f64> = radii.iter().zip(&diag).map(|(r, l)| r / l.norm()).collect();
                img.inner.contains_polydisk(&img.pull_point(centers), &pulled)
            }
            Node::Intersection(ms) => {
                let mut all = true;
                for m in ms {
                    all &= m.contains_polydisk(centers, radii)?;
                }
                Some(all)
            }
            Node::Graph(_) => None,
        }
    }

    // ---------------------------------------------------------------- slices

    /// The planar slice `{zeta : p + zeta v in D}` through an interior point.
    pub fn slice(&self, p: &CPoint, v: &CPoint) -> Result<PlanarSlice> {
        self.require_inside(p)?;
        v.check_dim(self.dim)?;
        if v.is_zero() {
            return Err(Error::ZeroDirection);
        }
        let planar = self.planar_slice_node(p, v);
        Ok(PlanarSlice::new(self.clone(), p.clone(), v.clone(), planar))
    }

    /// Structural description of a slice as a planar domain in zeta coordinates.
    pub(crate) fn planar_slice_node(&self, p: &CPoint, v: &CPoint) -> Option<ConvexDomain> {
        match &self.node {
            Node::Disk { center, radius } => Self::disk((center - p[0]) / v[0], radius / v[0].norm()).ok(),
            Node::HalfPlane { point, normal } => Self::half_plane((point - p[0]) / v[0], v[0].conj() * normal).ok(),
            Node::Sector { vertex, alpha, beta } => {
                let rot = v[0].arg();
                Self::sector((vertex - p[0]) / v[0], alpha - rot, beta - rot).ok()
            }
            Node::Ball { center, radius } => {
                let w = center - p;
                let vv = v.norm_sqr();
                let proj = v.hdot(&w);
                let r2 = (radius * radius - w.norm_sqr() + proj.norm_sqr() / vv) / vv;
                (r2 > 0.0).then(|| Self::disk(proj / vv, r2.sqrt()).ok()).flatten()
            }
            Node::Polydisk { centers, radii } => {
                let disks: Vec<ConvexDomain> = (0..self.dim)
                    .filter(|&j| v[j].norm() > 0.0)
                    .filter_map(|j| Self::disk((centers[j] - p[j]) / v[j], radii[j] / v[j].norm()).ok())
                    .collect();
                collapse(disks)
            }
            Node::Product(l, r) => {
                let (pa, pb) = self.split(p, l);
                let (va, vb) = self.split(v, l);
                let mut parts = Vec::new();
                if !va.is_zero() {
                    parts.push(l.planar_slice_node(&pa, &va)?);
                }
                if !vb.is_zero() {
                    parts.push(r.planar_slice_node(&pb, &vb)?);
                }
                collapse(parts)
            }
            Node::AffineImage(img) => img.inner.planar_slice_node(&img.pull_point(p), &img.pull_vector(v)),
            Node::Intersection(ms) => {
                let parts = ms.iter().map(|m| m.planar_slice_node(p, v)).collect::<Option<Vec<_>>>()?;
                collapse(parts)
            }
            Node::Graph(_) => None,
        }
    }

    // ---------------------------------------------------------------- numeric fallbacks

    /// Minimum ray length via the normal fixed-point iteration `u <- n(hit(u))`,
    /// started from the best of a direction grid.
    fn numeric_delta(&self, z: &CPoint) -> f64 {
        let k = 2 * self.dim;
        let mut best: Option<(f64, CPoint)> = None;
        for d in sphere_directions(k, 4 * k + 32) {
            let u = CPoint::from_real(&d);
            if let Some(h) = self.ray_hit(z, &u) {
                if best.as_ref().is_none_or(|b| h.t < b.0) {
                    best = Some((h.t, u));
                }
            }
        }
        let Some((mut bound, mut u)) = best else {
            return f64::INFINITY;
        };
        for _ in 0..FIXED_POINT_ITERS {
            let Some(h) = self.ray_hit(z, &u) else { break };
            bound = bound.min(h.t);
            let plane = u.scale(h.t).rdot(&h.normal);
            if plane > 0.0 {
                bound = bound.min(plane);
            }
            let change = (&h.normal - &u).norm();
            u = h.normal;
            if change < 1e-13 {
                break;
            }
        }
        bound
    }

    /// Planar analogue of [`Self::numeric_delta`] inside the slice through `z` along `v`.
    fn numeric_slice_radius(&self, z: &CPoint, v: &CPoint) -> f64 {
        let hit = |w: Complex64| -> Option<(f64, Complex64)> {
            let dir = v.cscale(w);
            let h = self.ray_hit(z, &dir)?;
            // outward normal of the planar slice at the hit point
            let n = c(h.normal.rdot(v), h.normal.rdot(&v.cscale(c(0.0, 1.0))));
            let nn = n.norm();
            Some((h.t, if nn > 0.0 { n / nn } else { w }))
        };
        let mut best: Option<(f64, Complex64)> = None;
        for i in 0..64 {
            let a = 2.0 * PI * i as f64 / 64.0;
            let w = c(a.cos(), a.sin());
            if let Some((t, _)) = hit(w) {
                if best.is_none_or(|b| t < b.0) {
                    best = Some((t, w));
                }
            }
        }
        let Some((mut bound, mut w)) = best else {
            return f64::INFINITY;
        };
        for _ in 0..FIXED_POINT_ITERS {
            let Some((t, n)) = hit(w) else { break };
            bound = bound.min(t);
            let plane = (w * t * n.conj()).re;
            if plane > 0.0 {
                bound = bound.min(plane);
            }
            let change = (n - w).norm();
            w = n;
            if change < 1e-13 {
                break;
            }
        }
        bound
    }
}

fn collapse(mut parts: Vec<ConvexDomain>) -> Option<ConvexDomain> {
    match parts.len() {
        0 => None,
        1 => parts.pop(),
        _ => {
            let flat: Vec<ConvexDomain> = parts
                .into_iter()
                .flat_map(|p| match p.node {
                    Node::Intersection(ms) => ms,
                    _ => vec![p],
                })
                .collect();
            ConvexDomain::intersection(flat).ok()
        }
    }
}

/// Signed distances to the two boundary lines of a sector at the origin.
fn sector_line_distances(y: Complex64, alpha: f64, beta: f64) -> (f64, f64) {
    let da = (y * c(alpha.cos(), -alpha.sin())).im;
    let db = -(y * c(beta.cos(), -beta.sin())).im;
    (da, db)
}

/// Inward unit normals of the two half-planes cutting out a sector.
fn sector_normals(alpha: f64, beta: f64) -> (Complex64, Complex64) {
    (c(0.0, 1.0) * c(alpha.cos(), alpha.sin()), c(0.0, -1.0) * c(beta.cos(), beta.sin()))
}

/// Exit of the ray `y + t u` from `{Re(y conj n) > 0}`; returns `(t, outward normal)`.
fn half_plane_hit(y: Complex64, u: Complex64, n: Complex64) -> Option<(f64, Complex64)> {
    let s = (y * n.conj()).re;
    let rate = (u * n.conj()).re;
    (rate < 0.0).then(|| ((s / -rate).max(0.0), -n))
}

fn min_hit(a: Option<(f64, Complex64)>, b: Option<(f64, Complex64)>) -> Option<(f64, Complex64)> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if x.0 <= y.0 { x } else { y }),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Exit of `w + t u` from the ball `|.| < radius` centered at the origin.
fn sphere_hit(w: &CPoint, u: &CPoint, radius: f64) -> Option<RayHit> {
    let a = u.norm_sqr();
    if a == 0.0 {
        return None;
    }
    let b = w.rdot(u);
    let cterm = (w.norm() - radius) * (w.norm() + radius);
    let disc = (b * b - a * cterm).max(0.0);
    // stable root of a t^2 + 2 b t + c = 0 with c < 0
    let t = if b <= 0.0 { (-b + disc.sqrt()) / a } else { -cterm / (b + disc.sqrt()) };
    let x = w.offset(u, t);
    let n = x.normalized().unwrap_or_else(|| u.normalized().expect("nonzero"));
    Some(RayHit { t, normal: n })
}

fn graph_hit(g: &Graph, z: &CPoint, u: &CPoint) -> Option<RayHit> {
    let f = &g.function;
    let un = u.norm();
    if un == 0.0 {
        return None;
    }
    let mut lo = 0.0;
    let mut hi = 1e-6 * (1.0 + z.norm()) / un;
    loop {
        if f.value(&z.offset(u, hi)) >= 0.0 {
            break;
        }
        lo = hi;
        hi *= 2.0;
        if hi * un > RAY_CAP {
            return None;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f.value(&z.offset(u, mid)) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    let normal = f.gradient(&z.offset(u, t)).normalized().or_else(|| u.normalized())?;
    Some(RayHit { t, normal })
}

fn project_disk(x: Complex64, center: Complex64, radius: f64) -> Complex64 {
    let w = x - center;
    let n = w.norm();
    if n <= radius {
        x
    } else {
        center + w * (radius / n)
    }
}

/// Dykstra's alternating projections onto an intersection of closed convex sets.
pub(crate) fn dykstra<F: Fn(&CPoint) -> CPoint>(projs: Vec<F>, x: &CPoint) -> CPoint {
    let m = projs.len();
    if m == 1 {
        return projs[0](x);
    }
    let mut y = x.clone();
    let mut incr: Vec<CPoint> = vec![CPoint::zeros(x.dim()); m];
    for _ in 0..20_000 {
        let prev = y.clone();
        for (i, p) in projs.iter().enumerate() {
            let shifted = &y + &incr[i];
            let next = p(&shifted);
            incr[i] = &shifted - &next;
            y = next;
        }
        if (&y - &prev).norm() <= 1e-15 * (1.0 + y.norm()) {
            break;
        }
    }
    y
}
