use num_complex::Complex64;

use super::ConvexDomain;
use crate::point::CPoint;

/// Planar slice `{zeta in C : base + zeta * direction in D}`.
#[derive(Clone, Debug)]
pub struct PlanarSlice {
    parent: ConvexDomain,
    base: CPoint,
    direction: CPoint,
    planar: Option<ConvexDomain>,
}

impl PlanarSlice {
    pub(crate) fn new(parent: ConvexDomain, base: CPoint, direction: CPoint, planar: Option<ConvexDomain>) -> Self {
        Self { parent, base, direction, planar }
    }

    pub fn base(&self) -> &CPoint {
        &self.base
    }

    pub fn direction(&self) -> &CPoint {
        &self.direction
    }

    /// The slice as a disk, half-plane or sector, when it is one.
    pub fn exact_chart(&self) -> Option<&ConvexDomain> {
        self.planar.as_ref().filter(|p| p.is_planar_catalog())
    }

    /// The slice as a one-dimensional domain tree, when known structurally.
    pub fn structural(&self) -> Option<&ConvexDomain> {
        self.planar.as_ref()
    }

    pub fn point_at(&self, zeta: Complex64) -> CPoint {
        self.base.coffset(&self.direction, zeta)
    }

    pub fn contains(&self, zeta: Complex64) -> bool {
        match &self.planar {
            Some(p) => p.inside(&CPoint::scalar(zeta)),
            None => self.parent.inside(&self.point_at(zeta)),
        }
    }

    /// Boundary distance inside the slice, in zeta units.
    pub fn delta(&self, zeta: Complex64) -> Option<f64> {
        if !self.contains(zeta) {
            return None;
        }
        Some(match &self.planar {
            Some(p) => p.delta_unchecked(&CPoint::scalar(zeta)),
            None => self.parent.slice_radius(&self.point_at(zeta), &self.direction),
        })
    }
}
