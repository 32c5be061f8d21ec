//! Intersection of two unit balls tangent to `Re z1 = 0` and `Re z2 = 0`
//! at the origin: 2-convex, with dilations converging to a product of
//! half-planes, which carries an explicit midpoint violation.

use alloc::vec;
use alloc::vec::Vec;

use super::{hausdorff_with, HausdorffReading};
use crate::cat0::{midpoint_defect_at, product_certificate, Cat0Certificate, APPROX_TOL};
use crate::convexity::{local_m_convex_check_with, MConvexConfig, MConvexityReport};
use crate::domains::ConvexDomain;
use crate::error::Result;
use crate::metric::DistanceOptions;
use crate::point::CPoint;

#[derive(Clone, Debug)]
pub struct Example36Config {
    pub seed: u64,
    pub samples: usize,
    pub dilations: Vec<u64>,
    pub window: f64,
    pub directions: usize,
    /// Dilation factor used for the midpoint defect inside `n Omega`.
    pub large_n: f64,
}

impl Default for Example36Config {
    fn default() -> Self {
        Self { seed: 7, samples: 100, dilations: vec![1, 10, 100], window: 1.0, directions: 4096, large_n: 1e6 }
    }
}

#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HausdorffStep {
    pub n: u64,
    pub reading: HausdorffReading,
}

#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Example36Report {
    pub mconvex: MConvexityReport,
    pub hausdorff: Vec<HausdorffStep>,
    pub hausdorff_decreasing: bool,
    pub product: Cat0Certificate,
    pub large_n: f64,
    pub scaled: Cat0Certificate,
    /// `(ln 2 / 2)^2`.
    pub target_defect: f64,
}

impl ConvexDomain {
    /// `B((1,0), 1) ∩ B((0,1), 1)` in C^2.
    pub fn two_ball_intersection() -> Self {
        let b1 = ConvexDomain::ball(CPoint::real(&[1.0, 0.0]), 1.0).expect("valid ball");
        let b2 = ConvexDomain::ball(CPoint::real(&[0.0, 1.0]), 1.0).expect("valid ball");
        ConvexDomain::intersection(vec![b1, b2]).expect("same dimension")
    }

    /// `{Re z1 > 0} x {Re z2 > 0}`.
    pub fn right_quadrant_product() -> Self {
        ConvexDomain::product(ConvexDomain::right_half_plane(), ConvexDomain::right_half_plane())
    }
}

/// m-convexity check, dilation limit, product certificate and a large-n
/// midpoint defect, bundled into one report.
pub fn example36(cfg: &Example36Config) -> Result<Example36Report> {
    let omega = ConvexDomain::two_ball_intersection();
    let limit = ConvexDomain::right_quadrant_product();

    let mut mc = MConvexConfig::new(2.0, 2, cfg.samples, cfg.seed);
    mc.probes.push(CPoint::zeros(2));
    let mconvex = local_m_convex_check_with(&omega, &mc)?;

    let mut hausdorff = Vec::new();
    for &n in &cfg.dilations {
        let scaled = omega.scaled(n as f64)?;
        hausdorff.push(HausdorffStep { n, reading: hausdorff_with(&scaled, &limit, cfg.window, cfg.directions)? });
    }
    let hausdorff_decreasing = hausdorff.windows(2).all(|w| w[1].reading.value < w[0].reading.value);

    let rhp = ConvexDomain::right_half_plane();
    let product =
        product_certificate(&rhp, &rhp, &CPoint::real(&[1.0]), &CPoint::real(&[4.0]), &CPoint::real(&[1.0]), cfg.seed)?;

    let big = omega.scaled(cfg.large_n)?;
    let scaled = midpoint_defect_at(
        &big,
        &product.x,
        &product.y,
        &product.z,
        &product.m,
        APPROX_TOL,
        &DistanceOptions::default(),
    )?;
    let half_ln2 = 0.5 * core::f64::consts::LN_2;
    Ok(Example36Report {
        mconvex,
        hausdorff,
        hausdorff_decreasing,
        product,
        large_n: cfg.large_n,
        scaled,
        target_defect: half_ln2 * half_ln2,
    })
}
