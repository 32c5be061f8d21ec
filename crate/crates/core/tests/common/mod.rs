#![allow(dead_code)]

use std::f64::consts::PI;

use kcat0_core::{c, CPoint, Complex64, ConvexDomain};
use proptest::prelude::*;

pub fn disk_point(max_r: f64) -> impl Strategy<Value = Complex64> {
    (0.0..max_r, 0.0..2.0 * PI).prop_map(|(r, t)| c(r * t.cos(), r * t.sin()))
}

pub fn upper_point() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0, 0.05..4.0).prop_map(|(x, y)| c(x, y))
}

pub fn quarter_point() -> impl Strategy<Value = Complex64> {
    (0.05..3.0, 0.05..PI / 2.0 - 0.05).prop_map(|(r, t)| c(r * t.cos(), r * t.sin()))
}

/// Point of the open unit ball of C^d with norm below `max_r`.
pub fn ball_point(d: usize, max_r: f64) -> impl Strategy<Value = CPoint> {
    (proptest::collection::vec(-1.0..1.0_f64, 2 * d), 0.0..max_r).prop_filter_map("zero direction", |(v, r)| {
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        (n > 1e-6).then(|| CPoint::from_real(&v.iter().map(|x| x * r / n).collect::<Vec<_>>()))
    })
}

pub fn unit_vector(d: usize) -> impl Strategy<Value = CPoint> {
    ball_point(d, 1.0).prop_filter_map("short", |p| p.normalized())
}

pub fn one(z: Complex64) -> CPoint {
    CPoint::scalar(z)
}

pub fn two(a: Complex64, b: Complex64) -> CPoint {
    CPoint::from_slice(&[a, b])
}

pub fn quarter() -> ConvexDomain {
    ConvexDomain::sector(c(0.0, 0.0), 0.0, PI / 2.0).unwrap()
}

pub fn upper_x_disk() -> ConvexDomain {
    ConvexDomain::product(ConvexDomain::upper_half_plane(), ConvexDomain::unit_disk())
}

pub fn lens() -> ConvexDomain {
    ConvexDomain::two_ball_intersection()
}

/// Catalog domains in C^2 paired with a point sampler.
pub fn catalog2() -> impl Strategy<Value = (ConvexDomain, CPoint, CPoint)> {
    prop_oneof![
        (ball_point(2, 0.95), ball_point(2, 0.95)).prop_map(|(x, y)| (ConvexDomain::unit_ball(2), x, y)),
        (disk_point(0.95), disk_point(0.95), disk_point(0.95), disk_point(0.95)).prop_map(|(a, b, p, q)| (
            ConvexDomain::unit_polydisk(2),
            two(a, b),
            two(p, q)
        )),
        (upper_point(), disk_point(0.95), upper_point(), disk_point(0.95)).prop_map(|(a, b, p, q)| (
            upper_x_disk(),
            two(a, b),
            two(p, q)
        )),
    ]
}
