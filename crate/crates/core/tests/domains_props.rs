mod common;

use common::*;
use kcat0_core::{c, CMatrix, CPoint, ConvexDomain};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn delta_dir_dominates_delta((d, z, _) in catalog2(), v in unit_vector(2)) {
        let a = d.delta(&z).unwrap();
        let b = d.delta_dir(&z, &v).unwrap();
        prop_assert!(b >= a - 1e-12, "delta_dir {b} < delta {a}");
    }

    #[test]
    fn delta_is_lipschitz((d, z, w) in catalog2()) {
        let gap = (d.delta(&z).unwrap() - d.delta(&w).unwrap()).abs();
        prop_assert!(gap <= z.dist(&w) + 1e-12);
    }

    #[test]
    fn lens_delta_is_lipschitz(a in ball_point(2, 0.29), b in ball_point(2, 0.29)) {
        let d = lens();
        let center = CPoint::real(&[0.5, 0.5]);
        let (z, w) = (center.offset(&a, 1.0), center.offset(&b, 1.0));
        let gap = (d.delta(&z).unwrap() - d.delta(&w).unwrap()).abs();
        prop_assert!(gap <= z.dist(&w) + 1e-12);
    }

    #[test]
    fn unitary_images_preserve_delta(z in ball_point(2, 0.9), phi in 0.0..std::f64::consts::TAU, t in 0.0..1.5_f64, b in ball_point(2, 3.0)) {
        let (ct, st) = (t.cos(), t.sin());
        let e = c(phi.cos(), phi.sin());
        let a = CMatrix::from_rows(&[vec![e * ct, c(-st, 0.0)], vec![e * st, c(ct, 0.0)]]).unwrap();
        let inner = ConvexDomain::product(ConvexDomain::unit_disk(), ConvexDomain::upper_half_plane());
        let z = CPoint::from_slice(&[z[0] * 0.9, c(z[1].re, 0.2 + z[1].im.abs())]);
        let img = ConvexDomain::affine_image_node(a.clone(), b.clone(), inner.clone()).unwrap();
        let w = a.apply(&z).offset(&b, 1.0);
        prop_assert!((img.delta(&w).unwrap() - inner.delta(&z).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn intersection_is_min_over_members(z in ball_point(2, 1.5), v in unit_vector(2)) {
        let b1 = ConvexDomain::ball(CPoint::real(&[1.0, 0.0]), 1.0).unwrap();
        let b2 = ConvexDomain::ball(CPoint::real(&[0.0, 1.0]), 1.0).unwrap();
        let d = ConvexDomain::intersection(vec![b1.clone(), b2.clone()]).unwrap();
        if d.contains(&z).unwrap() {
            prop_assert!(b1.contains(&z).unwrap() && b2.contains(&z).unwrap());
            let m = b1.delta(&z).unwrap().min(b2.delta(&z).unwrap());
            prop_assert!((d.delta(&z).unwrap() - m).abs() <= 1e-12);
            let md = b1.delta_dir(&z, &v).unwrap().min(b2.delta_dir(&z, &v).unwrap());
            prop_assert!((d.delta_dir(&z, &v).unwrap() - md).abs() <= 1e-12);
        }
    }
}

#[test]
fn intersection_delta_matches_boundary_sampling() {
    let d = lens();
    let z = CPoint::real(&[0.5, 0.5]);
    // Brute-force distance to the boundary of the lens.
    let mut best = f64::INFINITY;
    for v in kcat0_core::numeric::sphere_directions(4, 20000) {
        let u = CPoint::from_real(&v);
        if let Some(h) = d.ray_hit(&z, &u) {
            best = best.min(h.t);
        }
    }
    let delta = d.delta(&z).unwrap();
    assert!(delta <= best + 1e-12 && best - delta < 5e-3, "{delta} vs {best}");
}
