mod common;

use common::*;
use kcat0_core::metric::{self, projection_lower_bound, slice_upper_bound, DistanceOptions};
use kcat0_core::planar::planar_distance;
use kcat0_core::{c, CMatrix, CPoint, ConvexDomain};
use proptest::prelude::*;

fn k(d: &ConvexDomain, x: &CPoint, y: &CPoint) -> f64 {
    metric::distance(d, x, y).unwrap().mid()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn metric_axioms((d, x, y) in catalog2(), t in 0.0..1.0_f64) {
        // Third point on the straight segment stays inside by convexity.
        let z = x.lerp(&y, t);
        prop_assert_eq!(k(&d, &x, &y).to_bits(), k(&d, &y, &x).to_bits());
        prop_assert_eq!(k(&d, &x, &x), 0.0);
        prop_assert!(k(&d, &x, &y) <= k(&d, &x, &z) + k(&d, &z, &y) + 1e-9);
        prop_assert!(k(&d, &x, &y) >= 0.0);
    }

    #[test]
    fn projections_contract(a in upper_point(), b in disk_point(0.95), p in upper_point(), q in disk_point(0.95)) {
        let d = upper_x_disk();
        let (x, y) = (two(a, b), two(p, q));
        let kd = k(&d, &x, &y);
        prop_assert!(planar_distance(&ConvexDomain::upper_half_plane(), a, p).unwrap() <= kd + 1e-9);
        prop_assert!(planar_distance(&ConvexDomain::unit_disk(), b, q).unwrap() <= kd + 1e-9);
    }

    #[test]
    fn sandwich_brackets_exact_values((d, x, y) in catalog2()) {
        prop_assume!(x != y);
        let exact = k(&d, &x, &y);
        let lo = projection_lower_bound(&d, &x, &y).unwrap();
        prop_assert!(lo <= exact + 1e-9, "lo {lo} > {exact}");
        if let Some(hi) = slice_upper_bound(&d, &x, &y).unwrap() {
            prop_assert!(exact <= hi + 1e-9, "hi {hi} < {exact}");
        }
        let fast = metric::distance_with(&d, &x, &y, &DistanceOptions::fast()).unwrap();
        prop_assert!(fast.lo <= fast.hi);
    }

    #[test]
    fn affine_images_are_isometric((d, x, y) in catalog2(), s in 0.2..3.0_f64, phi in 0.0..std::f64::consts::TAU, b in ball_point(2, 2.0)) {
        let a = CMatrix::from_rows(&[
            vec![c(s * phi.cos(), s * phi.sin()), c(0.3, -0.1)],
            vec![c(0.0, 0.0), c(1.0 / s, 0.0)],
        ])
        .unwrap();
        let img = d.affine_image(&a, &b).unwrap();
        let (ax, ay) = (a.apply(&x).offset(&b, 1.0), a.apply(&y).offset(&b, 1.0));
        let (k0, k1) = (k(&d, &x, &y), k(&img, &ax, &ay));
        prop_assert!((k0 - k1).abs() <= 1e-9 * (1.0 + k0), "{k0} vs {k1}");
    }

    #[test]
    fn slices_bound_from_above(x in ball_point(2, 0.95), y in ball_point(2, 0.95)) {
        let d = ConvexDomain::unit_ball(2);
        prop_assume!(x != y);
        let hi = slice_upper_bound(&d, &x, &y).unwrap().unwrap();
        prop_assert!(k(&d, &x, &y) <= hi + 1e-9);
    }

    #[test]
    fn quarter_plane_embeds_isometrically(z in quarter_point(), w in quarter_point()) {
        let d = ConvexDomain::product(quarter(), ConvexDomain::unit_disk());
        let (a, b) = (two(z, c(0.0, 0.0)), two(w, c(0.0, 0.0)));
        let exact = planar_distance(&quarter(), z, w).unwrap();
        let lo = projection_lower_bound(&d, &a, &b).unwrap();
        prop_assert!((lo - exact).abs() <= 1e-9);
        if let Some(hi) = slice_upper_bound(&d, &a, &b).unwrap() {
            prop_assert!((hi - exact).abs() <= 1e-9);
        }
        prop_assert!((k(&d, &a, &b) - exact).abs() <= 1e-9);
    }

    #[test]
    fn sandwich_on_lens_is_ordered(a in ball_point(2, 0.28), b in ball_point(2, 0.28)) {
        let d = lens();
        let center = CPoint::real(&[0.5, 0.5]);
        let (x, y) = (center.offset(&a, 1.0), center.offset(&b, 1.0));
        let i = metric::distance_with(&d, &x, &y, &DistanceOptions::fast()).unwrap();
        prop_assert!(i.lo <= i.hi && i.hi.is_finite());
    }
}
