mod common;

use common::*;
use kcat0_core::metric::{curve_length, DiscretePath};
use kcat0_core::numeric::GaussLegendre;
use kcat0_core::planar::{chart, planar_distance, planar_geodesic, planar_metric, Mobius};
use kcat0_core::{c, Complex64, ConvexDomain};
use proptest::prelude::*;

fn planar() -> impl Strategy<Value = (ConvexDomain, Complex64, Complex64)> {
    prop_oneof![
        (disk_point(0.95), disk_point(0.95)).prop_map(|(z, w)| (ConvexDomain::unit_disk(), z, w)),
        (upper_point(), upper_point()).prop_map(|(z, w)| (ConvexDomain::upper_half_plane(), z, w)),
        (quarter_point(), quarter_point()).prop_map(|(z, w)| (quarter(), z, w)),
        (disk_point(0.95), disk_point(0.95)).prop_map(|(z, w)| {
            (ConvexDomain::disk(c(1.0, -2.0), 3.0).unwrap(), c(1.0, -2.0) + z * 3.0, c(1.0, -2.0) + w * 3.0)
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn chart_round_trip((d, z, _) in planar()) {
        let ch = chart(&d).unwrap();
        let back = ch.inverse(ch.forward(z));
        prop_assert!((back - z).norm() <= 1e-10 * (1.0 + z.norm()));
    }

    #[test]
    fn geodesics_are_additive((d, z, w) in planar(), s in 0.0..1.0_f64, t in 0.0..1.0_f64, u in 0.0..1.0_f64) {
        let mut p = [s, t, u];
        p.sort_by(f64::total_cmp);
        let g = |t: f64| planar_geodesic(&d, z, w, t).unwrap();
        let k = |a: Complex64, b: Complex64| planar_distance(&d, a, b).unwrap();
        let (a, b, e) = (g(p[0]), g(p[1]), g(p[2]));
        prop_assert!((k(a, b) + k(b, e) - k(a, e)).abs() <= 1e-9);
    }

    #[test]
    fn automorphisms_leave_distances_alone((d, z, w) in planar(), a in disk_point(0.9), phi in 0.0..std::f64::consts::TAU) {
        let plain = chart(&d).unwrap();
        let moved = plain.with_automorphism(Mobius::new(a, phi).unwrap());
        prop_assert!((plain.distance(z, w) - moved.distance(z, w)).abs() <= 1e-10 * (1.0 + plain.distance(z, w)));
    }

    #[test]
    fn geodesic_length_matches_distance((d, z, w) in planar()) {
        prop_assume!((z - w).norm() > 1e-6);
        let g = |t: f64| planar_geodesic(&d, z, w, t).unwrap();
        let h = 1e-6;
        let speed = |t: f64| {
            let (a, b) = ((t - h).max(0.0), (t + h).min(1.0));
            let v = (g(b) - g(a)) / (b - a);
            planar_metric(&d, g(t), v).unwrap()
        };
        let gl = GaussLegendre::new(8);
        let len: f64 = (0..16).map(|i| gl.integrate(i as f64 / 16.0, (i + 1) as f64 / 16.0, speed)).sum();
        let k = planar_distance(&d, z, w).unwrap();
        prop_assert!((len - k).abs() <= 1e-7 * (1.0 + k), "{len} vs {k}");
    }

    #[test]
    fn polygon_through_geodesic_is_slightly_longer((d, z, w) in planar()) {
        let nodes = (0..=64).map(|i| one(planar_geodesic(&d, z, w, i as f64 / 64.0).unwrap())).collect();
        let len = curve_length(&d, &DiscretePath::new(nodes).unwrap()).unwrap();
        let k = planar_distance(&d, z, w).unwrap();
        prop_assert!(len.hi >= k - 1e-9 && len.hi <= k * (1.0 + 1e-3) + 1e-9, "{} vs {k}", len.hi);
    }
}
