mod common;

use std::sync::Arc;

use common::*;
use kcat0_core::limits::{self, convergence_check, hausdorff_with, FrankelConfig};
use kcat0_core::metric::DistanceOptions;
use kcat0_core::{c, Complex64, ConvexDomain};
use proptest::prelude::*;

const DIRS: usize = 256;

fn disk_strategy() -> impl Strategy<Value = ConvexDomain> {
    (disk_point(0.3), 0.5..1.5_f64).prop_map(|(z, r)| ConvexDomain::disk(z, r).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hausdorff_is_a_sampled_metric(a in disk_strategy(), b in disk_strategy(), e in disk_strategy()) {
        let ab = hausdorff_with(&a, &b, 1.0, DIRS).unwrap();
        let ba = hausdorff_with(&b, &a, 1.0, DIRS).unwrap();
        prop_assert_eq!(ab.value.to_bits(), ba.value.to_bits());
        prop_assert!(hausdorff_with(&a, &a, 1.0, DIRS).unwrap().value <= 1e-12);
        let ae = hausdorff_with(&a, &e, 1.0, DIRS).unwrap();
        let eb = hausdorff_with(&e, &b, 1.0, DIRS).unwrap();
        let mesh = ab.mesh.max(ae.mesh).max(eb.mesh);
        prop_assert!(ab.value <= ae.value + eb.value + 2.0 * mesh);
    }

    #[test]
    fn nested_windows_have_no_excess(z in disk_point(0.2), r in 0.3..0.7_f64, grow in 0.05..1.0_f64) {
        let small = ConvexDomain::disk(z, r).unwrap();
        let big = ConvexDomain::disk(z, r + grow).unwrap();
        let h = hausdorff_with(&small, &big, 1.5, DIRS).unwrap();
        prop_assert!(h.excess_ab <= 1e-12, "{}", h.excess_ab);
    }
}

#[test]
fn dilated_disk_gaps_decrease() {
    let ns = [2_u64, 5, 10, 100, 1000];
    let seq: Vec<_> = ns.iter().map(|&n| (n, ConvexDomain::disk(c(0.0, 0.0), 1.0 + 1.0 / n as f64).unwrap())).collect();
    let pairs = [(one(c(0.0, 0.0)), one(c(0.5, 0.0))), (one(c(0.2, -0.3)), one(c(-0.6, 0.1)))];
    let t = convergence_check(&seq, &ConvexDomain::unit_disk(), &pairs, &DistanceOptions::default()).unwrap();
    assert!(t.decreasing);
    for w in t.max_gap.windows(2) {
        assert!(w[1].1 < w[0].1);
    }
    for row in &t.rows {
        let s = 1.0 + 1.0 / row.n as f64;
        let (x, y) = &pairs[row.pair_index];
        let want = (x[0] / s - y[0] / s).norm() / (Complex64::new(1.0, 0.0) - (y[0] / s).conj() * (x[0] / s)).norm();
        assert!((row.k_n.mid() - want.atanh()).abs() <= 1e-12);
    }
}

#[test]
fn graph_blowup_bound_holds_on_flat_profile() {
    let f: limits::GraphData = Arc::new(|x: f64, z: Complex64| {
        let m = z.norm();
        x * x + if m > 0.0 { (-1.0 / m).exp() } else { 0.0 }
    });
    let cfg = FrankelConfig { ns: vec![2, 4, 6], window: None, ..FrankelConfig::default() };
    let rep = limits::frankel_2b(f, &cfg).unwrap();
    for s in &rep.steps {
        assert!(s.max_ratio <= 1.0 + 1e-9 || s.flagged, "n = {}: {}", s.n, s.max_ratio);
    }
    let radii: Vec<f64> = rep.steps.iter().map(|s| s.z_n.norm()).collect();
    assert!(radii.windows(2).all(|w| w[1] < w[0]), "{radii:?}");
}

#[test]
fn cone_times_disk_is_a_fixed_point() {
    let d = upper_x_disk();
    let seq = limits::scaling_lemma32(&d).unwrap();
    for n in [1, 10, 1000] {
        let h = hausdorff_with(&seq.domain(n).unwrap(), &seq.claimed_limit, 1.0, DIRS).unwrap();
        assert!(h.value <= 2.0 * h.mesh, "n = {n}: {} vs mesh {}", h.value, h.mesh);
    }
}
