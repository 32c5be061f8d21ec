//! Fast invariant checks on builtin domains.

use kcat0_core::cat0::{self, Verdict, EXACT_TOL};
use kcat0_core::metric;
use kcat0_core::numeric::{ball_point, rng};
use kcat0_core::{c, CPoint, ConvexDomain};
use serde::Serialize;

use crate::complex::{format_point, parse_point};
use crate::spec::{DomainSpec, BUILTINS};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &str, pass: bool, detail: String) -> Check {
    Check { name: name.to_string(), pass, detail }
}

pub fn run(seed: u64) -> Vec<Check> {
    let mut out = Vec::new();

    let disk = ConvexDomain::unit_disk();
    let k = metric::distance(&disk, &CPoint::new(vec![c(0.0, 0.0)]).unwrap(), &CPoint::new(vec![c(0.5, 0.0)]).unwrap());
    let want = 0.5_f64.atanh();
    out.push(match k {
        Ok(k) => check("disk-closed-form", (k.mid() - want).abs() < 1e-12, format!("{} vs {want}", k.mid())),
        Err(e) => check("disk-closed-form", false, e.to_string()),
    });

    let mut g = rng(seed);
    for name in ["ball", "polydisk", "halfplane-x-disk", "two-ball"] {
        let d = crate::spec::builtin(name).and_then(|s| s.build().ok()).expect("builtin");
        let center = cat0::base_point(&d).unwrap_or_else(|_| CPoint::zeros(d.dim()));
        let mut pts = Vec::new();
        for _ in 0..600 {
            let p = center.offset(&CPoint::from_real(&ball_point(&mut g, 2 * d.dim(), 1.0)), 1.0);
            if d.inside(&p) {
                pts.push(p);
                if pts.len() == 3 {
                    break;
                }
            }
        }
        if pts.len() < 3 {
            out.push(check(&format!("triangle-{name}"), false, "no interior samples".into()));
            continue;
        }
        let pair = |i: usize, j: usize| metric::distance(&d, &pts[i], &pts[j]);
        let res =
            (|| -> kcat0_core::Result<(f64, f64, f64)> { Ok((pair(0, 1)?.lo, pair(0, 2)?.hi, pair(2, 1)?.hi)) })();
        out.push(match res {
            Ok((ab, ac, cb)) => check(
                &format!("triangle-{name}"),
                ab <= ac + cb + 1e-9,
                format!("lo(ab)={ab:.6} hi(ac)+hi(cb)={:.6}", ac + cb),
            ),
            Err(e) => check(&format!("triangle-{name}"), false, e.to_string()),
        });
        let v = CPoint::from_real(&ball_point(&mut g, 2 * d.dim(), 1.0));
        let res = d.delta(&pts[0]).and_then(|a| Ok((a, d.delta_dir(&pts[0], &v)?)));
        out.push(match res {
            Ok((a, b)) => check(&format!("delta-dir-{name}"), b >= a - 1e-12, format!("delta={a:.6} delta_dir={b:.6}")),
            Err(e) => check(&format!("delta-dir-{name}"), false, e.to_string()),
        });
    }

    let d = crate::spec::builtin("halfplane-x-disk").and_then(|s| s.build().ok()).expect("builtin");
    let (x, y, z) = (parse_point("i,0").unwrap(), parse_point("4i,0").unwrap(), parse_point("2i,1/3").unwrap());
    out.push(match cat0::midpoint_defect(&d, &x, &y, &z, EXACT_TOL) {
        Ok(cert) => check(
            "product-violation",
            cert.verdict == Verdict::ViolationCertified && cert.defect > 0.0,
            format!("defect={:.7} at z={}", cert.defect, format_point(&z)),
        ),
        Err(e) => check("product-violation", false, e.to_string()),
    });

    let mut bad = Vec::new();
    for (name, _) in BUILTINS {
        let spec = crate::spec::builtin(name).expect("listed");
        let ok = DomainSpec::parse(&spec.to_json()).map(|s| s == spec).unwrap_or(false);
        if !ok {
            bad.push(*name);
        }
    }
    out.push(check(
        "spec-round-trip",
        bad.is_empty(),
        if bad.is_empty() { "all builtins".into() } else { bad.join(",") },
    ));
    out
}
