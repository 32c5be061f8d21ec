//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use kcat0_core::cat0::{self, Verdict, APPROX_TOL, EXACT_TOL};
use kcat0_core::convexity::{self, Order};
use kcat0_core::domains::Polynomial;
use kcat0_core::limits::{self, convergence_check, Example36Config};
use kcat0_core::metric::{self, DistanceOptions};
use kcat0_core::numeric::{ball_point, rng};
use kcat0_core::{c, CPoint, Complex64, ConvexDomain, Node};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed <= limit {
        Ok(())
    } else {
        Err(format!("runtime {elapsed:.2?} exceeds {limit:?}"))
    }
}

// Closed forms under k(0; v) = |v| on the disk.

fn k_disk(z: Complex64, w: Complex64) -> f64 {
    ((z - w) / (Complex64::new(1.0, 0.0) - w.conj() * z)).norm().atanh()
}

fn k_upper(z: Complex64, w: Complex64) -> f64 {
    ((z - w) / (z - w.conj())).norm().atanh()
}

fn k_quarter(z: Complex64, w: Complex64) -> f64 {
    k_upper(z * z, w * w)
}

fn k_ball(z: &[Complex64], w: &[Complex64]) -> f64 {
    let dot: Complex64 = z.iter().zip(w).map(|(a, b)| a * b.conj()).sum();
    let nz: f64 = z.iter().map(|a| a.norm_sqr()).sum();
    let nw: f64 = w.iter().map(|a| a.norm_sqr()).sum();
    let s = 1.0 - (1.0 - nz) * (1.0 - nw) / (Complex64::new(1.0, 0.0) - dot).norm_sqr();
    s.max(0.0).sqrt().atanh()
}

fn disk_pt(g: &mut rand_chacha::ChaCha8Rng, r: f64) -> Complex64 {
    let v = ball_point(g, 2, r);
    c(v[0], v[1])
}

fn upper_pt(g: &mut rand_chacha::ChaCha8Rng) -> Complex64 {
    // Inverse Cayley image of a disk point.
    let u = disk_pt(g, 0.95);
    Complex64::new(0.0, 1.0) * (Complex64::new(1.0, 0.0) + u) / (Complex64::new(1.0, 0.0) - u)
}

fn upper_half() -> ConvexDomain {
    ConvexDomain::upper_half_plane()
}

fn quarter() -> ConvexDomain {
    ConvexDomain::sector(c(0.0, 0.0), 0.0, std::f64::consts::FRAC_PI_2).unwrap()
}

fn one(z: Complex64) -> CPoint {
    CPoint::scalar(z)
}

fn two(a: Complex64, b: Complex64) -> CPoint {
    CPoint::from_slice(&[a, b])
}

/// Path-optimizer distance, taking the max over product factors.
fn path_distance(d: &ConvexDomain, a: &CPoint, b: &CPoint) -> Result<f64, String> {
    if let Node::Product(l, r) = d.node() {
        let k = l.dim();
        let left = path_distance(l, &a.slice(0, k), &b.slice(0, k))?;
        let right = path_distance(r, &a.slice(k, r.dim()), &b.slice(k, r.dim()))?;
        return Ok(left.max(right));
    }
    let g = metric::geodesic_approx(d, a, b, DistanceOptions::default().path_nodes).map_err(|e| e.to_string())?;
    Ok(g.length.hi)
}

fn criterion1() -> Outcome {
    let t0 = Instant::now();
    let h = upper_half();
    let disk = ConvexDomain::unit_disk();
    let d = ConvexDomain::product(h.clone(), disk.clone());
    let want = (0.5 * 2.0_f64.ln()).powi(2);
    let cert = cat0::product_certificate(&h, &disk, &one(c(0.0, 1.0)), &one(c(0.0, 4.0)), &one(c(0.0, 0.0)), 1)
        .map_err(|e| e.to_string())?;
    let x = two(c(0.0, 1.0), c(0.0, 0.0));
    let y = two(c(0.0, 4.0), c(0.0, 0.0));
    let z = two(c(0.0, 2.0), c(1.0 / 3.0, 0.0));
    let direct = cat0::midpoint_defect(&d, &x, &y, &z, EXACT_TOL).map_err(|e| e.to_string())?;
    // Path optimizer against the closed forms. On the product the engine
    // combines factor paths by max; the length of a single path in the
    // product is shown alongside.
    let mut worst: f64 = 0.0;
    let mut whole: f64 = 0.0;
    let cases = [
        (d.clone(), x.clone(), y.clone(), 2.0_f64.ln()),
        (
            d.clone(),
            x.clone(),
            z.clone(),
            k_upper(c(0.0, 1.0), c(0.0, 2.0)).max(k_disk(c(0.0, 0.0), c(1.0 / 3.0, 0.0))),
        ),
        (disk.clone(), one(c(0.0, 0.0)), one(c(0.5, 0.0)), 0.5_f64.atanh()),
        (h.clone(), one(c(0.0, 1.0)), one(c(1.0, 1.0)), k_upper(c(0.0, 1.0), c(1.0, 1.0))),
    ];
    for (dom, a, b, exact) in &cases {
        worst = worst.max((path_distance(dom, a, b)? - exact).abs());
        let g = metric::geodesic_approx(dom, a, b, DistanceOptions::default().path_nodes).map_err(|e| e.to_string())?;
        whole = whole.max((g.length.hi - exact).abs());
    }
    within(t0.elapsed(), Duration::from_secs(10))?;
    let ok = (cert.defect - want).abs() <= 1e-9
        && cert.verdict == Verdict::ViolationCertified
        && (direct.defect - want).abs() <= 1e-9
        && worst <= 1e-3;
    ensure(
        ok,
        format!(
            "defect {:.10} (product) {:.10} (direct) vs {want:.10}; path error {worst:.2e} (single product path {whole:.2e}); {:.2?}",
            cert.defect,
            direct.defect,
            t0.elapsed()
        ),
    )
}

fn criterion2() -> Outcome {
    let s = quarter();
    let d = ConvexDomain::product(s.clone(), ConvexDomain::unit_disk());
    let mut g = rng(2);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let (z1, z2) = (upper_pt(&mut g).sqrt(), upper_pt(&mut g).sqrt());
        let (a, b) = (two(z1, c(0.0, 0.0)), two(z2, c(0.0, 0.0)));
        let exact = k_quarter(z1, z2);
        let lo = metric::projection_lower_bound(&d, &a, &b).map_err(|e| e.to_string())?;
        let hi = metric::slice_upper_bound(&d, &a, &b).map_err(|e| e.to_string())?.ok_or("no slice bound")?;
        let k = metric::distance(&d, &a, &b).map_err(|e| e.to_string())?;
        let ks = metric::distance(&s, &one(z1), &one(z2)).map_err(|e| e.to_string())?;
        for v in [lo, hi, k.lo, k.hi, ks.mid()] {
            worst = worst.max((v - exact).abs());
        }
    }
    ensure(worst <= 1e-9, format!("max |K_D - K_sector| {worst:.2e} over 50 pairs"))
}

fn criterion3() -> Outcome {
    let mut g = rng(3);
    let mut report = Vec::new();
    let mut ok = true;
    type Sampler = Box<dyn Fn(&mut rand_chacha::ChaCha8Rng) -> CPoint>;
    type Oracle = Box<dyn Fn(&CPoint, &CPoint) -> f64>;
    let z = |p: &CPoint, j: usize| p.coords()[j];
    let families: Vec<(&str, ConvexDomain, Sampler, Oracle)> = vec![
        (
            "disk",
            ConvexDomain::unit_disk(),
            Box::new(|g| one(disk_pt(g, 0.98))),
            Box::new(move |a, b| k_disk(z(a, 0), z(b, 0))),
        ),
        ("upper", upper_half(), Box::new(|g| one(upper_pt(g))), Box::new(move |a, b| k_upper(z(a, 0), z(b, 0)))),
        (
            "quarter",
            quarter(),
            Box::new(|g| one(upper_pt(g).sqrt())),
            Box::new(move |a, b| k_quarter(z(a, 0), z(b, 0))),
        ),
        (
            "upper-x-disk",
            ConvexDomain::product(upper_half(), ConvexDomain::unit_disk()),
            Box::new(|g| two(upper_pt(g), disk_pt(g, 0.98))),
            Box::new(move |a, b| k_upper(z(a, 0), z(b, 0)).max(k_disk(z(a, 1), z(b, 1)))),
        ),
        (
            "ball",
            ConvexDomain::unit_ball(2),
            Box::new(|g| CPoint::from_real(&ball_point(g, 4, 0.98))),
            Box::new(|a, b| k_ball(a.coords(), b.coords())),
        ),
    ];
    for (name, d, sample, oracle) in &families {
        let (mut sym, mut slack, mut diag, mut err) = (0.0_f64, f64::INFINITY, 0.0_f64, 0.0_f64);
        for _ in 0..1000 {
            let (x, y, z) = (sample(&mut g), sample(&mut g), sample(&mut g));
            let k = |a: &CPoint, b: &CPoint| metric::distance(d, a, b).map(|i| i.mid());
            let (xy, yx, xz, zy, xx) =
                (|| -> kcat0_core::Result<_> { Ok((k(&x, &y)?, k(&y, &x)?, k(&x, &z)?, k(&z, &y)?, k(&x, &x)?)) })()
                    .map_err(|e| format!("{name}: {e}"))?;
            sym = sym.max((xy - yx).abs());
            slack = slack.min(xz + zy - xy);
            diag = diag.max(xx.abs());
            let want = oracle(&x, &y);
            err = err.max((xy - want).abs() / want.max(1.0));
        }
        ok &= sym == 0.0 && slack >= -1e-9 && diag == 0.0 && err <= 1e-9;
        report.push(format!("{name} sym {sym:.0e} slack {slack:.1e} diag {diag:.0e} oracle {err:.0e}"));
    }
    ensure(ok, report.join("; "))
}

fn criterion4() -> Outcome {
    let d = ConvexDomain::unit_disk();
    let mut g = rng(4);
    let (mut defect, mut slack) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for i in 0..200 {
        let (x, y, z) = (one(disk_pt(&mut g, 0.95)), one(disk_pt(&mut g, 0.95)), one(disk_pt(&mut g, 0.95)));
        let cert = cat0::midpoint_defect(&d, &x, &y, &z, EXACT_TOL).map_err(|e| e.to_string())?;
        if cert.verdict == Verdict::ViolationCertified {
            return Err(format!("false violation at triangle {i}"));
        }
        defect = defect.max(cert.defect);
        let rep = cat0::comparison_test(&d, &x, &y, &z, 8, i).map_err(|e| e.to_string())?;
        slack = slack.max(rep.max_slack);
    }
    ensure(defect <= 1e-9 && slack <= 1e-9, format!("max defect {defect:.2e}, max comparison slack {slack:.2e}"))
}

fn criterion5() -> Outcome {
    let t0 = Instant::now();
    let eps = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
    let p = CPoint::real(&[1.0, 0.0]);
    let (inward, tangent) = (CPoint::real(&[-1.0, 0.0]), CPoint::real(&[0.0, 1.0]));
    let fit =
        convexity::exponent_fit(&ConvexDomain::unit_ball(2), &p, &inward, &tangent, &eps).map_err(|e| e.to_string())?;
    let mut cfg = convexity::MConvexConfig::new(2.0, 2, 100, 7);
    cfg.probes = vec![CPoint::zeros(2)];
    let lens = convexity::local_m_convex_check_with(&ConvexDomain::two_ball_intersection(), &cfg)
        .map_err(|e| e.to_string())?;
    let poly =
        convexity::local_m_convex_check(&ConvexDomain::unit_polydisk(2), 2.0, 2, 60, 7).map_err(|e| e.to_string())?;
    within(t0.elapsed(), Duration::from_secs(30))?;
    let ok = (0.48..=0.52).contains(&fit.fitted_exponent)
        && lens.pass == Some(true)
        && lens.fitted_constant.is_finite()
        && poly.unbounded
        && poly.diagnostic.is_some();
    ensure(
        ok,
        format!(
            "ball slope {:.4}; lens C {:.3} pass {:?}; polydisk unbounded {}; {:.2?}",
            fit.fitted_exponent,
            lens.fitted_constant,
            lens.pass,
            poly.unbounded,
            t0.elapsed()
        ),
    )
}

fn criterion6() -> Outcome {
    let ball = Polynomial::new(
        2,
        vec![
            (vec![2, 0, 0, 0], 1.0),
            (vec![0, 2, 0, 0], 1.0),
            (vec![0, 0, 2, 0], 1.0),
            (vec![0, 0, 0, 2], 1.0),
            (vec![0; 4], -1.0),
        ],
    )
    .unwrap();
    // -Im z1 + (x2^2 + y2^2)^2
    let quartic = Polynomial::new(
        2,
        vec![(vec![0, 1, 0, 0], -1.0), (vec![0, 0, 4, 0], 1.0), (vec![0, 0, 2, 2], 2.0), (vec![0, 0, 0, 4], 1.0)],
    )
    .unwrap();
    let lb = convexity::line_type(&ball, &CPoint::real(&[1.0, 0.0]), 256).map_err(|e| e.to_string())?;
    let lq = convexity::line_type(&quartic, &CPoint::zeros(2), 256).map_err(|e| e.to_string())?;
    let nq =
        convexity::vanishing_order_numeric(&quartic, &CPoint::zeros(2), &lq.direction).map_err(|e| e.to_string())?;
    let ok = lb.line_type == Order::Finite(2)
        && lb.symbolic
        && lq.line_type == Order::Finite(4)
        && lq.symbolic
        && nq == Order::Finite(4);
    ensure(
        ok,
        format!("ball L={}, quartic L={} (symbolic {}), numeric {}", lb.line_type, lq.line_type, lq.symbolic, nq),
    )
}

fn criterion7() -> Outcome {
    let ns = [10_u64, 100, 1000];
    let seq: Vec<(u64, ConvexDomain)> =
        ns.iter().map(|&n| (n, ConvexDomain::disk(c(0.0, 0.0), 1.0 + 1.0 / n as f64).unwrap())).collect();
    let pair = (one(c(0.0, 0.0)), one(c(0.5, 0.0)));
    let table = convergence_check(&seq, &ConvexDomain::unit_disk(), &[pair], &DistanceOptions::default())
        .map_err(|e| e.to_string())?;
    let gap = |n: u64| table.rows.iter().find(|r| r.n == n).map(|r| r.gap).unwrap();
    let want = (0.5_f64.atanh() - (0.5 * 100.0 / 101.0_f64).atanh()).abs();
    let gaps: Vec<f64> = ns.iter().map(|&n| gap(n)).collect();
    let ok = (gap(100) - want).abs() <= 1e-6 && gaps.windows(2).all(|w| w[1] < w[0]) && table.decreasing;
    ensure(
        ok,
        format!(
            "gap(100) {:.6e} vs {want:.6e}; gaps {:?}",
            gap(100),
            gaps.iter().map(|g| format!("{g:.3e}")).collect::<Vec<_>>()
        ),
    )
}

fn criterion8() -> Outcome {
    let t0 = Instant::now();
    let rep = limits::example36(&Example36Config::default()).map_err(|e| e.to_string())?;
    within(t0.elapsed(), Duration::from_secs(300))?;
    let want = (0.5 * 2.0_f64.ln()).powi(2);
    let readings: Vec<f64> = rep.hausdorff.iter().map(|h| h.reading.value).collect();
    let ok = rep.mconvex.pass == Some(true)
        && readings.windows(2).all(|w| w[1] < w[0])
        && rep.hausdorff_decreasing
        && (rep.product.defect - want).abs() <= 1e-9
        && (rep.scaled.defect - want).abs() <= 5e-2
        && rep.scaled.midpoint_residual <= 10.0 * APPROX_TOL;
    ensure(
        ok,
        format!(
            "C {:.3}; d_H {readings:.4?}; product defect {:.7}; large-n defect {:.4}; {:.2?}",
            rep.mconvex.fitted_constant,
            rep.product.defect,
            rep.scaled.defect,
            t0.elapsed()
        ),
    )
}

fn criterion9() -> Outcome {
    let quartic = Polynomial::new(
        2,
        vec![(vec![0, 1, 0, 0], -1.0), (vec![0, 0, 4, 0], 1.0), (vec![0, 0, 2, 2], 2.0), (vec![0, 0, 0, 4], 1.0)],
    )
    .unwrap();
    // Im z1 > |z1|^2 + |z2|^2, a ball written as a graph.
    let ball_graph = Polynomial::new(
        2,
        vec![
            (vec![0, 1, 0, 0], -1.0),
            (vec![2, 0, 0, 0], 1.0),
            (vec![0, 2, 0, 0], 1.0),
            (vec![0, 0, 2, 0], 1.0),
            (vec![0, 0, 0, 2], 1.0),
        ],
    )
    .unwrap();
    let domains = [
        ("quartic-graph", ConvexDomain::graph(Arc::new(quartic), true).unwrap(), two(c(0.0, 0.5), c(0.0, 0.0))),
        ("ball-graph", ConvexDomain::graph(Arc::new(ball_graph), true).unwrap(), two(c(0.0, 0.5), c(0.0, 0.0))),
        ("two-ball", ConvexDomain::two_ball_intersection(), CPoint::real(&[0.5, 0.5])),
        (
            "disk-cap-quarter",
            ConvexDomain::intersection(vec![ConvexDomain::disk(c(0.0, 0.0), 2.0).unwrap(), quarter()]).unwrap(),
            one(c(0.7, 0.7)),
        ),
    ];
    let mut g = rng(9);
    let mut worst_ratio: f64 = 0.0;
    let mut count = 0;
    let mut report = Vec::new();
    for (name, d, anchor) in &domains {
        let scale = d.delta(anchor).map_err(|e| e.to_string())?;
        let mut pts = Vec::new();
        while pts.len() < 12 {
            let p = anchor.offset(&CPoint::from_real(&ball_point(&mut g, 2 * d.dim(), 3.0 * scale)), 1.0);
            if d.inside(&p) {
                pts.push(p);
            }
        }
        let mut ratio: f64 = 0.0;
        for p in &pts {
            let v = CPoint::from_real(&ball_point(&mut g, 2 * d.dim(), 1.0));
            let k = metric::infinitesimal(d, p, &v).map_err(|e| format!("{name}: {e}"))?;
            if !(k.lo > 0.0 && k.hi.is_finite() && k.lo <= k.hi) {
                return Err(format!("{name}: infinitesimal interval [{}, {}]", k.lo, k.hi));
            }
            ratio = ratio.max(k.hi / k.lo);
            count += 1;
        }
        for w in pts.windows(2).take(4) {
            let k = metric::distance(d, &w[0], &w[1]).map_err(|e| format!("{name}: {e}"))?;
            if !(k.lo.is_finite() && k.hi.is_finite() && k.lo <= k.hi) {
                return Err(format!("{name}: distance interval [{}, {}]", k.lo, k.hi));
            }
        }
        worst_ratio = worst_ratio.max(ratio);
        report.push(format!("{name} {ratio:.3}"));
    }
    ensure(
        worst_ratio <= 2.0 + 1e-9,
        format!("max hi/lo {worst_ratio:.4} over {count} vectors ({})", report.join(", ")),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("product certificate on upper half-plane x disk", criterion1),
        ("isometric embedding of the quarter plane", criterion2),
        ("metric axioms on catalog domains", criterion3),
        ("no false violations on the disk", criterion4),
        ("m-convexity exponents and constants", criterion5),
        ("line types", criterion6),
        ("convergence under shrinking dilations", criterion7),
        ("two-ball pipeline", criterion8),
        ("sandwich tightness", criterion9),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = format!("{}", i + 1);
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        match run() {
            Ok(msg) => println!("criterion {id} PASS  {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {id} FAIL  {name}: {msg}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
