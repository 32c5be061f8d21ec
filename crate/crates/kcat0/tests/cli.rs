use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn kcat0(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kcat0")).args(args).env_remove("KCAT0_SEED").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn certify_exits_two_on_a_violation() {
    let out = kcat0(&["certify", "--builtin", "halfplane-x-disk", "--x", "i,0", "--y", "4i,0", "--z", "2i,1/3"]);
    assert_eq!(out.status.code(), Some(2));
    let r = json(&out);
    assert_eq!(r["schema"], "kcat0/1");
    assert_eq!(r["result"]["verdict"], "violation-certified");
    let want = (0.5 * 2.0_f64.ln()).powi(2);
    assert!((r["result"]["defect"].as_f64().unwrap() - want).abs() <= 1e-9);
    assert_eq!(format!("{:.7}", r["result"]["defect"].as_f64().unwrap()), "0.1201133");
    assert!(r["tolerances"]["midpoint-residual"].is_number());
    assert_eq!(r["result"]["d_xy"]["methods"][0], "exact-chart");
}

#[test]
fn certify_exits_zero_without_a_violation() {
    let out = kcat0(&["certify", "--builtin", "disk", "--x", "0", "--y", "0.5", "--z", "0.2i"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["verdict"], "no-violation-found");
}

#[test]
fn distance_on_the_disk() {
    let out = kcat0(&["distance", "--builtin", "disk", "--from", "0", "--to", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out)["result"]["value"].as_f64().unwrap();
    assert!((v - 0.5_f64.atanh()).abs() <= 1e-12);
    assert_eq!(format!("{v:.6}"), "0.549306");
}

#[test]
fn selftest_passes() {
    let out = kcat0(&["selftest"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert!(r["result"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn errors_exit_one() {
    assert_eq!(kcat0(&["bogus"]).status.code(), Some(1));
    assert_eq!(kcat0(&["distance", "--builtin", "nope", "--from", "0", "--to", "0"]).status.code(), Some(1));
    let out = kcat0(&["distance", "--builtin", "disk", "--from", "0", "--to", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    assert_eq!(kcat0(&["distance", "--builtin", "disk", "--from", "1+", "--to", "0"]).status.code(), Some(1));
    assert_eq!(kcat0(&["--help"]).status.code(), Some(0));
}

#[test]
fn malformed_domain_json_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"type\": \"disk\",\n  \"radius\": ,\n}\n").unwrap();
    let out = kcat0(&["distance", "--domain", path.to_str().unwrap(), "--from", "0", "--to", "0.1"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");
    assert!(err.contains("column"), "{err}");
}

#[test]
fn domain_files_round_trip_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.json");
    std::fs::write(&path, r#"{"type": "disk", "center": "0", "radius": 2}"#).unwrap();
    let out = kcat0(&["distance", "--domain", path.to_str().unwrap(), "--from", "0", "--to", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out)["result"]["value"].as_f64().unwrap();
    assert!((v - 0.5_f64.atanh()).abs() <= 1e-12);
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> Vec<u8> {
    let path = dir.join(name);
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    full.extend(["--output", &p]);
    let out = kcat0(&full);
    assert!(out.status.success() || out.status.code() == Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    std::fs::read(&path).unwrap()
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 3] = [
        &["--seed", "9", "mconvex", "--builtin", "ball", "--samples", "10"],
        &["--seed", "9", "certify", "--builtin", "quadrant", "--mode", "product", "--x", "1", "--y", "4", "--w", "1"],
        &["limits", "--kind", "hausdorff", "--builtin", "disk", "--other-builtin", "halfplane", "--directions", "128"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let a = run_to(dir.path(), &format!("a{i}.json"), args);
        let b = run_to(dir.path(), &format!("b{i}.json"), args);
        assert_eq!(a, b, "case {i}");
    }
}

#[test]
fn seed_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_kcat0"))
        .args(["mconvex", "--builtin", "ball", "--samples", "5"])
        .env("KCAT0_SEED", "123")
        .output()
        .unwrap();
    assert_eq!(json(&out)["seed"], 123);
}

#[test]
fn convergence_table_as_csv() {
    let out = kcat0(&[
        "--format",
        "csv",
        "limits",
        "--kind",
        "convergence",
        "--builtin",
        "disk",
        "--pair",
        "0;0.5",
        "--ns",
        "10,100,1000",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rdr.headers().unwrap(), vec!["n", "pairIndex", "gap"]);
    let gaps: Vec<f64> = rdr.records().map(|r| r.unwrap()[2].parse().unwrap()).collect();
    let want = (0.5_f64.atanh() - (0.5 * 100.0 / 101.0_f64).atanh()).abs();
    assert!((gaps[1] - want).abs() <= 1e-6);
    assert!(gaps.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn line_type_of_the_quartic() {
    let out = kcat0(&["linetype", "--builtin", "quartic", "--at", "0,0"]);
    let r = json(&out);
    assert_eq!(r["result"]["line_type"], 4);
    assert_eq!(r["result"]["numeric_order"], 4);
}

#[test]
fn path_csv_is_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("path.csv");
    let out = kcat0(&[
        "distance",
        "--builtin",
        "ball",
        "--from",
        "0,0",
        "--to",
        "0.5,0.5i",
        "--path-csv",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,re1,im1,re2,im2"));
    assert_eq!(lines.count(), 35);
}
