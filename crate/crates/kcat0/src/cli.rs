//! Command-line front end.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kcat0_core::cat0::{self, Verdict, APPROX_TOL, EXACT_TOL};
use kcat0_core::convexity::{self, MConvexConfig, Order};
use kcat0_core::limits::{self, Example36Config, FrankelConfig, ScalingSequence};
use kcat0_core::metric::{self, DistanceInterval, DistanceOptions};
use kcat0_core::{CPoint, Complex64, ConvexDomain, Node};
use serde::Serialize;

use crate::complex::{format_point, parse_point};
use crate::error::CliError;
use crate::report::{emit, Report};
use crate::selftest;
use crate::spec::{builtin, defining_polynomial, DomainSpec, BUILTINS};

/// Exit code when `certify` finds a certified violation.
pub const EXIT_VIOLATION: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "kcat0", version, about = "Kobayashi distances, CAT(0) certificates and scaling limits")]
pub struct Cli {
    /// Seed for every sampling step.
    #[arg(long, global = true, env = "KCAT0_SEED", default_value_t = 42)]
    pub seed: u64,
    /// Report file; standard output when omitted.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct DomainArgs {
    /// JSON domain specification file.
    #[arg(long)]
    pub domain: Option<PathBuf>,
    /// Named domain (see `kcat0 selftest --list-builtins`).
    #[arg(long)]
    pub builtin: Option<String>,
}

fn point_arg(s: &str) -> Result<CPoint, String> {
    parse_point(s).map_err(|e| e.to_string())
}

fn pair_arg(s: &str) -> Result<(CPoint, CPoint), String> {
    let (a, b) = s.split_once(';').ok_or("expected two points separated by ';'")?;
    Ok((point_arg(a)?, point_arg(b)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CertifyMode {
    Midpoint,
    Product,
    Comparison,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LimitsKind {
    Convergence,
    Hausdorff,
    Lemma32,
    Frankel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Profile {
    /// `f(x, z) = x^2 + exp(-1/|z|)`
    Flat,
    /// `f(x, z) = x^2 + |z|^4`
    Quartic,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Midpoint, product or comparison-triangle certificates.
    Certify {
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long, value_enum, default_value_t = CertifyMode::Midpoint)]
        mode: CertifyMode,
        #[arg(long, value_parser = point_arg)]
        x: CPoint,
        #[arg(long, value_parser = point_arg)]
        y: CPoint,
        /// Test point (midpoint mode) or third vertex (comparison mode).
        #[arg(long, value_parser = point_arg)]
        z: Option<CPoint>,
        /// Base point in the second factor (product mode).
        #[arg(long, value_parser = point_arg)]
        w: Option<CPoint>,
        /// Midpoint residual tolerance; defaults by domain type.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 64)]
        count: usize,
    },
    /// Kobayashi distance bracket between two points.
    Distance {
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long, value_parser = point_arg)]
        from: CPoint,
        #[arg(long, value_parser = point_arg)]
        to: CPoint,
        /// Skip the inscribed-domain and path searches.
        #[arg(long)]
        fast: bool,
        /// Also write the optimized path as CSV plot data.
        #[arg(long)]
        path_csv: Option<PathBuf>,
    },
    /// Boundary m-convexity check or exponent fit.
    Mconvex {
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long, default_value_t = 2.0)]
        radius: f64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Constant to test against.
        #[arg(long)]
        constant: Option<f64>,
        /// Boundary points approached by depth sequences.
        #[arg(long, value_parser = point_arg)]
        probe: Vec<CPoint>,
        /// Fit the exponent along `base + eps * toward` instead.
        #[arg(long, requires_all = ["base", "toward", "direction"])]
        fit: bool,
        #[arg(long, value_parser = point_arg)]
        base: Option<CPoint>,
        #[arg(long, value_parser = point_arg)]
        toward: Option<CPoint>,
        #[arg(long, value_parser = point_arg)]
        direction: Option<CPoint>,
        #[arg(long, value_delimiter = ',', default_values_t = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6])]
        eps: Vec<f64>,
    },
    /// Line type of a polynomial boundary at a point.
    Linetype {
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long, value_parser = point_arg)]
        at: CPoint,
        /// Only the order along this complex line.
        #[arg(long, value_parser = point_arg)]
        direction: Option<CPoint>,
        #[arg(long, default_value_t = 256)]
        grid: usize,
    },
    /// Hausdorff readings, scaling sequences and convergence tables.
    Limits {
        #[arg(long, value_enum)]
        kind: LimitsKind,
        #[arg(long)]
        domain: Option<PathBuf>,
        #[arg(long, conflicts_with = "domain")]
        builtin: Option<String>,
        #[arg(long)]
        other: Option<PathBuf>,
        #[arg(long, conflicts_with = "other")]
        other_builtin: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, value_delimiter = ',')]
        ns: Vec<u64>,
        /// Test pair `x;y` (convergence).
        #[arg(long, value_parser = pair_arg)]
        pair: Vec<(CPoint, CPoint)>,
        #[arg(long, value_enum, default_value_t = Profile::Flat)]
        profile: Profile,
        #[arg(long, default_value_t = limits::DEFAULT_DIRECTIONS)]
        directions: usize,
    },
    /// Two-ball intersection pipeline: m-convexity, dilation limit, certificates.
    Example36 {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 1e6)]
        large_n: f64,
        #[arg(long, default_value_t = limits::DEFAULT_DIRECTIONS)]
        directions: usize,
    },
    /// Quick invariant suite.
    Selftest {
        /// Print the builtin domain names and exit.
        #[arg(long)]
        list_builtins: bool,
    },
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn read_spec(path: &Path) -> Result<DomainSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    DomainSpec::parse(&text)
}

fn named(name: &str) -> Result<DomainSpec, CliError> {
    builtin(name).ok_or_else(|| {
        let names: Vec<&str> = BUILTINS.iter().map(|(n, _)| *n).collect();
        CliError::usage(format!("unknown builtin {name:?}; available: {}", names.join(", ")))
    })
}

fn load(path: Option<&PathBuf>, name: Option<&String>) -> Result<(DomainSpec, ConvexDomain), CliError> {
    let spec = match (path, name) {
        (Some(p), _) => read_spec(p)?,
        (None, Some(n)) => named(n)?,
        (None, None) => return Err(CliError::usage("a domain is required (--domain or --builtin)")),
    };
    let d = spec.build()?;
    Ok((spec, d))
}

fn json_only(cli: &Cli) -> Result<(), CliError> {
    if cli.format == Format::Csv {
        return Err(CliError::usage("CSV output is only available for `limits --kind convergence`"));
    }
    Ok(())
}

fn finish<T: Serialize>(cli: &Cli, report: Report<T>, code: i32) -> Result<i32, CliError> {
    emit(cli.output.as_deref(), &report.to_json())?;
    Ok(code)
}

#[derive(Serialize)]
struct DistanceResult {
    from: String,
    to: String,
    value: f64,
    interval: DistanceInterval,
}

#[derive(Serialize)]
struct LineTypeOut {
    line_type: Order,
    direction: CPoint,
    symbolic: bool,
    numeric_order: Option<Order>,
    lines_examined: usize,
}

#[derive(Serialize)]
struct VanishingOut {
    direction: CPoint,
    order: Order,
    numeric_order: Option<Order>,
}

#[derive(Serialize)]
struct ScalingOut {
    claimed_limit: Option<DomainSpec>,
    readings: Vec<limits::HausdorffStep>,
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let seed = cli.seed;
    match &cli.command {
        Command::Certify { domain, mode, x, y, z, w, tol, count } => {
            json_only(cli)?;
            let (spec, d) = load(domain.domain.as_ref(), domain.builtin.as_ref())?;
            let need = |p: &Option<CPoint>, flag: &str| {
                p.clone().ok_or_else(|| CliError::usage(format!("--{flag} is required for this mode")))
            };
            let default_tol = if d.is_catalog() { EXACT_TOL } else { APPROX_TOL };
            let tol = tol.unwrap_or(default_tol);
            match mode {
                CertifyMode::Midpoint => {
                    let cert = cat0::midpoint_defect(&d, x, y, &need(z, "z")?, tol)?;
                    let code = if cert.verdict == Verdict::ViolationCertified { EXIT_VIOLATION } else { 0 };
                    finish(
                        cli,
                        Report::new("certify", seed, Some(spec), cert).tolerance("midpoint-residual", tol),
                        code,
                    )
                }
                CertifyMode::Product => {
                    let Node::Product(l, r) = d.node() else {
                        return Err(CliError::usage("product mode needs a product domain"));
                    };
                    let cert = cat0::product_certificate(l, r, x, y, &need(w, "w")?, seed)?;
                    let code = if cert.verdict == Verdict::ViolationCertified { EXIT_VIOLATION } else { 0 };
                    finish(
                        cli,
                        Report::new("certify", seed, Some(spec), cert).tolerance("midpoint-residual", EXACT_TOL),
                        code,
                    )
                }
                CertifyMode::Comparison => {
                    let rep = cat0::comparison_test(&d, x, y, &need(z, "z")?, *count, seed)?;
                    let tol = if rep.exact { tol } else { tol.max(APPROX_TOL) };
                    let code = if rep.max_slack > tol { EXIT_VIOLATION } else { 0 };
                    finish(cli, Report::new("certify", seed, Some(spec), rep).tolerance("comparison-slack", tol), code)
                }
            }
        }
        Command::Distance { domain, from, to, fast, path_csv } => {
            json_only(cli)?;
            let (spec, d) = load(domain.domain.as_ref(), domain.builtin.as_ref())?;
            let opts = if *fast { DistanceOptions::fast() } else { DistanceOptions::default() };
            let interval = metric::distance_with(&d, from, to, &opts)?;
            if let Some(p) = path_csv {
                write_path_csv(&d, from, to, p)?;
            }
            let width = interval.width();
            let out =
                DistanceResult { from: format_point(from), to: format_point(to), value: interval.mid(), interval };
            finish(cli, Report::new("distance", seed, Some(spec), out).tolerance("interval-width", width), 0)
        }
        Command::Mconvex { domain, m, radius, samples, constant, probe, fit, base, toward, direction, eps } => {
            json_only(cli)?;
            let (spec, d) = load(domain.domain.as_ref(), domain.builtin.as_ref())?;
            let rep = if *fit {
                let (b, t, v) = (base.as_ref().unwrap(), toward.as_ref().unwrap(), direction.as_ref().unwrap());
                convexity::exponent_fit(&d, b, t, v, eps)?
            } else {
                let mut cfg = MConvexConfig::new(*radius, *m, *samples, seed);
                cfg.constant = *constant;
                cfg.probes = probe.clone();
                convexity::local_m_convex_check_with(&d, &cfg)?
            };
            let report =
                Report::new("mconvex", seed, Some(spec), rep).tolerance("unbounded-slope", convexity::UNBOUNDED_SLOPE);
            finish(cli, report, 0)
        }
        Command::Linetype { domain, at, direction, grid } => {
            json_only(cli)?;
            let (spec, _) = load(domain.domain.as_ref(), domain.builtin.as_ref())?;
            let p = defining_polynomial(&spec)
                .ok_or_else(|| CliError::usage("linetype needs a graph domain with a polynomial defining function"))?;
            match direction {
                Some(w) => {
                    let order = convexity::vanishing_order(&p, at, w)?;
                    let numeric_order = convexity::vanishing_order_numeric(&p, at, w).ok();
                    let out = VanishingOut { direction: w.clone(), order, numeric_order };
                    finish(
                        cli,
                        Report::new("linetype", seed, Some(spec), out)
                            .tolerance("order-residual", convexity::ORDER_RESIDUAL),
                        0,
                    )
                }
                None => {
                    let r = convexity::line_type(&p, at, *grid)?;
                    let numeric_order = convexity::vanishing_order_numeric(&p, at, &r.direction).ok();
                    let out = LineTypeOut {
                        line_type: r.line_type,
                        direction: r.direction,
                        symbolic: r.symbolic,
                        numeric_order,
                        lines_examined: r.per_line.len(),
                    };
                    finish(
                        cli,
                        Report::new("linetype", seed, Some(spec), out)
                            .tolerance("order-residual", convexity::ORDER_RESIDUAL),
                        0,
                    )
                }
            }
        }
        Command::Limits { kind, domain, builtin, other, other_builtin, radius, ns, pair, profile, directions } => {
            run_limits(cli, *kind, domain, builtin, other, other_builtin, *radius, ns, pair, *profile, *directions)
        }
        Command::Example36 { samples, large_n, directions } => {
            json_only(cli)?;
            let cfg = Example36Config {
                seed,
                samples: *samples,
                large_n: *large_n,
                directions: *directions,
                ..Example36Config::default()
            };
            let rep = limits::example36(&cfg)?;
            let report =
                Report::new("example36", seed, DomainSpec::from_domain(&ConvexDomain::two_ball_intersection()), rep)
                    .tolerance("product-midpoint-residual", EXACT_TOL)
                    .tolerance("scaled-midpoint-residual", APPROX_TOL);
            finish(cli, report, 0)
        }
        Command::Selftest { list_builtins } => {
            json_only(cli)?;
            if *list_builtins {
                let names: Vec<(String, String)> =
                    BUILTINS.iter().map(|(n, d)| (n.to_string(), d.to_string())).collect();
                return finish(cli, Report::new("selftest", seed, None, names), 0);
            }
            let checks = selftest::run(seed);
            let code = if checks.iter().all(|c| c.pass) { 0 } else { 1 };
            finish(cli, Report::new("selftest", seed, None, checks), code)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn run_limits(
    cli: &Cli,
    kind: LimitsKind,
    domain: &Option<PathBuf>,
    builtin: &Option<String>,
    other: &Option<PathBuf>,
    other_builtin: &Option<String>,
    radius: f64,
    ns: &[u64],
    pairs: &[(CPoint, CPoint)],
    profile: Profile,
    directions: usize,
) -> Result<i32, CliError> {
    let seed = cli.seed;
    if kind != LimitsKind::Convergence {
        json_only(cli)?;
    }
    match kind {
        LimitsKind::Convergence => {
            let (spec, d) = load(domain.as_ref(), builtin.as_ref())?;
            if pairs.is_empty() {
                return Err(CliError::usage("convergence needs at least one --pair"));
            }
            let ns = if ns.is_empty() { vec![10, 100, 1000] } else { ns.to_vec() };
            let seq = ScalingSequence::shrinking_dilation(d);
            let table =
                limits::convergence_check(&seq.domains(&ns)?, &seq.claimed_limit, pairs, &DistanceOptions::default())?;
            match cli.format {
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["n", "pairIndex", "gap"])?;
                    for r in &table.rows {
                        w.write_record([r.n.to_string(), r.pair_index.to_string(), format!("{:?}", r.gap)])?;
                    }
                    let bytes = w.into_inner().map_err(|e| CliError::usage(e.to_string()))?;
                    emit(cli.output.as_deref(), &String::from_utf8(bytes).expect("utf-8"))?;
                    Ok(0)
                }
                Format::Json => finish(cli, Report::new("limits", seed, Some(spec), table), 0),
            }
        }
        LimitsKind::Hausdorff => {
            let (spec, a) = load(domain.as_ref(), builtin.as_ref())?;
            let (_, b) = load(other.as_ref(), other_builtin.as_ref())
                .map_err(|_| CliError::usage("hausdorff needs --other or --other-builtin"))?;
            let reading = limits::hausdorff_with(&a, &b, radius, directions)?;
            let mesh = reading.mesh;
            finish(cli, Report::new("limits", seed, Some(spec), reading).tolerance("mesh", mesh), 0)
        }
        LimitsKind::Lemma32 => {
            let (spec, d) = load(domain.as_ref(), builtin.as_ref())?;
            let seq = limits::scaling_lemma32(&d)?;
            let ns = if ns.is_empty() { vec![1, 10, 100] } else { ns.to_vec() };
            let mut readings = Vec::new();
            for &n in &ns {
                let reading = limits::hausdorff_with(&seq.domain(n)?, &seq.claimed_limit, radius, directions)?;
                readings.push(limits::HausdorffStep { n, reading });
            }
            let out = ScalingOut { claimed_limit: DomainSpec::from_domain(&seq.claimed_limit), readings };
            finish(cli, Report::new("limits", seed, Some(spec), out), 0)
        }
        LimitsKind::Frankel => {
            let data: limits::GraphData = match profile {
                Profile::Flat => Arc::new(|x: f64, z: Complex64| {
                    let m = z.norm();
                    x * x + if m > 0.0 { (-1.0 / m).exp() } else { 0.0 }
                }),
                Profile::Quartic => Arc::new(|x: f64, z: Complex64| x * x + z.norm_sqr() * z.norm_sqr()),
            };
            let mut cfg = FrankelConfig { window: Some(radius), directions, ..FrankelConfig::default() };
            if !ns.is_empty() {
                cfg.ns = ns.iter().map(|&n| n as u32).collect();
            }
            let rep = limits::frankel_2b(data, &cfg)?;
            finish(cli, Report::new("limits", seed, None, rep.steps).tolerance("bound-slack", 1e-9), 0)
        }
    }
}

fn write_path_csv(d: &ConvexDomain, x: &CPoint, y: &CPoint, path: &Path) -> Result<(), CliError> {
    let g = metric::geodesic_approx(d, x, y, DistanceOptions::default().path_nodes)?;
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["t".to_string()];
    for j in 1..=d.dim() {
        header.push(format!("re{j}"));
        header.push(format!("im{j}"));
    }
    w.write_record(&header)?;
    for (node, t) in g.path.nodes.iter().zip(&g.path.params) {
        let mut row = vec![format!("{t:?}")];
        for z in node.coords() {
            row.push(format!("{:?}", z.re));
            row.push(format!("{:?}", z.im));
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    Ok(())
}
