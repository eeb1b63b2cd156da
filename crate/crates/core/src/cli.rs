//! Command-line front end: `compute`, `verify` and `profile`.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::chartoda::{closed_x, closed_y, richardson};
use crate::error::Error;
use crate::numfield::{ComplexApprox, CycloNum, Scalar};
use crate::observables::{
    run_suite, run_suite_uncapped, Check, CurrentResult, Observable, OracleContext, Report, Route, Suite, SuiteConfig,
};
use crate::point::{sample_point_and_w, Point};

/// Environment variable capping the worker threads.
pub const MAX_THREADS_ENV: &str = "LOOPCURRENT_MAX_THREADS";

/// Largest widths run without `--unsafe-size`.
pub const CAP_EXACT_ORACLE: usize = 5;
pub const CAP_EXACT_CLOSED: usize = 12;
pub const CAP_FLOAT_CLOSED: usize = 16;

#[derive(Parser, Debug)]
#[command(name = "loopcurrent", version, about = "Boundary-to-boundary currents of the O(1) loop model on a strip")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate X or Y by the transfer-matrix route, the closed form, or both.
    Compute(RunArgs),
    /// Run identity suites at seeded points; exits 1 on any failure.
    Verify(VerifyArgs),
    /// Tabulate a current across marker positions as CSV.
    Profile(RunArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum ObsArg {
    X,
    Y,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum RouteArg {
    Oracle,
    Closed,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Backend {
    Exact,
    Complex,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Inclusive range `a..b`, or a single value.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct IndexRange {
    pub start: usize,
    pub end: usize,
}

impl IndexRange {
    pub fn iter(self) -> impl Iterator<Item = usize> {
        self.start..=self.end
    }
}

impl FromStr for IndexRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("`{s}` is not a range a..b"));
        let (start, end) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
            None => (num(s)?, num(s)?),
        };
        if start > end {
            return Err(format!("empty range `{s}`"));
        }
        Ok(IndexRange { start, end })
    }
}

#[derive(Args, Clone, Debug)]
pub struct RunArgs {
    /// Strip width; inferred from --z when omitted.
    #[arg(long = "L")]
    pub size: Option<usize>,
    #[arg(long, value_enum, default_value = "x", ignore_case = true)]
    pub obs: ObsArg,
    /// Marker positions `a..b` (inclusive).
    #[arg(long)]
    pub k: Option<IndexRange>,
    /// Spectral parameter for Y; sampled from the seed when omitted.
    #[arg(long)]
    pub w: Option<String>,
    #[arg(long, value_enum, default_value = "closed")]
    pub route: RouteArg,
    #[arg(long, value_enum, default_value = "exact")]
    pub backend: Backend,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated column rapidities.
    #[arg(long)]
    pub z: Option<String>,
    #[arg(long)]
    pub zeta1: Option<String>,
    #[arg(long)]
    pub zeta2: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Evaluate the closed form by perturbing the columns by this relative
    /// step and extrapolating; without --z all columns share one rapidity.
    #[arg(long)]
    pub homogeneous_eps: Option<f64>,
    #[arg(long)]
    pub unsafe_size: bool,
}

#[derive(Args, Clone, Debug)]
pub struct VerifyArgs {
    /// `all` or a comma-separated list of suite names.
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Width or inclusive range of widths.
    #[arg(long = "L", default_value = "3")]
    pub size: IndexRange,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Points per width; each suite's default when omitted.
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub unsafe_size: bool,
}

/// Failure classes and their exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid arguments: {0}")]
    Usage(String),
    #[error("{0}")]
    Domain(#[from] Error),
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0} identity checks failed")]
    Failures(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failures(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Domain(_) | CliError::Io(_) => 3,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses the arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    configure_threads();
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var(MAX_THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Compute(a) => emit_results(a, a.format.unwrap_or(Format::Json), false),
        Command::Profile(a) => emit_results(a, a.format.unwrap_or(Format::Csv), true),
        Command::Verify(a) => verify(a),
    }
}

// ------------------------------------------------------- scalars on the command line

/// Backend-specific parsing and tabular output.
pub trait CliScalar: Scalar + Serialize {
    const VALUE_COLUMNS: [&'static str; 2];
    fn parse_arg(s: &str) -> crate::Result<Self>;
    fn from_exact(x: &CycloNum) -> Self;
    fn value_parts(&self) -> [String; 2];
}

impl CliScalar for CycloNum {
    const VALUE_COLUMNS: [&'static str; 2] = ["value_a", "value_b"];
    fn parse_arg(s: &str) -> crate::Result<Self> {
        s.parse()
    }
    fn from_exact(x: &CycloNum) -> Self {
        x.clone()
    }
    fn value_parts(&self) -> [String; 2] {
        [self.a.to_string(), self.b.to_string()]
    }
}

impl CliScalar for ComplexApprox {
    const VALUE_COLUMNS: [&'static str; 2] = ["value_re", "value_im"];
    fn parse_arg(s: &str) -> crate::Result<Self> {
        s.parse::<ComplexApprox>().or_else(|e| s.parse::<CycloNum>().map(|x| ComplexApprox::from(&x)).map_err(|_| e))
    }
    fn from_exact(x: &CycloNum) -> Self {
        ComplexApprox::from(x)
    }
    fn value_parts(&self) -> [String; 2] {
        [self.re.to_string(), self.im.to_string()]
    }
}

// ------------------------------------------------------- compute and profile

fn size_cap(backend: Backend, route: Route) -> usize {
    match (backend, route) {
        (_, Route::Oracle) => CAP_EXACT_ORACLE,
        (Backend::Exact, Route::Closed) => CAP_EXACT_CLOSED,
        (Backend::Complex, Route::Closed) => CAP_FLOAT_CLOSED,
    }
}

fn routes(r: RouteArg) -> Vec<Route> {
    match r {
        RouteArg::Oracle => vec![Route::Oracle],
        RouteArg::Closed => vec![Route::Closed],
        RouteArg::Both => vec![Route::Oracle, Route::Closed],
    }
}

fn spec_err(e: Error) -> CliError {
    CliError::Usage(e.to_string())
}

/// The point and `w` of a run: sampled from the seed, then overridden by any
/// explicit values.
fn explicit_z<S: CliScalar>(a: &RunArgs) -> CliResult<Option<Vec<S>>> {
    match &a.z {
        Some(list) => Ok(Some(list.split(',').map(|t| S::parse_arg(t.trim())).collect::<crate::Result<_>>().map_err(spec_err)?)),
        None => Ok(None),
    }
}

fn requested_size<S: CliScalar>(a: &RunArgs) -> CliResult<usize> {
    match (a.size, explicit_z::<S>(a)?) {
        (Some(l), Some(z)) if z.len() != l => Err(CliError::Usage(format!("--L {l} but --z lists {} values", z.len()))),
        (Some(l), _) => Ok(l),
        (None, Some(z)) => Ok(z.len()),
        (None, None) => Err(CliError::Usage("give --L or --z".into())),
    }
}

fn resolve_point<S: CliScalar>(a: &RunArgs) -> CliResult<(Point<S>, S)> {
    let size = requested_size::<S>(a)?;
    let explicit_z = explicit_z::<S>(a)?;
    let (sampled, w0) = sample_point_and_w(a.seed, size)?;
    let mut p = sampled.map(S::from_exact);
    if let Some(z) = explicit_z {
        p.z = z;
    } else if a.homogeneous_eps.is_some() && size > 0 {
        let common = p.z[0].clone();
        p.z.iter_mut().for_each(|v| *v = common.clone());
    }
    if let Some(v) = &a.zeta1 {
        p.zeta1 = S::parse_arg(v).map_err(spec_err)?;
    }
    if let Some(v) = &a.zeta2 {
        p.zeta2 = S::parse_arg(v).map_err(spec_err)?;
    }
    let w = match &a.w {
        Some(v) => S::parse_arg(v).map_err(spec_err)?,
        None => S::from_exact(&w0),
    };
    Ok((p, w))
}

/// One requested value.
#[derive(Clone, Copy, Debug)]
struct Job {
    route: Route,
    k: Option<usize>,
}

fn jobs(a: &RunArgs, size: usize, profile: bool) -> CliResult<Vec<Job>> {
    let default = match (a.obs, profile) {
        (ObsArg::X, _) => Some(IndexRange { start: 1, end: size }),
        (ObsArg::Y, true) => Some(IndexRange { start: 1, end: size + 1 }),
        (ObsArg::Y, false) => None,
    };
    let range = a.k.or(default);
    let top = if a.obs == ObsArg::X { size } else { size + 1 };
    if let Some(r) = range {
        if r.start < 1 || r.end > top {
            return Err(CliError::Usage(format!("--k {}..{} outside 1..{top}", r.start, r.end)));
        }
    }
    let ks: Vec<Option<usize>> = match range {
        Some(r) => r.iter().map(Some).collect(),
        None => vec![None],
    };
    Ok(routes(a.route).into_iter().flat_map(|route| ks.iter().map(move |&k| Job { route, k })).collect())
}

fn is_fixed_point<S: Scalar>(z: &S) -> bool {
    z.close_to(&S::one(), 1e-14) || z.close_to(&-S::one(), 1e-14)
}

fn compute_all<S: CliScalar>(a: &RunArgs, profile: bool) -> CliResult<Vec<CurrentResult<S>>> {
    let size = requested_size::<S>(a)?;
    for route in routes(a.route) {
        let cap = size_cap(a.backend, route);
        if size > cap && !a.unsafe_size {
            return Err(CliError::Usage(format!("L = {size} above the {route:?} cap {cap}; pass --unsafe-size to override")));
        }
    }
    let (p, w) = resolve_point::<S>(a)?;
    let jobs = jobs(a, size, profile)?;
    let ctx = if jobs.iter().any(|j| j.route == Route::Oracle) { Some(OracleContext::new(&p)?) } else { None };
    let results: Vec<crate::Result<CurrentResult<S>>> =
        jobs.par_iter().map(|job| evaluate(a, &p, &w, *job, ctx.as_ref())).collect();
    Ok(results.into_iter().collect::<crate::Result<Vec<_>>>()?)
}

fn evaluate<S: CliScalar>(
    a: &RunArgs,
    p: &Point<S>,
    w: &S,
    job: Job,
    ctx: Option<&OracleContext<S>>,
) -> crate::Result<CurrentResult<S>> {
    let mut note = None;
    let value = match (a.obs, job.route) {
        (ObsArg::X, route) => {
            let k = job.k.expect("X always carries k");
            let fixed = is_fixed_point(&p.z[k - 1]);
            if fixed {
                note = Some("antisymmetry fixed point".to_string());
            }
            match route {
                Route::Oracle => ctx.expect("oracle context").x(k)?,
                Route::Closed if fixed => S::zero(),
                Route::Closed => closed_value(a, p, &mut note, |q| closed_x(k, q))?,
            }
        }
        (ObsArg::Y, Route::Oracle) => ctx.expect("oracle context").y(w, job.k.unwrap_or(1))?,
        (ObsArg::Y, Route::Closed) => closed_value(a, p, &mut note, |q| closed_y(w, q))?,
    };
    Ok(CurrentResult {
        kind: match a.obs {
            ObsArg::X => Observable::X,
            ObsArg::Y => Observable::Y,
        },
        k: job.k,
        w: (a.obs == ObsArg::Y).then(|| w.clone()),
        size: p.size(),
        route: job.route,
        params: p.clone(),
        value,
        note,
    })
}

fn closed_value<S: Scalar>(
    a: &RunArgs,
    p: &Point<S>,
    note: &mut Option<String>,
    f: impl Fn(&Point<S>) -> crate::Result<S>,
) -> crate::Result<S> {
    match a.homogeneous_eps {
        None => f(p),
        Some(h) => {
            let (v, correction) = richardson(p, h, f)?;
            *note = Some(format!("extrapolated from steps {h:e}, {:e}, {:e}; last correction {correction:.3e}", h / 2.0, h / 4.0));
            Ok(v)
        }
    }
}

fn emit_results(a: &RunArgs, format: Format, profile: bool) -> CliResult<()> {
    if let Some(h) = a.homogeneous_eps {
        if !(h > 0.0 && h < 1.0) {
            return Err(CliError::Usage(format!("--homogeneous-eps {h} outside (0, 1)")));
        }
    }
    let text = match a.backend {
        Backend::Exact => render(&compute_all::<CycloNum>(a, profile)?, format)?,
        Backend::Complex => render(&compute_all::<ComplexApprox>(a, profile)?, format)?,
    };
    write_output(a.out.as_ref(), &text)
}

fn render<S: CliScalar>(rows: &[CurrentResult<S>], format: Format) -> CliResult<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(rows).map_err(std::io::Error::other)? + "\n"),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let [va, vb] = S::VALUE_COLUMNS;
            w.write_record(["kind", "k", "w", "L", "route", va, vb, "zeta1", "zeta2", "z", "note"]).map_err(csv_err)?;
            for r in rows {
                let [a, b] = r.value.value_parts();
                let z: Vec<String> = r.params.z.iter().map(|x| x.to_string()).collect();
                w.write_record([
                    format!("{:?}", r.kind),
                    r.k.map(|k| k.to_string()).unwrap_or_default(),
                    r.w.as_ref().map(|x| x.to_string()).unwrap_or_default(),
                    r.size.to_string(),
                    route_name(r.route).to_string(),
                    a,
                    b,
                    r.params.zeta1.to_string(),
                    r.params.zeta2.to_string(),
                    z.join(";"),
                    r.note.clone().unwrap_or_default(),
                ])
                .map_err(csv_err)?;
            }
            finish_csv(w)
        }
    }
}

fn route_name(r: Route) -> &'static str {
    match r {
        Route::Oracle => "oracle",
        Route::Closed => "closed",
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> CliResult<String> {
    let bytes = w.into_inner().map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(std::io::Error::other(e)))
}

fn write_output(out: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

// ------------------------------------------------------- verify

/// Parses `all` or a comma-separated list of suite names.
pub fn parse_suites(s: &str) -> CliResult<Vec<Suite>> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(Suite::DEFAULT.to_vec());
    }
    let mut v: Vec<Suite> = s.split(',').map(|t| t.trim().parse::<Suite>()).collect::<crate::Result<_>>().map_err(spec_err)?;
    v.sort();
    v.dedup();
    Ok(v)
}

#[derive(Serialize)]
struct VerifySummary<'a> {
    passed: usize,
    failed: usize,
    skipped: &'a [String],
    checks: &'a [Check],
}

/// Runs the requested suites over the width range in a fixed order.
pub fn verify_report(suites: &[Suite], sizes: IndexRange, seed: u64, points: Option<usize>, unsafe_size: bool) -> Report {
    let mut report = Report::default();
    for &s in suites {
        let widths: Vec<usize> = if s.width_independent() { vec![0] } else { sizes.iter().collect() };
        for size in widths {
            let cfg = SuiteConfig { size, seed, points: points.unwrap_or(s.default_points()) };
            report.extend(if unsafe_size { run_suite_uncapped(s, cfg) } else { run_suite(s, cfg) });
        }
    }
    report
}

fn verify(a: &VerifyArgs) -> CliResult<()> {
    let suites = parse_suites(&a.suite)?;
    let report = verify_report(&suites, a.size, a.seed, a.points, a.unsafe_size);
    if report.checks.is_empty() {
        return Err(CliError::Usage(format!("nothing to run: {}", report.skipped.join("; "))));
    }
    let failed = report.failures().count();
    let text = match a.format {
        Format::Json => {
            let summary =
                VerifySummary { passed: report.passed_count(), failed, skipped: &report.skipped, checks: &report.checks };
            serde_json::to_string_pretty(&summary).map_err(std::io::Error::other)? + "\n"
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["suite", "name", "L", "point", "passed", "detail"]).map_err(csv_err)?;
            for c in &report.checks {
                w.write_record([
                    c.suite.name().to_string(),
                    c.name.clone(),
                    c.size.to_string(),
                    c.point.clone(),
                    c.passed.to_string(),
                    c.detail.clone().unwrap_or_default(),
                ])
                .map_err(csv_err)?;
            }
            finish_csv(w)?
        }
    };
    write_output(a.out.as_ref(), &text)?;
    eprintln!("{}", SummaryLine(&report));
    if failed > 0 {
        return Err(CliError::Failures(failed));
    }
    Ok(())
}

struct SummaryLine<'a>(&'a Report);

impl fmt::Display for SummaryLine<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.0;
        write!(f, "{} passed, {} failed", r.passed_count(), r.failures().count())?;
        if !r.skipped.is_empty() {
            write!(f, ", skipped: {}", r.skipped.join("; "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("loopcurrent").chain(args.iter().copied())).unwrap()
    }

    fn run_args(cli: &Cli) -> &RunArgs {
        match &cli.command {
            Command::Compute(a) | Command::Profile(a) => a,
            Command::Verify(_) => panic!("not a run"),
        }
    }

    #[test]
    fn ranges_parse() {
        assert_eq!("1..3".parse::<IndexRange>().unwrap(), IndexRange { start: 1, end: 3 });
        assert_eq!("2".parse::<IndexRange>().unwrap(), IndexRange { start: 2, end: 2 });
        assert!("3..1".parse::<IndexRange>().is_err());
        assert!("a..b".parse::<IndexRange>().is_err());
    }

    #[test]
    fn both_routes_agree_and_pair_up() {
        let cli = parse(&["compute", "--L", "2", "--obs", "X", "--k", "1..2", "--route", "both", "--seed", "5"]);
        let rows = compute_all::<CycloNum>(run_args(&cli), false).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].value, rows[2].value);
        assert_eq!(rows[1].value, rows[3].value);
    }

    #[test]
    fn fixed_point_is_zero_with_note() {
        let cli = parse(&["compute", "--L", "2", "--obs", "X", "--k", "1", "--z", "1,2"]);
        let rows = compute_all::<CycloNum>(run_args(&cli), false).unwrap();
        assert!(rows[0].value.is_zero());
        assert_eq!(rows[0].note.as_deref(), Some("antisymmetry fixed point"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(main_with_args(["loopcurrent", "compute", "--L", "13"]), 2);
        assert_eq!(main_with_args(["loopcurrent", "compute", "--L", "2", "--z", "1,2,3"]), 2);
        assert_eq!(main_with_args(["loopcurrent", "verify", "--suite", "nope"]), 2);
        assert_eq!(main_with_args(["loopcurrent", "frobnicate"]), 2);
        // zero rapidity: a domain error
        assert_eq!(main_with_args(["loopcurrent", "compute", "--L", "2", "--z", "0,2", "--out", "/dev/null"]), 3);
        assert_eq!(main_with_args(["loopcurrent", "verify", "--suite", "appendixB-generic-q", "--out", "/dev/null"]), 1);
        assert_eq!(main_with_args(["loopcurrent", "verify", "--suite", "appendixB", "--out", "/dev/null"]), 0);
    }

    #[test]
    fn profile_csv_is_deterministic() {
        let cli = parse(&["profile", "--L", "3", "--seed", "9"]);
        let a = run_args(&cli);
        let first = render(&compute_all::<CycloNum>(a, true).unwrap(), Format::Csv).unwrap();
        let second = render(&compute_all::<CycloNum>(a, true).unwrap(), Format::Csv).unwrap();
        assert_eq!(first, second);
        assert_eq!(first.lines().count(), 4);
        assert!(first.starts_with("kind,k,w,L,route,value_a,value_b"));
    }

    #[test]
    fn suites_filter() {
        assert_eq!(parse_suites("qkz").unwrap(), vec![Suite::Qkz]);
        assert_eq!(parse_suites("all").unwrap().len(), Suite::DEFAULT.len());
        let r = verify_report(&[Suite::Qkz], IndexRange { start: 2, end: 2 }, 3, Some(1), false);
        assert!(r.checks.iter().all(|c| c.suite == Suite::Qkz) && r.all_passed());
    }
}
