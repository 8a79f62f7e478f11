//! Command-line front end: loads configs, runs experiments and writes
//! hash-stamped CSV/JSON artifacts.

pub mod artifacts;
pub mod suites;

use artifacts::{config_hash, Artifacts};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;
use suites::Check;
use zetashift::io::{parse_bytes, parse_document, EvalRecord, FunctionDoc, ScanDoc, TorusDoc};
use zetashift::scanner::{default_checkpoints, scan_with, CHUNK_BLOCKS};
use zetashift::special::{
    hurwitz_zeta, matsumoto_series, mean_square, periodic_hurwitz_zeta, riemann_zeta_strip,
    smoothed_periodic_zeta_n, smoothed_phi_n, AccuracyBudget, MatsumotoSpec, PeriodicSequence, SmoothingParam,
};
use zetashift::torus::{birkhoff_average, orbit_vs_haar, BirkhoffSetup, OrbitTarget, OrbitVsHaar};
use zetashift::Error;

/// The bundled verification config.
pub const VERIFY_CONFIG: &str = include_str!("../../../configs/verify.toml");

#[derive(Debug, Parser)]
#[command(name = "zetashift", version, about = "Discrete-shift experiments for zeta-type functions")]
pub struct Cli {
    /// Output directory.
    #[arg(long, env = "ZETASHIFT_OUT", default_value = "out", global = true)]
    pub out: PathBuf,
    /// Worker threads (default: hardware parallelism).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Seed for every random choice; overrides config seeds.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a function at one point.
    Eval(EvalArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Count good shifts.
    Scan(ScanArgs),
    /// Density of good shifts at checkpoints.
    Density(DensityArgs),
    /// Orbit and Haar statistics on the torus.
    Torus(TorusArgs),
    /// Normalized mean square on a vertical line.
    MeanSquare(MeanSquareArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Function document (TOML or JSON).
    #[arg(long)]
    pub spec: PathBuf,
    /// The point `sigma,t`.
    #[arg(long, allow_hyphen_values = true)]
    pub at: String,
    /// Evaluate the smoothed series with this length.
    #[arg(long)]
    pub smoothed: Option<u64>,
    /// Exponent of the smoothing weight.
    #[arg(long, default_value_t = 1.0)]
    pub sigma_star1: f64,
    /// Absolute tolerance.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Identities,
    Claims,
    Torus,
    MeanSquare,
    Smoothing,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    /// Verification config; the bundled one by default.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// A previous `summary.json` to compare against.
    #[arg(long)]
    pub baseline: Option<PathBuf>,
    /// Exit 1 when any check fails.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides `n`.
    #[arg(long)]
    pub n: Option<u64>,
    /// Overrides `epsilon`.
    #[arg(long)]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Ascending checkpoints, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub checkpoints: Vec<u64>,
    /// Overrides `epsilon`.
    #[arg(long)]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TorusArgs {
    #[arg(long)]
    pub config: PathBuf,
}

#[derive(Debug, Args)]
pub struct MeanSquareArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub sigma0: f64,
    /// Upper end of the integration range.
    #[arg(long = "T")]
    pub t_max: f64,
    /// Quadrature step.
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

/// Failure of a command run, with its exit status.
#[derive(Debug)]
pub struct Failure {
    pub kind: String,
    pub message: String,
    pub code: i32,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Config(_)) { 2 } else { 1 };
        Self { kind: e.kind().to_string(), message: e.to_string(), code }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self { kind: "IoError".into(), message: e.to_string(), code: 1 }
    }
}

fn config_err(msg: impl Into<String>) -> Failure {
    Error::Config(msg.into()).into()
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    error: &'a str,
    message: &'a str,
}

fn error_json(f: &Failure) -> String {
    serde_json::to_string(&ErrorRecord { error: &f.kind, message: &f.message }).unwrap_or_default()
}

/// Parses arguments, runs the command and returns the exit status. Errors
/// go to stderr as one JSON line and, when possible, to `error.json`.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let f = config_err(e.to_string().trim().to_string());
            eprintln!("{}", error_json(&f));
            return f.code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("{}", error_json(&f));
            if std::fs::create_dir_all(&cli.out).is_ok() {
                let _ = std::fs::write(cli.out.join("error.json"), format!("{}\n", error_json(&f)));
            }
            f.code
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, Failure> {
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(config_err("--workers must be at least 1"));
        }
        // A pool that already exists (repeated in-process runs) is kept.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
    }
    let start = Instant::now();
    let (name, artifacts, code) = match &cli.command {
        Command::Eval(a) => ("eval", cmd_eval(cli, a)?, 0),
        Command::Verify(a) => {
            let (art, code) = cmd_verify(cli, a)?;
            ("verify", art, code)
        }
        Command::Scan(a) => ("scan", cmd_scan(cli, a)?, 0),
        Command::Density(a) => ("density", cmd_density(cli, a)?, 0),
        Command::Torus(a) => ("torus", cmd_torus(cli, a)?, 0),
        Command::MeanSquare(a) => ("mean-square", cmd_mean_square(cli, a)?, 0),
    };
    #[derive(Serialize)]
    struct Timing<'a> {
        command: &'a str,
        wall_seconds: f64,
        workers: usize,
    }
    let timing = Timing { command: name, wall_seconds: start.elapsed().as_secs_f64(), workers: rayon::current_num_threads() };
    artifacts.write_json("timing.json", &timing)?;
    Ok(code)
}

fn load<D: serde::de::DeserializeOwned>(path: &Path) -> Result<(D, Vec<u8>), Failure> {
    let raw = std::fs::read(path).map_err(|e| Failure { kind: "IoError".into(), message: format!("{}: {e}", path.display()), code: 1 })?;
    Ok((parse_bytes(path, &raw)?, raw))
}

fn artifacts(cli: &Cli, command: &str, raw: &[u8], overrides: &str, seed: u64) -> Result<Artifacts, Failure> {
    let hash = config_hash(&[command.as_bytes(), raw, overrides.as_bytes(), &seed.to_le_bytes()]);
    Ok(Artifacts::new(&cli.out, hash, seed)?)
}

fn parse_point(text: &str) -> Result<Complex64, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || config_err(format!("--at expects `sigma,t`, got `{text}`"));
    if parts.len() != 2 {
        return Err(bad());
    }
    let sigma: f64 = parts[0].parse().map_err(|_| bad())?;
    let t: f64 = parts[1].parse().map_err(|_| bad())?;
    Ok(Complex64::new(sigma, t))
}

fn budget(tol: f64) -> Result<AccuracyBudget<f64>, Failure> {
    AccuracyBudget::new(tol, 50_000_000).map_err(|e| config_err(e.to_string()))
}

/// Evaluates a function document, optionally through its smoothed series.
fn evaluate(
    f: &FunctionDoc,
    s: Complex64,
    smooth: Option<SmoothingParam<f64>>,
    acc: AccuracyBudget<f64>,
) -> zetashift::Result<zetashift::special::Evaluation<f64>> {
    match (f, smooth) {
        (FunctionDoc::Riemann, None) if s.re > 0.0 && s.re < 1.0 => riemann_zeta_strip(s, acc),
        (FunctionDoc::Riemann, None) => hurwitz_zeta(s, 1.0, acc),
        (FunctionDoc::Riemann, Some(sm)) => smoothed_phi_n(s, &MatsumotoSpec::riemann(), sm, acc),
        (FunctionDoc::Hurwitz { a }, None) => hurwitz_zeta(s, *a, acc),
        (FunctionDoc::Hurwitz { a }, Some(sm)) => {
            smoothed_periodic_zeta_n(s, *a, &PeriodicSequence::from_real(&[1.0])?, sm, acc)
        }
        (FunctionDoc::Periodic(d), None) => periodic_hurwitz_zeta(s, d.alpha, &d.to_sequence()?, acc),
        (FunctionDoc::Periodic(d), Some(sm)) => smoothed_periodic_zeta_n(s, d.alpha, &d.to_sequence()?, sm, acc),
        (FunctionDoc::Matsumoto(d), None) => matsumoto_series(s, &d.to_spec()?, acc),
        (FunctionDoc::Matsumoto(d), Some(sm)) => smoothed_phi_n(s, &d.to_spec()?, sm, acc),
    }
}

fn cmd_eval(cli: &Cli, a: &EvalArgs) -> Result<Artifacts, Failure> {
    let (doc, raw): (FunctionDoc, _) = load(&a.spec)?;
    let s = parse_point(&a.at)?;
    let smooth = match a.smoothed {
        Some(n) => Some(SmoothingParam::new(n, a.sigma_star1).map_err(|e| config_err(e.to_string()))?),
        None => None,
    };
    let acc = budget(a.tol)?;
    let overrides = format!("at={},{};smoothed={:?};sigma_star1={};tol={}", s.re, s.im, a.smoothed, a.sigma_star1, a.tol);
    let art = artifacts(cli, "eval", &raw, &overrides, cli.seed.unwrap_or(0))?;
    let v = evaluate(&doc, s, smooth, acc)?;
    let record = EvalRecord { s: [s.re, s.im], value: [v.value.re, v.value.im], abs_err_bound: v.abs_err_bound };
    art.write_json("eval.json", &record)?;
    println!("{}", serde_json::to_string(&record).unwrap_or_default());
    Ok(art)
}

/// The verification config: every section is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyDoc {
    #[serde(default)]
    pub identities: Option<suites::IdentitiesDoc>,
    #[serde(default)]
    pub claims: Option<suites::ClaimsDoc>,
    #[serde(default)]
    pub torus: Option<suites::TorusSuiteDoc>,
    #[serde(default)]
    pub mean_square: Option<suites::MeanSquareDoc>,
    #[serde(default)]
    pub smoothing: Option<suites::SmoothingDoc>,
}

impl VerifyDoc {
    pub fn bundled() -> Self {
        parse_document(VERIFY_CONFIG, false).expect("bundled verification config parses")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifySummary {
    pub suite: String,
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub smoothing_series: Vec<(u64, f64)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub regressions: Vec<String>,
    #[serde(default)]
    pub config_hash: String,
}

/// Runs the selected suites of a verification config.
pub fn run_suites(doc: &VerifyDoc, suite: Suite, seed: Option<u64>) -> zetashift::Result<(Vec<Check>, Vec<(u64, f64)>)> {
    let want = |s: Suite| suite == s || suite == Suite::All;
    let mut checks = Vec::new();
    let mut series = Vec::new();
    let missing = |name: &str| Error::Config(format!("verification config has no [{name}] section"));
    if want(Suite::Identities) {
        let mut d = doc.identities.clone().ok_or_else(|| missing("identities"))?;
        d.seed = seed.unwrap_or(d.seed);
        checks.extend(suites::identities(&d)?);
    }
    if want(Suite::Claims) {
        checks.extend(suites::claims(doc.claims.as_ref().ok_or_else(|| missing("claims"))?)?);
    }
    if want(Suite::Torus) {
        let mut d = doc.torus.clone().ok_or_else(|| missing("torus"))?;
        d.seed = seed.unwrap_or(d.seed);
        checks.extend(suites::torus(&d)?);
    }
    if want(Suite::MeanSquare) {
        checks.extend(suites::mean_squares(doc.mean_square.as_ref().ok_or_else(|| missing("mean_square"))?)?);
    }
    if want(Suite::Smoothing) {
        let (c, s) = suites::smoothing(doc.smoothing.as_ref().ok_or_else(|| missing("smoothing"))?)?;
        checks.extend(c);
        series = s;
    }
    Ok((checks, series))
}

fn cmd_verify(cli: &Cli, a: &VerifyArgs) -> Result<(Artifacts, i32), Failure> {
    let (doc, raw): (VerifyDoc, Vec<u8>) = match &a.config {
        Some(p) => load(p)?,
        None => (VerifyDoc::bundled(), VERIFY_CONFIG.as_bytes().to_vec()),
    };
    let suite_name = serde_json::to_value(a.suite).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    let seed_override = cli.seed.map(|s| s.to_string()).unwrap_or_default();
    let art = artifacts(cli, "verify", &raw, &format!("suite={suite_name};seed={seed_override}"), cli.seed.unwrap_or(0))?;
    let baseline: Option<VerifySummary> = match &a.baseline {
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            let b: VerifySummary = serde_json::from_str(&text).map_err(|e| config_err(format!("{}: {e}", p.display())))?;
            if b.config_hash != art.config_hash() {
                return Err(config_err(format!(
                    "refusing to compare: baseline config_hash {} differs from {}",
                    b.config_hash,
                    art.config_hash()
                )));
            }
            Some(b)
        }
        None => None,
    };
    // Validate every requested section before running anything.
    let want = |s: Suite| a.suite == s || a.suite == Suite::All;
    for (s, present, name) in [
        (Suite::Identities, doc.identities.is_some(), "identities"),
        (Suite::Claims, doc.claims.is_some(), "claims"),
        (Suite::Torus, doc.torus.is_some(), "torus"),
        (Suite::MeanSquare, doc.mean_square.is_some(), "mean_square"),
        (Suite::Smoothing, doc.smoothing.is_some(), "smoothing"),
    ] {
        if want(s) && !present {
            return Err(config_err(format!("verification config has no [{name}] section")));
        }
    }
    let (checks, series) = run_suites(&doc, a.suite, cli.seed)?;
    let passed = checks.iter().filter(|c| c.passed).count();
    let failed = checks.len() - passed;
    let regressions: Vec<String> = match &baseline {
        Some(b) => checks
            .iter()
            .filter(|c| !c.passed && b.checks.iter().any(|o| o.name == c.name && o.passed))
            .map(|c| c.name.clone())
            .collect(),
        None => Vec::new(),
    };
    let summary = VerifySummary {
        suite: suite_name,
        checks: checks.clone(),
        passed,
        failed,
        smoothing_series: series.clone(),
        regressions: regressions.clone(),
        config_hash: String::new(),
    };
    art.write_json("summary.json", &summary)?;
    art.write_csv(
        "checks.csv",
        &["name", "passed", "measured", "tolerance"],
        checks.iter().map(|c| vec![csv_field(&c.name), c.passed.to_string(), fmt(c.measured), fmt(c.tolerance)]),
    )?;
    if !series.is_empty() {
        art.write_csv("smoothing.csv", &["n", "avg_rho"], series.iter().map(|(n, r)| vec![n.to_string(), fmt(*r)]))?;
    }
    for c in &checks {
        println!("{} {} measured={} tolerance={}", if c.passed { "PASS" } else { "FAIL" }, c.name, fmt(c.measured), fmt(c.tolerance));
    }
    println!("{passed} passed, {failed} failed");
    let code = if !regressions.is_empty() || (a.strict && failed > 0) { 1 } else { 0 };
    Ok((art, code))
}

/// Shortest round-trip representation.
fn fmt(x: f64) -> String {
    format!("{x:?}")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Serialize)]
struct ScanSummary {
    n: u64,
    epsilon: f64,
    hits: u64,
    density: f64,
    density_num: u64,
    density_den: u64,
    best_k: u64,
    best_distance: f64,
    borderline: u64,
}

fn scan_doc(path: &Path, n: Option<u64>, epsilon: Option<f64>) -> Result<(ScanDoc, Vec<u8>, String), Failure> {
    let (mut doc, raw): (ScanDoc, _) = load(path)?;
    if let Some(n) = n {
        doc.n = n;
    }
    if let Some(e) = epsilon {
        doc.epsilon = e;
    }
    Ok((doc, raw, format!("n={n:?};epsilon={epsilon:?}")))
}

fn write_scan(art: &Artifacts, doc: &ScanDoc, checkpoints: &[u64]) -> Result<(), Failure> {
    let cfg = doc.to_config()?;
    let r = scan_with(&cfg, checkpoints, CHUNK_BLOCKS)?;
    let summary = ScanSummary {
        n: r.n,
        epsilon: doc.epsilon,
        hits: r.hits,
        density: r.density,
        density_num: r.density_num,
        density_den: r.density_den,
        best_k: r.best_k,
        best_distance: r.best_distance,
        borderline: r.borderline,
    };
    art.write_json("summary.json", &summary)?;
    art.write_csv(
        "density.csv",
        &["N", "hits", "density"],
        r.density_series.iter().map(|d| vec![d.n.to_string(), d.hits.to_string(), fmt(d.density)]),
    )?;
    art.write_csv(
        "hits.csv",
        &["k", "dist1", "dist2"],
        r.hit_rows.iter().map(|h| vec![h.k.to_string(), fmt(h.dist1), fmt(h.dist2)]),
    )?;
    println!("hits={} density={}/{} borderline={} best_k={}", r.hits, r.density_num, r.density_den, r.borderline, r.best_k);
    Ok(())
}

fn cmd_scan(cli: &Cli, a: &ScanArgs) -> Result<Artifacts, Failure> {
    let (doc, raw, overrides) = scan_doc(&a.config, a.n, a.epsilon)?;
    doc.to_config()?;
    let art = artifacts(cli, "scan", &raw, &overrides, cli.seed.unwrap_or(0))?;
    let mut checkpoints = doc.checkpoints.clone().unwrap_or_else(|| default_checkpoints(doc.n));
    checkpoints.retain(|&c| c <= doc.n);
    if checkpoints.last() != Some(&doc.n) {
        checkpoints.push(doc.n);
    }
    write_scan(&art, &doc, &checkpoints)?;
    Ok(art)
}

fn cmd_density(cli: &Cli, a: &DensityArgs) -> Result<Artifacts, Failure> {
    if a.checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(config_err("--checkpoints must be strictly ascending"));
    }
    let last = *a.checkpoints.last().ok_or_else(|| config_err("--checkpoints is empty"))?;
    let (doc, raw, overrides) = scan_doc(&a.config, Some(last), a.epsilon)?;
    doc.to_config()?;
    let overrides = format!("{overrides};checkpoints={:?}", a.checkpoints);
    let art = artifacts(cli, "density", &raw, &overrides, cli.seed.unwrap_or(0))?;
    write_scan(&art, &doc, &a.checkpoints)?;
    Ok(art)
}

#[derive(Serialize)]
struct FunctionalRow {
    name: String,
    time_avg: [f64; 2],
    space_avg: [f64; 2],
    stderr: f64,
    space_mean: [f64; 2],
    geometric_bound: f64,
}

#[derive(Serialize)]
struct TorusSummary {
    n: u64,
    samples: usize,
    ks: f64,
    functionals: Vec<FunctionalRow>,
}

fn cmd_torus(cli: &Cli, a: &TorusArgs) -> Result<Artifacts, Failure> {
    let (doc, raw): (TorusDoc, _) = load(&a.config)?;
    let seed = cli.seed.unwrap_or(doc.seed);
    let art = artifacts(cli, "torus", &raw, "", seed)?;
    let coeffs = PeriodicSequence::new(doc.coeffs.clone()).map_err(|e| config_err(e.to_string()))?;
    let spec = match &doc.spec {
        Some(d) => d.to_spec()?,
        None => MatsumotoSpec::riemann(),
    };
    let smooth = doc.smoothing.map(|s| s.to_param()).transpose()?;
    let point = Complex64::new(doc.point[0], doc.point[1]);
    let report = orbit_vs_haar(&OrbitVsHaar {
        target: OrbitTarget::Periodic { alpha: doc.alpha, coeffs: coeffs.clone() },
        point,
        shift: doc.shift.clone(),
        n: doc.n,
        samples: doc.samples,
        smooth,
        truncation: doc.truncation,
        seed,
        acc: doc.eval_budget,
    })?;
    let setup = BirkhoffSetup {
        shift: doc.shift.clone(),
        alpha: doc.alpha,
        truncation: doc.truncation,
        point,
        coeffs,
        spec,
        phi_terms: doc.phi_terms,
        samples: doc.samples,
        seed,
    };
    let functionals = doc
        .functionals
        .iter()
        .map(|f| {
            let r = birkhoff_average(f, &setup, doc.n)?;
            Ok(FunctionalRow {
                name: f.clone(),
                time_avg: [r.time_avg.re, r.time_avg.im],
                space_avg: [r.space_avg.re, r.space_avg.im],
                stderr: r.stderr,
                space_mean: [r.space_mean.re, r.space_mean.im],
                geometric_bound: r.geometric_bound,
            })
        })
        .collect::<zetashift::Result<Vec<_>>>()?;
    let rows = |v: &[Complex64]| -> Vec<Vec<String>> {
        v.iter().enumerate().map(|(i, z)| vec![i.to_string(), fmt(z.re), fmt(z.im)]).collect()
    };
    art.write_csv("orbit.csv", &["index", "re", "im"], rows(&report.orbit_values))?;
    art.write_csv("haar.csv", &["index", "re", "im"], rows(&report.haar_values))?;
    art.write_json("summary.json", &TorusSummary { n: doc.n, samples: doc.samples, ks: report.ks, functionals })?;
    println!("ks={}", fmt(report.ks));
    Ok(art)
}

#[derive(Serialize)]
struct MeanSquareSummary {
    sigma0: f64,
    t_max: f64,
    step: f64,
    mean_square: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    reference: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    relative_deviation: Option<f64>,
}

fn cmd_mean_square(cli: &Cli, a: &MeanSquareArgs) -> Result<Artifacts, Failure> {
    let (doc, raw): (FunctionDoc, _) = load(&a.spec)?;
    let acc = budget(a.tol)?;
    let overrides = format!("sigma0={};T={};step={};tol={}", a.sigma0, a.t_max, a.step, a.tol);
    let art = artifacts(cli, "mean-square", &raw, &overrides, cli.seed.unwrap_or(0))?;
    let v = mean_square(|s| Ok(evaluate(&doc, s, None, acc)?.value), a.sigma0, a.t_max, a.step)?;
    // For the Riemann instance with sigma0 > 1/2 the limit is zeta(2 sigma0).
    let reference = match doc {
        FunctionDoc::Riemann if a.sigma0 > 0.5 => Some(hurwitz_zeta(Complex64::new(2.0 * a.sigma0, 0.0), 1.0, acc)?.value.re),
        _ => None,
    };
    let summary = MeanSquareSummary {
        sigma0: a.sigma0,
        t_max: a.t_max,
        step: a.step,
        mean_square: v,
        reference,
        relative_deviation: reference.map(|r| (v - r).abs() / r),
    };
    art.write_json("summary.json", &summary)?;
    println!("mean_square={}", fmt(v));
    Ok(art)
}
