//! Command-line front end: argument types, command runners and exit codes.
//!
//! Exit codes: `decide` and `counterexample` return 0 (holds), 10 (fails) or
//! 20 (uncertified); every command returns 2 on unreadable or invalid input
//! and 1 on a numerical failure or an exceeded `--tolerance`.

pub mod report;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::closure::{closure_1d, closure_multid, decompose_measure, ClosedSubgroup, ClosureConfig, ClosureError, HyperplaneCertificate};
use crate::decider::{decide, DecideConfig, LiouvilleVerdict};
use crate::measure::{parse_document, support_of, LevyMeasure, MeasureError, SymmetryMode};
use crate::numerics::{
    fourier_symbol, parse_test_function, propagate, sample_points, EvaluatorConfig, NumericsError, OperatorEvaluator, ProbeConfig,
    TestFunction,
};

use report::{
    num, ClosureCommandReport, CounterexampleCommandReport, CounterexampleReport, CertificateReport, DecomposeReport, EvaluationReport,
    Header, VerdictReport, VerifyReport,
};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_FAILS: i32 = 10;
pub const EXIT_UNCERTIFIED: i32 = 20;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Read { path: String, message: String },
    #[error("invalid measure spec {path}: {source}")]
    Spec { path: String, source: MeasureError },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Closure(#[from] ClosureError),
    #[error("cannot write {path}: {message}")]
    Write { path: String, message: String },
    #[error("serialization failed: {0}")]
    Serialize(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Read { .. } | CliError::Spec { .. } | CliError::Argument(_) => EXIT_INPUT,
            CliError::Numerics(NumericsError::UnknownFunction(_) | NumericsError::Config(_) | NumericsError::Dimension(_)) => EXIT_INPUT,
            _ => EXIT_RUNTIME,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// TOML-style structured text.
    #[value(alias = "toml")]
    Report,
    #[value(name = "json-like", alias = "json")]
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "report")]
    pub format: Format,
    /// Seed for sampled evaluation points.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Compensation radius of the operator.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub r0: f64,
    /// Gauss–Legendre nodes per radial panel.
    #[arg(long = "quad-nodes", global = true, default_value_t = 8)]
    pub quad_nodes: usize,
    /// Propagation iterations.
    #[arg(long = "n-max", global = true, default_value_t = 40)]
    pub n_max: usize,
    /// Propagation window radius.
    #[arg(long = "R", global = true, default_value_t = 5.0)]
    pub radius: f64,
    /// Stop propagating once the covering radius drops below this.
    #[arg(long = "target-delta", global = true, default_value_t = 0.05)]
    pub target_delta: f64,
    /// Override the truncation of every atom sequence.
    #[arg(long = "truncation-N", global = true)]
    pub truncation: Option<u64>,
    /// Reject atoms listed without their mirror instead of completing them.
    #[arg(long = "strict-symmetry", global = true)]
    pub strict_symmetry: bool,
}

impl CommonArgs {
    fn canonical(&self) -> String {
        format!(
            "format={:?};seed={};r0={};quad_nodes={};n_max={};R={};target_delta={};truncation={:?};strict_symmetry={}",
            self.format,
            self.seed,
            num(self.r0),
            self.quad_nodes,
            self.n_max,
            num(self.radius),
            num(self.target_delta),
            self.truncation,
            self.strict_symmetry
        )
    }

    fn probe(&self) -> ProbeConfig {
        ProbeConfig { radius: self.radius, n_max: self.n_max, target_delta: self.target_delta, ..ProbeConfig::default() }
    }

    fn evaluator(&self) -> EvaluatorConfig {
        EvaluatorConfig { r0: self.r0, quad_nodes: self.quad_nodes, ..EvaluatorConfig::default() }
    }
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Decide the Liouville property; exit 0 holds, 10 fails, 20 uncertified.
    Decide { spec: PathBuf },
    /// Closed subgroup generated by the support.
    Closure { spec: PathBuf },
    /// Split the measure along the cosets of the closure.
    Decompose { spec: PathBuf },
    /// Bounded nonconstant solution, checked at seeded points.
    Counterexample {
        spec: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long = "sample-radius", default_value_t = 5.0)]
        sample_radius: f64,
        /// CSV table `x…, lambda, U, LU, bound`.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Iterate A_{n+1} = A_n ∪ (A_n + S) and emit `n, points, delta` as CSV.
    Propagate { spec: PathBuf },
    /// Evaluate the operator on a built-in function at seeded points.
    Verify {
        spec: PathBuf,
        /// `cos`, `cos:ξ1,ξ2,…`, `x1^2-x2^2`, `x1*x2`, `bump[:width]` or `counterexample`.
        #[arg(long, default_value = "cos")]
        function: String,
        #[arg(long, default_value_t = 10)]
        points: usize,
        #[arg(long = "sample-radius", default_value_t = 5.0)]
        sample_radius: f64,
        /// Exit 1 when the largest residual exceeds this.
        #[arg(long)]
        tolerance: Option<f64>,
        /// CSV table `x…, value, bound, residual`.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Decide { .. } => "decide",
            Command::Closure { .. } => "closure",
            Command::Decompose { .. } => "decompose",
            Command::Counterexample { .. } => "counterexample",
            Command::Propagate { .. } => "propagate",
            Command::Verify { .. } => "verify",
        }
    }

    fn spec(&self) -> &Path {
        match self {
            Command::Decide { spec }
            | Command::Closure { spec }
            | Command::Decompose { spec }
            | Command::Counterexample { spec, .. }
            | Command::Propagate { spec }
            | Command::Verify { spec, .. } => spec,
        }
    }

    /// Flags that change the output, beyond the common ones.
    fn canonical(&self) -> String {
        match self {
            Command::Counterexample { samples, sample_radius, .. } => format!("samples={samples};sample_radius={}", num(*sample_radius)),
            Command::Verify { function, points, sample_radius, tolerance, .. } => format!(
                "function={function};points={points};sample_radius={};tolerance={}",
                num(*sample_radius),
                tolerance.map(num).unwrap_or_default()
            ),
            _ => String::new(),
        }
    }
}

#[derive(Debug, Clone, Parser)]
#[command(name = "liouville", version, about = "Liouville property of symmetric Lévy operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// Text produced by a command and the code to exit with.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

/// Read and validate a spec, applying `--truncation-N` and `--strict-symmetry`.
pub fn load_measure(path: &Path, common: &CommonArgs) -> Result<(LevyMeasure, String), CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Read { path: path.display().to_string(), message: e.to_string() })?;
    let spec_err = |source| CliError::Spec { path: path.display().to_string(), source };
    let mut doc = parse_document(&text).map_err(spec_err)?;
    if let Some(n) = common.truncation {
        if n == 0 {
            return Err(CliError::Argument("--truncation-N must be positive".into()));
        }
        for s in &mut doc.sequences {
            s.truncation = n;
        }
    }
    if common.strict_symmetry {
        doc.symmetry_mode = SymmetryMode::Strict;
    }
    let mu = doc.into_measure().map_err(spec_err)?;
    Ok((mu, text))
}

fn header(cli: &Cli, text: &str) -> Header {
    let mut h = Sha256::new();
    for part in [cli.command.name(), &cli.common.canonical(), &cli.command.canonical(), text] {
        h.update(part.as_bytes());
        h.update([0u8]);
    }
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    Header {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: cli.command.name().into(),
        input_digest: hex::encode(h.finalize()),
        timestamp: format!("unix:{secs}"),
    }
}

fn render<T: Serialize>(value: &T, format: Format) -> Result<String, CliError> {
    match format {
        Format::Report => toml::to_string(value).map_err(|e| CliError::Serialize(e.to_string())),
        Format::Json => serde_json::to_string_pretty(value).map(|s| s + "\n").map_err(|e| CliError::Serialize(e.to_string())),
    }
}

fn verdict_code(v: &LiouvilleVerdict) -> i32 {
    match v.status() {
        "holds" => EXIT_HOLDS,
        "fails" => EXIT_FAILS,
        _ => EXIT_UNCERTIFIED,
    }
}

fn closure_of(mu: &LevyMeasure, common: &CommonArgs) -> ClosedSubgroup {
    let support = support_of(mu);
    if mu.dimension == 1 {
        closure_1d(&support, &mu.basis)
    } else {
        closure_multid(&support, &mu.basis, &ClosureConfig { probe: common.probe() })
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Write { path: path.display().to_string(), message: e.to_string() })
}

fn csv_table(header: &[String], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let ser = |e: csv::Error| CliError::Serialize(e.to_string());
    w.write_record(header).map_err(ser)?;
    for r in rows {
        w.write_record(r).map_err(ser)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Serialize(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Serialize(e.to_string()))
}

fn coordinate_names(d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("x{i}")).collect()
}

/// Run a command without touching stdout; `--out` and `--csv` files are written.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let common = &cli.common;
    let (mu, text) = load_measure(cli.command.spec(), common)?;
    let header = header(cli, &text);
    let basis = &mu.basis;
    log::info!("{} on {} (d = {})", cli.command.name(), cli.command.spec().display(), mu.dimension);
    let outcome = match &cli.command {
        Command::Decide { .. } => {
            let v = decide(&mu, &DecideConfig { closure: ClosureConfig { probe: common.probe() } });
            log::info!("verdict {} via {}", v.status(), v.route.name());
            Outcome { code: verdict_code(&v), output: render(&VerdictReport::new(header, &v, basis), common.format)? }
        }
        Command::Closure { .. } => {
            let g = closure_of(&mu, common);
            let mut notes = Vec::new();
            let cert = if g.is_dense() {
                None
            } else {
                match HyperplaneCertificate::from_closure(&g, basis) {
                    Ok(c) => Some(c),
                    Err(e) => {
                        notes.push(e.to_string());
                        None
                    }
                }
            };
            let r = ClosureCommandReport::new(header, &g, cert.as_ref(), basis, notes);
            Outcome { code: 0, output: render(&r, common.format)? }
        }
        Command::Decompose { .. } => {
            let g = closure_of(&mu, common);
            let r = if g.is_dense() {
                DecomposeReport::dense(header, &g, basis)
            } else {
                DecomposeReport::new(header, &decompose_measure(&mu, &g)?, basis)
            };
            Outcome { code: 0, output: render(&r, common.format)? }
        }
        Command::Counterexample { samples, sample_radius, csv, .. } => {
            let v = decide(&mu, &DecideConfig { closure: ClosureConfig { probe: common.probe() } });
            let mut r = CounterexampleCommandReport {
                header,
                verdict: v.status().into(),
                certificate: v.certificate.as_ref().map(|c| CertificateReport::new(c, basis)),
                counterexample: v.counterexample.as_ref().map(CounterexampleReport::new),
                samples: 0,
                max_abs_value: None,
                max_bound: None,
                notes: v.notes.clone(),
            };
            match &v.counterexample {
                Some(u) => {
                    let ev = OperatorEvaluator::new(&mu, common.evaluator())?;
                    let xs = sample_points(mu.dimension, *samples, *sample_radius, common.seed);
                    let (mut max_v, mut max_b) = (0.0f64, 0.0f64);
                    let mut rows = Vec::with_capacity(xs.len());
                    for x in &xs {
                        let e = ev.eval(u, x)?;
                        max_v = max_v.max(e.value.abs());
                        max_b = max_b.max(e.bound);
                        let mut row: Vec<String> = x.iter().map(|c| num(*c)).collect();
                        row.extend([num(u.lambda(x)), num(u.value(x)), num(e.value), num(e.bound)]);
                        rows.push(row);
                    }
                    r.samples = xs.len();
                    r.max_abs_value = Some(num(max_v));
                    r.max_bound = Some(num(max_b));
                    if let Some(path) = csv {
                        let mut head = coordinate_names(mu.dimension);
                        head.extend(["lambda", "U", "LU", "bound"].map(String::from));
                        write_file(path, &csv_table(&head, &rows)?)?;
                    }
                }
                None => r.notes.push("no counterexample: the closure is dense or the certificate is missing".into()),
            }
            Outcome { code: verdict_code(&v), output: render(&r, common.format)? }
        }
        Command::Propagate { .. } => {
            let support = support_of(&mu);
            if support.finite_points.is_empty() {
                return Err(NumericsError::EmptySupport.into());
            }
            if support.contains_interval_or_ball || !support.affine_pieces.is_empty() {
                log::warn!("continuous parts are ignored; propagating the atoms only");
            }
            let p = propagate(&support.finite_points, mu.dimension, basis, &common.probe())?;
            log::info!("propagation stopped after {} steps (reached = {:?}, capped = {})", p.history.len().saturating_sub(1), p.reached, p.capped);
            let mut buf = Vec::new();
            p.write_csv(&mut buf)?;
            Outcome { code: 0, output: String::from_utf8(buf).map_err(|e| CliError::Serialize(e.to_string()))? }
        }
        Command::Verify { function, points, sample_radius, tolerance, csv, .. } => {
            let u: Box<dyn TestFunction> = if function.trim() == "counterexample" {
                let v = decide(&mu, &DecideConfig { closure: ClosureConfig { probe: common.probe() } });
                match v.counterexample {
                    Some(u) => Box::new(u),
                    None => return Err(CliError::Argument(format!("no counterexample exists: Liouville verdict is {}", v.status()))),
                }
            } else {
                parse_test_function(function, mu.dimension)?
            };
            let symbol = match u.plane_wave_frequency() {
                Some(xi) => fourier_symbol(&mu, xi),
                None => None,
            };
            let ev = OperatorEvaluator::new(&mu, common.evaluator())?;
            let xs = sample_points(mu.dimension, *points, *sample_radius, common.seed);
            let (mut max_v, mut max_b, mut max_r) = (0.0f64, 0.0f64, 0.0f64);
            let mut evaluations = Vec::with_capacity(xs.len());
            let mut rows = Vec::with_capacity(xs.len());
            for x in &xs {
                let e = ev.eval(u.as_ref(), x)?;
                let reference = symbol.map(|s| s * u.value(x)).unwrap_or(0.0);
                max_v = max_v.max(e.value.abs());
                max_b = max_b.max(e.bound);
                max_r = max_r.max((e.value - reference).abs());
                let mut row: Vec<String> = x.iter().map(|c| num(*c)).collect();
                row.extend([num(e.value), num(e.bound), num(e.value - reference)]);
                rows.push(row);
                evaluations.push(EvaluationReport::new(x, &e, reference));
            }
            let within = tolerance.is_none_or(|t| max_r <= t);
            let r = VerifyReport {
                header,
                function: u.describe(),
                r0: num(common.r0),
                quad_nodes: common.quad_nodes,
                seed: common.seed,
                sample_radius: num(*sample_radius),
                points: xs.len(),
                max_abs_value: num(max_v),
                max_bound: num(max_b),
                reference: if symbol.is_some() { "fourier_symbol" } else { "zero" }.into(),
                max_abs_residual: num(max_r),
                tolerance: tolerance.map(num),
                within_tolerance: within,
                evaluations,
            };
            if let Some(path) = csv {
                let mut head = coordinate_names(mu.dimension);
                head.extend(["value", "bound", "residual"].map(String::from));
                write_file(path, &csv_table(&head, &rows)?)?;
            }
            Outcome { code: if within { 0 } else { EXIT_RUNTIME }, output: render(&r, common.format)? }
        }
    };
    Ok(outcome)
}

/// Execute, write the output to `--out` or stdout, and return the exit code.
pub fn run(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok(outcome) => {
            let written = match &cli.common.out {
                Some(path) => write_file(path, &outcome.output),
                None => std::io::stdout()
                    .write_all(outcome.output.as_bytes())
                    .map_err(|e| CliError::Write { path: "stdout".into(), message: e.to_string() }),
            };
            match written {
                Ok(()) => outcome.code,
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Drop the `timestamp` line so two reports can be compared byte for byte.
pub fn strip_timestamp(report: &str) -> String {
    report
        .lines()
        .filter(|l| {
            let t = l.trim_start();
            !(t.starts_with("timestamp =") || t.starts_with("\"timestamp\":"))
        })
        .map(|l| format!("{l}\n"))
        .collect()
}
