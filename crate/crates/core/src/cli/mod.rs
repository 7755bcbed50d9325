//! Command-line surface: `eig`, `det`, `trace` and `verify`.
//!
//! Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 a certified
//! residual order missed its bound (or a verify check failed).

pub mod cache;
pub mod config;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::ode::SolverConfig;
use crate::potential::PotentialModel;
use crate::spectrum::{eigenvalues, fredholm_a_log, product_crosscheck, EigRecord, EigenCache, MAX_EIGEN_COUNT};
use crate::traceid::{log_grid, report, ExpansionReport, MAX_FIT_ORDER};

pub use cache::{CacheState, EigenStore};
pub use config::{OutputFormat, RunConfig, CACHE_ENV};
pub use verify::{run_suite, Check, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_ORDER_FAILED: i32 = 3;
pub const OUTPUT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Cosh,
    Exp,
    Harmonic,
}

impl From<ModelArg> for PotentialModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Cosh => PotentialModel::Cosh,
            ModelArg::Exp => PotentialModel::Exp,
            ModelArg::Harmonic => PotentialModel::Harmonic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DetMethod {
    Shoot,
    Product,
}

#[derive(Debug, Parser)]
#[command(name = "mathieu-trace", version, about = "Spectral determinants and trace identities for growing potentials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON settings file (solver_tol, quad_tol, format, cache, threads).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Relative tolerance of the ODE integrator.
    #[arg(long, global = true)]
    pub solver_tol: Option<f64>,
    /// Error target of the asymptotic seed.
    #[arg(long, global = true)]
    pub quad_tol: Option<f64>,
    /// Output format; defaults to JSON for `.json` output files, else CSV.
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Eigenvalue cache file.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Neither read nor write the eigenvalue cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lowest eigenvalues with parity labels.
    Eig {
        #[arg(value_enum)]
        model: ModelArg,
        /// Number of eigenvalues.
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u16).range(1..=MAX_EIGEN_COUNT as i64))]
        count: u16,
        /// Output file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Determinant a(λ) relative to λ_ref.
    Det {
        #[arg(value_enum)]
        model: ModelArg,
        /// Spectral parameter λ.
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long, value_enum, default_value = "shoot")]
        method: DetMethod,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        lambda_ref: f64,
        /// Eigenvalues used by the product method.
        #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u16).range(2..=MAX_EIGEN_COUNT as i64))]
        count: u16,
        /// Terms of the semiclassical tail kept by the product method.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
        tail_order: u8,
        /// Output file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Expansion report of log a(λ) in powers of 1/ν.
    Trace {
        #[arg(value_enum)]
        model: ModelArg,
        /// `a:b:n`, n log-spaced points from a to b.
        #[arg(long)]
        nu_grid: Option<String>,
        /// Highest coefficient c_N reported.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=MAX_FIT_ORDER as i64))]
        order: u8,
        /// Also fit ν^{-n} log ν terms.
        #[arg(long)]
        log_basis: bool,
        /// Output file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the built-in check suites.
    Verify {
        #[arg(value_enum, default_value = "all")]
        suite: Suite,
    },
}

enum Failure {
    Usage(String),
    Numerical(String),
    Order(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) | Error::OrderTooHigh { .. } | Error::NonPositiveArgument(_) | Error::ReferenceAtEigenvalue(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure::Numerical(format!("i/o: {e}"))
}

/// Parses `a:b:n`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid '{s}' is not of the form a:b:n"));
    }
    let a: f64 = parts[0].parse().map_err(|_| format!("bad grid start '{}'", parts[0]))?;
    let b: f64 = parts[1].parse().map_err(|_| format!("bad grid end '{}'", parts[1]))?;
    let n: usize = parts[2].parse().map_err(|_| format!("bad grid count '{}'", parts[2]))?;
    log_grid(a, b, n).map_err(|e| e.to_string())
}

fn default_grid(model: PotentialModel) -> &'static str {
    match model {
        PotentialModel::Cosh => "6:48:8",
        PotentialModel::Exp => "5:80:12",
        PotentialModel::Harmonic => "4:40:10",
    }
}

struct Context<'a> {
    run: RunConfig,
    solver: SolverConfig,
    store: Option<EigenStore>,
    pool: rayon::ThreadPool,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Context<'_> {
    fn emit(&mut self, text: &str, out: Option<&Path>) -> Result<(), Failure> {
        match out {
            Some(p) => std::fs::write(p, text).map_err(io_failure),
            None => self.stdout.write_all(text.as_bytes()).map_err(io_failure),
        }
    }

    fn note(&mut self, msg: &str) {
        let _ = writeln!(self.stderr, "{msg}");
    }

    fn eigen(&mut self, model: PotentialModel, count: usize) -> Result<Vec<EigRecord>, Failure> {
        let tol = self.run.solver_tol;
        if let Some(store) = self.store.clone() {
            if let CacheState::Corrupt(why) = store.state() {
                let msg = format!("warning: eigenvalue cache {} is corrupt ({why}); rebuilding", store.path().display());
                self.note(&msg);
            }
            if let Some(r) = store.lookup(model, tol, count) {
                return Ok(r);
            }
        }
        let solver = &self.solver;
        let records = self.pool.install(|| eigenvalues(model, count, solver))?;
        if let Some(store) = self.store.clone() {
            if let Err(e) = store.store(EigenCache::new(model, tol, records.clone())) {
                let msg = format!("warning: cannot write eigenvalue cache {}: {e}", store.path().display());
                self.note(&msg);
            }
        }
        Ok(records)
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(v).map(|s| s + "\n").map_err(|e| Failure::Numerical(e.to_string()))
}

fn csv_text<R: IntoIterator<Item = Vec<String>>>(header: &[&str], rows: R) -> Result<String, Failure> {
    let fail = |e: csv::Error| Failure::Numerical(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(fail)?;
    for r in rows {
        w.write_record(&r).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Numerical(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::Numerical(e.to_string()))
}

#[derive(Serialize)]
struct DetOutput {
    schema: u32,
    model: PotentialModel,
    method: DetMethod,
    lambda: f64,
    lambda_ref: f64,
    a: f64,
    log_abs_a: f64,
    sign: f64,
    /// Error bar on `log |a|` (product method).
    log_error: Option<f64>,
    eigenvalues_used: Option<usize>,
}

fn cmd_eig(ctx: &mut Context, model: PotentialModel, count: usize, out: Option<&Path>, fmt: OutputFormat) -> Result<(), Failure> {
    let records = ctx.eigen(model, count)?;
    let text = match fmt {
        OutputFormat::Json => to_json(&EigenCache::new(model, ctx.run.solver_tol, records))?,
        OutputFormat::Csv => csv_text(
            &["index", "parity", "lambda", "residual"],
            records.iter().map(|r| {
                let parity = serde_json::to_value(r.parity).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
                vec![r.index.to_string(), parity, r.lambda.to_string(), r.residual.to_string()]
            }),
        )?,
    };
    ctx.emit(&text, out)
}

#[allow(clippy::too_many_arguments)]
fn cmd_det(
    ctx: &mut Context,
    model: PotentialModel,
    lambda: f64,
    method: DetMethod,
    lambda_ref: f64,
    count: usize,
    tail_order: usize,
    out: Option<&Path>,
    fmt: OutputFormat,
) -> Result<(), Failure> {
    let result = match method {
        DetMethod::Shoot => {
            let solver = &ctx.solver;
            let a = ctx.pool.install(|| fredholm_a_log(model, lambda, lambda_ref, solver))?;
            DetOutput {
                schema: OUTPUT_SCHEMA,
                model,
                method,
                lambda,
                lambda_ref,
                a: a.value(),
                log_abs_a: a.log_abs,
                sign: a.sign,
                log_error: None,
                eigenvalues_used: None,
            }
        }
        DetMethod::Product => {
            if lambda_ref != 0.0 {
                return Err(Failure::Usage("the product method is normalized at lambda_ref = 0".into()));
            }
            let eigs = ctx.eigen(model, count)?;
            let p = product_crosscheck(model, lambda, &eigs, tail_order)?;
            DetOutput {
                schema: OUTPUT_SCHEMA,
                model,
                method,
                lambda,
                lambda_ref,
                a: p.value(),
                log_abs_a: p.log_value,
                sign: p.sign,
                log_error: Some(p.log_error),
                eigenvalues_used: Some(eigs.len()),
            }
        }
    };
    let text = match fmt {
        OutputFormat::Json => to_json(&result)?,
        OutputFormat::Csv => {
            let mut header = vec!["model", "method", "lambda", "lambda_ref", "a", "log_abs_a", "sign"];
            let mut row = vec![
                model.name().to_string(),
                format!("{method:?}").to_lowercase(),
                lambda.to_string(),
                lambda_ref.to_string(),
                result.a.to_string(),
                result.log_abs_a.to_string(),
                result.sign.to_string(),
            ];
            if let Some(e) = result.log_error {
                header.push("log_error");
                row.push(e.to_string());
            }
            csv_text(&header, [row])?
        }
    };
    ctx.emit(&text, out)
}

fn cmd_trace(
    ctx: &mut Context,
    model: PotentialModel,
    grid: &str,
    order: usize,
    log_basis: bool,
    out: Option<&Path>,
    fmt: OutputFormat,
) -> Result<(), Failure> {
    let nu = parse_grid(grid).map_err(Failure::Usage)?;
    let solver = &ctx.solver;
    let r: ExpansionReport = ctx.pool.install(|| report(model, &nu, order, log_basis, solver))?;
    let text = match fmt {
        OutputFormat::Json => to_json(&r)?,
        OutputFormat::Csv => r.to_csv()?,
    };
    ctx.emit(&text, out)?;
    for (k, slope) in r.residual_orders.iter().enumerate() {
        let status = match (r.certified[k], *slope <= ExpansionReport::order_bound(k)) {
            (false, _) => "uncertified",
            (true, true) => "ok",
            (true, false) => "FAILED",
        };
        let msg = format!("residual order {k}: {slope:.3} (bound {:.1}) {status}", ExpansionReport::order_bound(k));
        ctx.note(&msg);
    }
    let failed = r.failed_orders();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Order(format!("certified residual orders {failed:?} miss their bounds")))
    }
}

fn cmd_verify(ctx: &mut Context, suite: Suite) -> Result<(), Failure> {
    let solver = &ctx.solver;
    let checks = ctx.pool.install(|| run_suite(suite, solver));
    let mut text = String::new();
    for c in &checks {
        text.push_str(&c.line());
        text.push('\n');
    }
    ctx.emit(&text, None)?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Numerical(format!("{failed} of {} checks failed", checks.len())))
    }
}

fn settings(cli: &Cli) -> Result<RunConfig, String> {
    let mut run = match &cli.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    if let Some(t) = cli.solver_tol {
        run.solver_tol = t;
    }
    if let Some(t) = cli.quad_tol {
        run.quad_tol = t;
    }
    if let Some(n) = cli.threads {
        run.threads = n;
    }
    run.validate()?;
    Ok(run)
}

fn execute(cli: &Cli, ctx: &mut Context) -> Result<(), Failure> {
    match &cli.command {
        Command::Eig { model, count, out } => {
            let fmt = ctx.run.output_format(cli.format, out.as_deref());
            cmd_eig(ctx, (*model).into(), *count as usize, out.as_deref(), fmt)
        }
        Command::Det { model, lambda, method, lambda_ref, count, tail_order, out } => {
            let fmt = ctx.run.output_format(cli.format, out.as_deref());
            cmd_det(ctx, (*model).into(), *lambda, *method, *lambda_ref, *count as usize, *tail_order as usize, out.as_deref(), fmt)
        }
        Command::Trace { model, nu_grid, order, log_basis, out } => {
            let model: PotentialModel = (*model).into();
            let fmt = ctx.run.output_format(cli.format, out.as_deref());
            let grid = nu_grid.clone().unwrap_or_else(|| default_grid(model).to_string());
            cmd_trace(ctx, model, &grid, *order as usize, *log_basis, out.as_deref(), fmt)
        }
        Command::Verify { suite } => cmd_verify(ctx, *suite),
    }
}

/// Runs the command line `args` (including the program name) and returns
/// the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let run = match settings(&cli) {
        Ok(r) => r,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let store = (!cli.no_cache).then(|| EigenStore::new(run.cache_path(cli.cache.as_deref())));
    let solver = run.solver();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(run.threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot start worker pool: {e}");
            return EXIT_NUMERICAL;
        }
    };
    let mut ctx = Context { run, solver, store, pool, stdout, stderr };
    let outcome = execute(&cli, &mut ctx);
    match outcome {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(ctx.stderr, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Numerical(m)) => {
            let _ = writeln!(ctx.stderr, "error: {m}");
            EXIT_NUMERICAL
        }
        Err(Failure::Order(m)) => {
            let _ = writeln!(ctx.stderr, "error: {m}");
            EXIT_ORDER_FAILED
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["mathieu-trace", "--no-cache"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn grid_syntax() {
        assert_eq!(parse_grid("5:80:5").unwrap()[2], 20.0);
        assert!(parse_grid("5:80").is_err());
        assert!(parse_grid("80:5:4").is_err());
        assert!(parse_grid("a:5:4").is_err());
    }

    #[test]
    fn unknown_model_is_usage_error() {
        let (code, _, err) = call(&["eig", "bogus"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("cosh") && err.contains("exp") && err.contains("harmonic"), "{err}");
    }

    #[test]
    fn order_out_of_range() {
        assert_eq!(call(&["trace", "cosh", "--order", "99"]).0, EXIT_USAGE);
    }

    #[test]
    fn tolerance_out_of_range() {
        assert_eq!(call(&["det", "cosh", "--lambda", "0", "--solver-tol", "1e-3"]).0, EXIT_USAGE);
    }

    #[test]
    fn det_at_reference_is_one() {
        let (code, out, _) = call(&["det", "cosh", "--lambda", "0", "--format", "json"]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["a"].as_f64().unwrap(), 1.0);
        assert_eq!(v["schema"].as_u64().unwrap(), 1);
    }

    #[test]
    fn harmonic_eigenvalue_table() {
        let (code, out, _) = call(&["eig", "harmonic", "--count", "5"]);
        assert_eq!(code, EXIT_OK);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "index,parity,lambda,residual");
        for (i, l) in lines[1..].iter().enumerate() {
            let lambda: f64 = l.split(',').nth(2).unwrap().parse().unwrap();
            assert!((lambda - (2 * i + 1) as f64).abs() < 1e-8);
        }
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }
}
