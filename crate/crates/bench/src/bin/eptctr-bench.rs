use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::Parser;
use eptctr_bench::{emit_report, run_suite, write_traces, Format, Overrides, TIME_LIMIT_ENV};

/// Benchmark the continuation solver against the Newton trust-region and
/// BFGS line-search baselines.
#[derive(Debug, Parser)]
#[command(name = "eptctr-bench", version, after_help = after_help())]
struct Cli {
    /// Solvers to run: eptctr, trust-region, bfgs or all (comma-separated or repeated).
    #[arg(long, default_value = "all")]
    method: Vec<String>,
    /// Catalog problems to run, or `all` for the mandatory suite.
    #[arg(long, default_value = "all")]
    problem: Vec<String>,
    /// Dimension for parametric problems (fixed-size problems ignore it).
    #[arg(long)]
    n: Option<usize>,
    /// Stop once the gradient infinity norm is at most this.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Iteration cap (default 10 n + 1000).
    #[arg(long)]
    max_iter: Option<usize>,
    /// Initial time step of the continuation solver.
    #[arg(long, default_value_t = 1e-2)]
    dt0: f64,
    /// Start from c·ones(n) instead of each problem's default.
    #[arg(long, allow_hyphen_values = true)]
    x0_scalar: Option<f64>,
    /// Write per-iteration traces as CSV to this path.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Output format: csv, json or markdown.
    #[arg(long, default_value = "csv")]
    format: String,
    /// Wall-clock limit per run in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Number of runs to execute concurrently.
    #[arg(long, default_value_t = 1)]
    parallel: usize,
}

fn after_help() -> String {
    format!("Without --time-limit the per-run limit is ${TIME_LIMIT_ENV} seconds, or 300 if unset.")
}

fn run(cli: Cli) -> Result<(), ExitCode> {
    let usage = |e: &dyn std::fmt::Display| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    };
    let format: Format = cli.format.parse().map_err(|e| usage(&e))?;
    let time_limit = match cli.time_limit {
        Some(s) if s.is_finite() && s > 0.0 => Some(Duration::from_secs_f64(s)),
        Some(s) => return Err(usage(&format!("--time-limit must be a positive number of seconds, got {s}"))),
        None => None,
    };
    let overrides = Overrides {
        n: cli.n,
        grad_tol: Some(cli.tol),
        max_iter: cli.max_iter,
        dt0: Some(cli.dt0),
        x0_scalar: cli.x0_scalar,
        time_limit,
        trace: cli.trace.is_some(),
        parallel: cli.parallel,
    };
    let methods: Vec<&str> = cli.method.iter().map(String::as_str).collect();
    let problems: Vec<&str> = cli.problem.iter().map(String::as_str).collect();
    let report = run_suite(&methods, &problems, &overrides).map_err(|e| usage(&e))?;

    let io_error = |what: &str, e: io::Error| {
        eprintln!("error: {what}: {e}");
        ExitCode::from(1)
    };
    if let Some(path) = &cli.trace {
        let file = File::create(path).map_err(|e| io_error(&path.display().to_string(), e))?;
        write_traces(&report.traces, BufWriter::new(file)).map_err(|e| io_error(&path.display().to_string(), e))?;
    }
    let stdout = io::stdout().lock();
    let mut out = BufWriter::new(stdout);
    emit_report(&report, format, &mut out).and_then(|()| out.flush()).map_err(|e| io_error("stdout", e))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}
