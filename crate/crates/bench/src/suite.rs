//! Resolving names and executing (problem, method) runs.

use std::time::Duration;

use eptctr::problems::{self, Dimension};
use eptctr::{
    bfgs_linesearch, eptctr_solve, trust_region_newton, BaselineConfig, Problem, SolveReport, SolverConfig, Vector,
};
use rayon::prelude::*;

use crate::record::{environment_note, BenchmarkRecord, ConfigSnapshot, Method, SuiteReport, TraceRow};
use crate::{suggest, UsageError};

pub const DEFAULT_TIME_LIMIT_S: f64 = 300.0;

/// Environment variable that replaces [`DEFAULT_TIME_LIMIT_S`].
pub const TIME_LIMIT_ENV: &str = "EPTCTR_TIME_LIMIT_S";

/// The per-run limit when none is given explicitly: `EPTCTR_TIME_LIMIT_S`
/// if it parses as a positive number of seconds, otherwise 300 s.
pub fn default_time_limit() -> Duration {
    std::env::var(TIME_LIMIT_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<f64>().ok())
        .filter(|s| s.is_finite() && *s > 0.0)
        .map(Duration::from_secs_f64)
        .unwrap_or(Duration::from_secs_f64(DEFAULT_TIME_LIMIT_S))
}

/// Per-suite adjustments to the solver defaults.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    /// Dimension for parametric problems (default 1000).
    pub n: Option<usize>,
    pub grad_tol: Option<f64>,
    pub max_iter: Option<usize>,
    /// Initial time step; only the continuation solver has one.
    pub dt0: Option<f64>,
    /// Start every run from `c·ones(n)` instead of the problem default.
    pub x0_scalar: Option<f64>,
    /// Per-run wall-clock limit; `None` uses [`default_time_limit`].
    pub time_limit: Option<Duration>,
    /// Record per-iteration traces into [`SuiteReport::traces`].
    pub trace: bool,
    /// Number of worker threads; 0 or 1 runs sequentially.
    pub parallel: usize,
}

struct Job {
    problem: Problem<f64>,
    method: Method,
}

fn expand<'a>(names: &'a [&'a str], all: &[&'a str]) -> Vec<&'a str> {
    let mut out: Vec<&str> = Vec::new();
    for name in names.iter().flat_map(|n| n.split(',')).map(str::trim).filter(|n| !n.is_empty()) {
        if name.eq_ignore_ascii_case("all") {
            out.extend(all.iter().copied());
        } else {
            out.push(name);
        }
    }
    out
}

fn resolve_problem(name: &str, n: Option<usize>) -> Result<Problem<f64>, UsageError> {
    let entry = problems::entry(name).ok_or_else(|| UsageError::UnknownProblem {
        name: name.to_string(),
        suggestions: suggest(&problems::normalize_name(name), problems::names()),
    })?;
    // an explicit n only applies to parametric problems
    let n = match entry.dimension {
        Dimension::Fixed(_) => None,
        Dimension::Parametric { .. } => n,
    };
    problems::by_name(entry.name, n).map_err(|e| UsageError::InvalidDimension(e.to_string()))
}

fn solver_config(o: &Overrides, limit: Duration) -> SolverConfig<f64> {
    let mut cfg = SolverConfig::default();
    if let Some(tol) = o.grad_tol {
        cfg.grad_tol = tol;
    }
    if let Some(dt0) = o.dt0 {
        cfg.dt0 = dt0;
    }
    cfg.max_iter = o.max_iter;
    cfg.record_trace = o.trace;
    cfg.time_limit = Some(limit);
    cfg
}

fn baseline_config(o: &Overrides, limit: Duration) -> BaselineConfig<f64> {
    let mut cfg = BaselineConfig::default();
    if let Some(tol) = o.grad_tol {
        cfg.grad_tol = tol;
    }
    cfg.max_iter = o.max_iter;
    cfg.record_trace = o.trace;
    cfg.time_limit = Some(limit);
    cfg
}

fn execute(job: &Job, o: &Overrides, limit: Duration) -> (BenchmarkRecord, Vec<TraceRow>) {
    let p = job.problem.as_ref();
    let x0 = match o.x0_scalar {
        Some(c) => Vector::filled(p.dim(), c),
        None => p.default_x0(),
    };
    // configurations were validated up front, so these cannot fail
    let report: SolveReport<f64> = match job.method {
        Method::Eptctr => eptctr_solve(p, x0, &solver_config(o, limit)),
        Method::TrustRegion => trust_region_newton(p, x0, &baseline_config(o, limit)),
        Method::Bfgs => bfgs_linesearch(p, x0, &baseline_config(o, limit)),
    }
    .expect("configuration validated before the runs started");
    let traces = report
        .trace
        .iter()
        .flatten()
        .map(|t| TraceRow {
            problem: p.name().to_string(),
            method: job.method.name().to_string(),
            k: t.k,
            f: t.f,
            f_trial: t.f_trial,
            g_inf: t.g_inf,
            dt: t.dt,
            rho: t.rho,
            accepted: t.accepted,
            mode: t.mode.to_string(),
        })
        .collect();
    let record = BenchmarkRecord {
        problem: p.name().to_string(),
        n: p.dim(),
        method: job.method.name().to_string(),
        iterations: report.iterations,
        wall_time_s: report.wall_time.as_secs_f64(),
        final_g_inf: report.g_inf_norm,
        f_final: report.f_final,
        status: report.status.as_str().to_string(),
    };
    (record, traces)
}

/// Runs every requested method on every requested problem.
///
/// Names may be comma-separated lists; `all` selects the mandatory suite
/// (for problems) or every method. Records come back sorted by
/// `(problem, method)` whatever the completion order.
pub fn run_suite(methods: &[&str], problem_names: &[&str], o: &Overrides) -> Result<SuiteReport, UsageError> {
    let all_methods: Vec<&str> = Method::ALL.iter().map(|m| m.name()).collect();
    let method_list: Vec<Method> =
        expand(methods, &all_methods).into_iter().map(str::parse).collect::<Result<_, _>>()?;
    let mandatory = problems::mandatory_names();
    let problem_list = expand(problem_names, &mandatory);
    if method_list.is_empty() {
        return Err(UsageError::Empty("methods"));
    }
    if problem_list.is_empty() {
        return Err(UsageError::Empty("problems"));
    }

    let limit = o.time_limit.unwrap_or_else(default_time_limit);
    solver_config(o, limit).validate().map_err(|e| UsageError::InvalidConfig(e.to_string()))?;
    baseline_config(o, limit).validate().map_err(|e| UsageError::InvalidConfig(e.to_string()))?;
    if let Some(c) = o.x0_scalar {
        if !c.is_finite() {
            return Err(UsageError::InvalidConfig("x0 scalar must be finite".into()));
        }
    }

    let mut jobs = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for name in &problem_list {
        for &method in &method_list {
            let problem = resolve_problem(name, o.n)?;
            // repeated names on the command line collapse to one run
            if seen.insert((problem.name().to_string(), method)) {
                jobs.push(Job { problem, method });
            }
        }
    }
    jobs.sort_by(|a, b| (a.problem.name(), a.method.name()).cmp(&(b.problem.name(), b.method.name())));

    let results: Vec<(BenchmarkRecord, Vec<TraceRow>)> = if o.parallel > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(o.parallel)
            .build()
            .map_err(|e| UsageError::InvalidConfig(e.to_string()))?;
        // indexed collect keeps job order regardless of completion order
        pool.install(|| jobs.par_iter().map(|j| execute(j, o, limit)).collect())
    } else {
        jobs.iter().map(|j| execute(j, o, limit)).collect()
    };

    let (records, traces): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    Ok(SuiteReport {
        records,
        config: ConfigSnapshot {
            n: o.n.unwrap_or(problems::DEFAULT_LARGE_N),
            grad_tol: o.grad_tol.unwrap_or(SolverConfig::<f64>::default().grad_tol),
            max_iter: o.max_iter,
            dt0: o.dt0.unwrap_or(SolverConfig::<f64>::default().dt0),
            x0_scalar: o.x0_scalar,
            time_limit_s: limit.as_secs_f64(),
            parallel: o.parallel.max(1),
        },
        environment: environment_note(),
        traces: traces.into_iter().flatten().collect(),
    })
}
