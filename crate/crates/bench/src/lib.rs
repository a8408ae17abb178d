//! # eptctr-bench
//!
//! Runs the continuation solver and the baselines over catalog problems and
//! renders the results as CSV, JSON or a markdown comparison table.
//!
//! ```
//! use eptctr_bench::{run_suite, Overrides};
//!
//! let overrides = Overrides { n: Some(100), ..Overrides::default() };
//! let report = run_suite(&["eptctr"], &["sphere"], &overrides).unwrap();
//! assert_eq!(report.records.len(), 1);
//! assert!(report.records[0].converged());
//! ```

mod emit;
mod record;
mod suite;

use thiserror::Error;

pub use emit::{emit_report, write_traces, Format};
pub use record::{environment_note, BenchmarkRecord, ConfigSnapshot, Method, SuiteReport, TraceRow};
pub use suite::{default_time_limit, run_suite, Overrides, DEFAULT_TIME_LIMIT_S, TIME_LIMIT_ENV};

/// Bad command-line input; the process exits non-zero.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum UsageError {
    #[error("unknown problem `{name}`{}", did_you_mean(.suggestions))]
    UnknownProblem { name: String, suggestions: Vec<String> },
    #[error("unknown method `{name}`{}", did_you_mean(.suggestions))]
    UnknownMethod { name: String, suggestions: Vec<String> },
    #[error("unknown format `{0}`; expected csv, json or markdown")]
    UnknownFormat(String),
    #[error("{0}")]
    InvalidDimension(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("no {0} selected")]
    Empty(&'static str),
}

fn did_you_mean(suggestions: &[String]) -> String {
    if suggestions.is_empty() {
        String::new()
    } else {
        format!("; did you mean: {}?", suggestions.join(", "))
    }
}

/// Up to three known names closest to `name`, best first.
pub(crate) fn suggest<'a>(name: &str, known: impl IntoIterator<Item = &'a str>) -> Vec<String> {
    let mut scored: Vec<(f64, &str)> =
        known.into_iter().map(|k| (strsim::jaro_winkler(name, k), k)).filter(|(score, _)| *score > 0.7).collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(b.1)));
    scored.into_iter().take(3).map(|(_, k)| k.to_string()).collect()
}
