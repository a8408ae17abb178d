//! Rendering a [`SuiteReport`] as CSV, JSON or markdown.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::str::FromStr;

use crate::record::{BenchmarkRecord, Method, SuiteReport, TraceRow};
use crate::UsageError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Markdown,
}

impl FromStr for Format {
    type Err = UsageError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "markdown" | "md" => Ok(Format::Markdown),
            _ => Err(UsageError::UnknownFormat(s.to_string())),
        }
    }
}

pub(crate) const CSV_HEADER: [&str; 8] =
    ["problem", "n", "method", "iterations", "wall_time_s", "final_g_inf", "f_final", "status"];

const TRACE_HEADER: [&str; 10] = ["problem", "method", "k", "f", "f_trial", "g_inf", "dt", "rho", "accepted", "mode"];

/// Writes the report's records in `format`.
///
/// CSV always starts with the header row, even for an empty report; JSON is
/// an array of record objects; markdown is one table row per problem with a
/// column per method.
pub fn emit_report<W: Write>(report: &SuiteReport, format: Format, out: W) -> io::Result<()> {
    match format {
        Format::Csv => write_csv(&report.records, &CSV_HEADER, out),
        Format::Json => write_json(&report.records, out),
        Format::Markdown => write_markdown(report, out),
    }
}

/// Writes per-iteration trace rows as CSV (header always present).
pub fn write_traces<W: Write>(rows: &[TraceRow], out: W) -> io::Result<()> {
    write_csv(rows, &TRACE_HEADER, out)
}

fn write_csv<W: Write, R: serde::Serialize>(rows: &[R], header: &[&str], out: W) -> io::Result<()> {
    // the header is written by hand so an empty table still has one
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()
}

fn write_json<W: Write>(records: &[BenchmarkRecord], mut out: W) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut out, records)?;
    writeln!(out)
}

fn method_columns(records: &[BenchmarkRecord]) -> Vec<String> {
    let mut known: Vec<String> =
        Method::ALL.iter().map(|m| m.name().to_string()).filter(|m| records.iter().any(|r| &r.method == m)).collect();
    let mut other: Vec<String> = records.iter().map(|r| r.method.clone()).filter(|m| !known.contains(m)).collect();
    other.sort();
    other.dedup();
    known.extend(other);
    known
}

fn cell(r: &BenchmarkRecord) -> String {
    if r.converged() {
        format!("{} it, {:.3} s", r.iterations, r.wall_time_s)
    } else {
        format!("{} after {} it (‖g‖∞ {:.1e})", r.status, r.iterations, r.final_g_inf)
    }
}

fn write_markdown<W: Write>(report: &SuiteReport, mut out: W) -> io::Result<()> {
    let c = &report.config;
    writeln!(out, "# Benchmark results")?;
    writeln!(out)?;
    writeln!(out, "- gradient tolerance {:e}, dt0 {:e}, time limit {} s per run", c.grad_tol, c.dt0, c.time_limit_s)?;
    match c.x0_scalar {
        Some(x0) => writeln!(out, "- start point {x0}·ones(n)")?,
        None => writeln!(out, "- default start points")?,
    }
    writeln!(out, "- environment: {}", report.environment)?;
    writeln!(out)?;

    let methods = method_columns(&report.records);
    let mut by_problem: BTreeMap<&str, (usize, BTreeMap<&str, &BenchmarkRecord>)> = BTreeMap::new();
    for r in &report.records {
        let entry = by_problem.entry(&r.problem).or_insert_with(|| (r.n, BTreeMap::new()));
        entry.1.insert(&r.method, r);
    }

    write!(out, "| problem | n |")?;
    for m in &methods {
        write!(out, " {m} |")?;
    }
    writeln!(out)?;
    write!(out, "|---|---:|")?;
    for _ in &methods {
        write!(out, "---|")?;
    }
    writeln!(out)?;
    for (problem, (n, cells)) in &by_problem {
        write!(out, "| {problem} | {n} |")?;
        for m in &methods {
            match cells.get(m.as_str()) {
                Some(r) => write!(out, " {} |", cell(r))?,
                None => write!(out, " – |")?,
            }
        }
        writeln!(out)?;
    }

    writeln!(out)?;
    write!(out, "Converged:")?;
    for (i, m) in methods.iter().enumerate() {
        let runs = report.records.iter().filter(|r| &r.method == m);
        let total = runs.clone().count();
        let ok = runs.filter(|r| r.converged()).count();
        let sep = if i == 0 { "" } else { "," };
        write!(out, "{sep} {m} {ok}/{total}")?;
    }
    writeln!(out)
}
