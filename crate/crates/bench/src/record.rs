//! Row and report types produced by a suite run.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::UsageError;

/// Solver selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Eptctr,
    TrustRegion,
    Bfgs,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Eptctr, Method::TrustRegion, Method::Bfgs];

    pub fn name(self) -> &'static str {
        match self {
            Method::Eptctr => "eptctr",
            Method::TrustRegion => "trust-region",
            Method::Bfgs => "bfgs",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = UsageError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        match key.as_str() {
            "eptctr" => Ok(Method::Eptctr),
            "trust-region" | "tr" => Ok(Method::TrustRegion),
            "bfgs" | "line-search" => Ok(Method::Bfgs),
            _ => Err(UsageError::UnknownMethod {
                name: s.to_string(),
                suggestions: crate::suggest(&key, Method::ALL.iter().map(|m| m.name())),
            }),
        }
    }
}

/// Outcome of one (problem, method) run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRecord {
    pub problem: String,
    pub n: usize,
    pub method: String,
    pub iterations: usize,
    pub wall_time_s: f64,
    #[serde(with = "any_float")]
    pub final_g_inf: f64,
    #[serde(with = "any_float")]
    pub f_final: f64,
    pub status: String,
}

/// Serializes non-finite floats as the strings `NaN`, `inf` and `-inf` so a
/// failed run still survives JSON, which has no literal for them.
mod any_float {
    use std::fmt;

    use serde::de::{self, Visitor};
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_str(&v.to_string())
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        struct AnyFloat;

        impl Visitor<'_> for AnyFloat {
            type Value = f64;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number, NaN, inf or -inf")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
                Ok(v)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
                Ok(v as f64)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
                Ok(v as f64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
                v.trim().parse().map_err(|_| E::invalid_value(de::Unexpected::Str(v), &self))
            }
        }

        d.deserialize_any(AnyFloat)
    }
}

impl BenchmarkRecord {
    pub fn converged(&self) -> bool {
        self.status == eptctr::Status::Converged.as_str()
    }
}

/// One row of a `--trace` file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub problem: String,
    pub method: String,
    pub k: usize,
    pub f: f64,
    pub f_trial: f64,
    pub g_inf: f64,
    pub dt: f64,
    pub rho: f64,
    pub accepted: bool,
    pub mode: String,
}

/// Settings that applied to every run of a suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigSnapshot {
    /// Dimension used for parametric problems.
    pub n: usize,
    pub grad_tol: f64,
    /// `None` means the per-solver default of `10 n + 1000`.
    pub max_iter: Option<usize>,
    pub dt0: f64,
    /// `None` means each problem's default start point.
    pub x0_scalar: Option<f64>,
    pub time_limit_s: f64,
    pub parallel: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    /// Sorted by `(problem, method)`.
    pub records: Vec<BenchmarkRecord>,
    pub config: ConfigSnapshot,
    /// Host and build description.
    pub environment: String,
    /// Per-iteration rows; empty unless tracing was requested.
    pub traces: Vec<TraceRow>,
}

/// Short description of the machine and build that produced a report.
pub fn environment_note() -> String {
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let cpu = std::fs::read_to_string("/proc/cpuinfo")
        .ok()
        .and_then(|info| {
            info.lines()
                .find(|l| l.starts_with("model name"))
                .and_then(|l| l.split(':').nth(1))
                .map(|s| s.trim().to_string())
        })
        .unwrap_or_else(|| "unknown cpu".to_string());
    let profile = if cfg!(debug_assertions) { "debug" } else { "release" };
    format!("{cpu}, {threads} hardware threads, {}-{}, {profile} build", std::env::consts::ARCH, std::env::consts::OS)
}
