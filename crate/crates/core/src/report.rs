//! Result types shared by the continuation solver and the baselines.

use std::fmt;
use std::time::Duration;

use crate::linalg::Vector;
use crate::scalar::Scalar;

/// Why a solve stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    /// `‖g‖∞ ≤ grad_tol`.
    Converged,
    MaxIterations,
    /// A linear solve failed even after regularization.
    LinearAlgebraFailure,
    /// The objective or gradient produced a non-finite value at an accepted point.
    NonFiniteEvaluation,
    /// No further progress is possible: the trial point rounds back to the
    /// iterate, or a baseline's radius or line search collapsed.
    Stalled,
    /// The wall-clock limit expired.
    Timeout,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::MaxIterations => "max_iterations",
            Status::LinearAlgebraFailure => "linear_algebra_failure",
            Status::NonFiniteEvaluation => "non_finite_evaluation",
            Status::Stalled => "stalled",
            Status::Timeout => "timeout",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            Status::Converged,
            Status::MaxIterations,
            Status::LinearAlgebraFailure,
            Status::NonFiniteEvaluation,
            Status::Stalled,
            Status::Timeout,
        ]
        .into_iter()
        .find(|st| st.as_str() == s)
    }

    pub fn is_success(self) -> bool {
        self == Status::Converged
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Evaluation and step counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counters {
    pub f_evals: usize,
    pub g_evals: usize,
    pub hessian_evals: usize,
    pub rejected_steps: usize,
    /// Linear solves that needed a diagonal shift.
    pub regularized_solves: usize,
}

/// One row of the optional per-iteration trace.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord<T> {
    pub k: usize,
    /// Objective at the start of the iteration.
    pub f: T,
    /// Objective at the trial point.
    pub f_trial: T,
    pub g_inf: T,
    /// Time step (or trust radius / step length for the baselines) used for the trial.
    pub dt: T,
    pub rho: T,
    pub accepted: bool,
    pub mode: &'static str,
}

#[derive(Debug, Clone)]
pub struct SolveReport<T> {
    pub status: Status,
    pub x_final: Vector<T>,
    pub f_final: T,
    pub g_inf_norm: T,
    pub iterations: usize,
    pub counters: Counters,
    pub trace: Option<Vec<TraceRecord<T>>>,
    pub wall_time: Duration,
    /// Detail for failure statuses.
    pub message: Option<String>,
}

impl<T: Scalar> SolveReport<T> {
    pub fn converged(&self) -> bool {
        self.status.is_success()
    }

    /// Objective values after each accepted step, starting with `f(x₀)`.
    pub fn accepted_values(&self) -> Option<Vec<T>> {
        let trace = self.trace.as_ref()?;
        let mut out: Vec<T> = trace.first().map(|r| vec![r.f]).unwrap_or_default();
        out.extend(trace.iter().filter(|r| r.accepted).map(|r| r.f_trial));
        Some(out)
    }
}
