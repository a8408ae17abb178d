//! Explicit pseudo-transient continuation with trust-region time-stepping.
//!
//! Each iteration takes the damped step
//!
//! ```text
//! s_k = Δt_k / (1 + Δt_k) · s_k^N,   s_k^N = −H_k g_k
//! ```
//!
//! and grades it with the ratio of the actual decrease to the simplified
//! model decrease `−(1 + Δt/2)/(1 + Δt) · g_kᵀ s_k`. The ratio decides both
//! acceptance (`ρ > η_a`) and the next time step. `H_k` comes from the
//! switching preconditioner in [`crate::preconditioner`].
//!
//! After a rejected step the iterate, gradient, Newton-like direction and
//! curvature pair are all kept, and only the time step shrinks.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::linalg::{fd_hessian_from_gradient, LinalgError, SymMatrix, Vector};
use crate::preconditioner::{CurvaturePair, Mode, PreconditionerError, PreconditionerState};
use crate::problem::Objective;
use crate::report::{Counters, SolveReport, Status, TraceRecord};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("invalid solver configuration: {0}")]
    Invalid(&'static str),
    #[error("start point has length {got}, problem dimension is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("start point is not finite")]
    NonFiniteStart,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("model reduction is zero")]
    DegenerateModel,
}

/// Tunable constants of the continuation method.
#[derive(Debug, Clone)]
pub struct SolverConfig<T> {
    /// Acceptance floor on the ratio.
    pub eta_a: T,
    pub eta1: T,
    pub eta2: T,
    /// Growth factor for the time step.
    pub gamma1: T,
    /// Shrink factor for the time step.
    pub gamma2: T,
    /// Curvature test threshold.
    pub theta: T,
    pub dt0: T,
    /// Stop once `‖g‖∞ ≤ grad_tol`.
    pub grad_tol: T,
    /// Iteration cap; `None` means `10 n + 1000`.
    pub max_iter: Option<usize>,
    pub fd_eps: T,
    /// Use the objective's analytic Hessian when it has one.
    pub use_analytic_hessian: bool,
    pub record_trace: bool,
    pub time_limit: Option<Duration>,
}

impl<T: Scalar> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            eta_a: T::lit(1e-6),
            eta1: T::lit(0.25),
            eta2: T::lit(0.75),
            gamma1: T::lit(2.0),
            gamma2: T::lit(0.5),
            theta: T::lit(1e-6),
            dt0: T::lit(1e-2),
            grad_tol: T::lit(1e-6),
            max_iter: None,
            fd_eps: T::lit(crate::linalg::DEFAULT_FD_EPS),
            use_analytic_hessian: true,
            record_trace: false,
            time_limit: None,
        }
    }
}

impl<T: Scalar> SolverConfig<T> {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let zero = T::zero();
        let one = T::one();
        if !(zero < self.eta_a && self.eta_a < self.eta1 && self.eta1 < self.eta2 && self.eta2 < one) {
            return Err(ConfigError::Invalid("require 0 < eta_a < eta1 < eta2 < 1"));
        }
        if !(zero < self.gamma2 && self.gamma2 < one && one < self.gamma1) {
            return Err(ConfigError::Invalid("require 0 < gamma2 < 1 < gamma1"));
        }
        if !(self.dt0 > zero && self.dt0.is_finite()) {
            return Err(ConfigError::Invalid("dt0 must be positive"));
        }
        if !(self.grad_tol > zero) {
            return Err(ConfigError::Invalid("grad_tol must be positive"));
        }
        if !(self.theta >= zero) {
            return Err(ConfigError::Invalid("theta must be nonnegative"));
        }
        if !(self.fd_eps > zero) {
            return Err(ConfigError::Invalid("fd_eps must be positive"));
        }
        Ok(())
    }

    pub fn iteration_cap(&self, n: usize) -> usize {
        self.max_iter.unwrap_or(10 * n + 1000)
    }
}

/// `Δt/(1 + Δt) · s^N`
pub fn continuation_step<T: Scalar>(s_newton: &Vector<T>, dt: T) -> Vector<T> {
    s_newton.scaled(dt / (T::one() + dt))
}

/// Predicted decrease `m(0) − m(s) = −(1 + Δt/2)/(1 + Δt) · gᵀs`.
pub fn model_reduction<T: Scalar>(g: &Vector<T>, s: &Vector<T>, dt: T) -> T {
    -((T::one() + T::lit(0.5) * dt) / (T::one() + dt)) * g.dot(s)
}

/// `ρ = (f_old − f_new) / reduction`
pub fn acceptance_ratio<T: Scalar>(f_old: T, f_new: T, reduction: T) -> Result<T, ModelError> {
    if reduction == T::zero() {
        return Err(ModelError::DegenerateModel);
    }
    Ok((f_old - f_new) / reduction)
}

/// Next time step from the ratio: grow when `|1 − ρ| ≤ η₁`, keep when
/// `η₁ < |1 − ρ| < η₂`, shrink otherwise.
pub fn update_dt<T: Scalar>(dt: T, rho: T, cfg: &SolverConfig<T>) -> T {
    let gap = (T::one() - rho).abs();
    if gap <= cfg.eta1 {
        cfg.gamma1 * dt
    } else if gap < cfg.eta2 {
        dt
    } else {
        // NaN ratios land here too
        cfg.gamma2 * dt
    }
}

/// Current iterate and the bookkeeping carried between iterations.
#[derive(Debug, Clone)]
pub struct IterateState<T> {
    pub x: Vector<T>,
    pub f_val: T,
    pub g: Vector<T>,
    pub s_newton: Vector<T>,
    pub dt: T,
    pub precond: PreconditionerState<T>,
    /// Whether the last trial step was accepted.
    pub trial_success: bool,
}

/// Outcome of a single trial step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepInfo<T> {
    pub accepted: bool,
    pub rho: T,
    pub reduction: T,
    pub f_trial: T,
    /// Time step used for this trial.
    pub dt: T,
    pub mode: Mode,
    /// Whether `x + s` differed from `x` in floating point.
    pub moved: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StepError {
    #[error("non-finite objective or gradient: {0}")]
    NonFinite(String),
    #[error("linear algebra failure: {0}")]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Preconditioner(PreconditionerError),
}

impl From<PreconditionerError> for StepError {
    fn from(e: PreconditionerError) -> Self {
        match e {
            PreconditionerError::Linalg(LinalgError::NonFiniteEvaluation { coordinate }) => {
                StepError::NonFinite(format!("Hessian difference along coordinate {coordinate}"))
            }
            PreconditionerError::Linalg(l) => StepError::Linalg(l),
            other => StepError::Preconditioner(other),
        }
    }
}

impl StepError {
    fn status(&self) -> Status {
        match self {
            StepError::NonFinite(_) => Status::NonFiniteEvaluation,
            _ => Status::LinearAlgebraFailure,
        }
    }
}

fn evaluate_hessian<T: Scalar, P: Objective<T> + ?Sized>(
    problem: &P,
    x: &Vector<T>,
    gx: &Vector<T>,
    cfg: &SolverConfig<T>,
    counters: &mut Counters,
) -> Result<SymMatrix<T>, LinalgError> {
    counters.hessian_evals += 1;
    if cfg.use_analytic_hessian {
        if let Some(h) = problem.hessian(x) {
            if !h.is_finite() {
                return Err(LinalgError::NonFiniteEvaluation { coordinate: 0 });
            }
            return Ok(h);
        }
    }
    let mut calls = 0;
    let h = fd_hessian_from_gradient(
        |z| {
            calls += 1;
            problem.gradient(z)
        },
        x,
        gx,
        cfg.fd_eps,
    );
    counters.g_evals += calls;
    h
}

/// Step-by-step driver. [`eptctr_solve`] runs it to termination.
pub struct Eptctr<'a, T: Scalar, P: Objective<T> + ?Sized> {
    problem: &'a P,
    cfg: SolverConfig<T>,
    state: IterateState<T>,
    counters: Counters,
    iterations: usize,
}

impl<'a, T: Scalar, P: Objective<T> + ?Sized> Eptctr<'a, T, P> {
    /// Evaluates `f(x₀)`, `g(x₀)` and `B₀`, and solves `B₀ s₀^N = −g₀`.
    pub fn new(problem: &'a P, x0: Vector<T>, cfg: SolverConfig<T>) -> Result<Self, InitError<T>> {
        cfg.validate().map_err(InitError::Config)?;
        if x0.len() != problem.dim() {
            return Err(InitError::Config(ConfigError::DimensionMismatch { expected: problem.dim(), got: x0.len() }));
        }
        if !x0.is_finite() {
            return Err(InitError::Config(ConfigError::NonFiniteStart));
        }
        let mut counters = Counters::default();
        let fail = |status, message: String, x0: &Vector<T>, counters: Counters| InitError::Failed {
            status,
            message,
            x: x0.clone(),
            counters,
        };
        let f_val = problem.value(&x0);
        counters.f_evals += 1;
        let g = problem.gradient(&x0);
        counters.g_evals += 1;
        if !f_val.is_finite() || !g.is_finite() {
            return Err(fail(Status::NonFiniteEvaluation, "at the start point".into(), &x0, counters));
        }
        let b0 = match evaluate_hessian(problem, &x0, &g, &cfg, &mut counters) {
            Ok(b) => b,
            Err(e) => {
                let st = if matches!(e, LinalgError::NonFiniteEvaluation { .. }) {
                    Status::NonFiniteEvaluation
                } else {
                    Status::LinearAlgebraFailure
                };
                return Err(fail(st, e.to_string(), &x0, counters));
            }
        };
        let precond = PreconditionerState::new(cfg.theta, b0, &x0);
        let dir = match precond.direction(&g) {
            Ok(d) => d,
            Err(e) => {
                let e = StepError::from(e);
                return Err(fail(e.status(), e.to_string(), &x0, counters));
            }
        };
        if dir.shift > T::zero() {
            counters.regularized_solves += 1;
        }
        let dt = cfg.dt0;
        Ok(Self {
            problem,
            cfg,
            state: IterateState { x: x0, f_val, g, s_newton: dir.s_newton, dt, precond, trial_success: true },
            counters,
            iterations: 0,
        })
    }

    pub fn state(&self) -> &IterateState<T> {
        &self.state
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn config(&self) -> &SolverConfig<T> {
        &self.cfg
    }

    pub fn is_converged(&self) -> bool {
        self.state.g.norm_inf() <= self.cfg.grad_tol
    }

    /// Performs one trial step and updates time step and preconditioner.
    pub fn step(&mut self) -> Result<StepInfo<T>, StepError> {
        let cfg = &self.cfg;
        let st = &mut self.state;
        let counters = &mut self.counters;
        let problem = self.problem;

        // the direction from initialization serves iteration 0
        if st.trial_success && self.iterations > 0 {
            let dir = st.precond.direction(&st.g)?;
            if dir.shift > T::zero() {
                counters.regularized_solves += 1;
            }
            st.s_newton = dir.s_newton;
        }
        let mode = st.precond.mode();
        let dt = st.dt;
        let s = continuation_step(&st.s_newton, dt);
        let x_trial = st.x.add(&s);
        let moved = x_trial != st.x;
        let f_trial = problem.value(&x_trial);
        counters.f_evals += 1;
        let reduction = model_reduction(&st.g, &s, dt);
        // a non-positive or non-finite predicted decrease, or an overflowing
        // trial value, is graded as the worst possible ratio
        let rho = if f_trial.is_finite() && reduction > T::zero() && reduction.is_finite() {
            acceptance_ratio(st.f_val, f_trial, reduction).unwrap_or(T::neg_infinity())
        } else {
            T::neg_infinity()
        };

        let accepted = rho > cfg.eta_a;
        let new_pair = if accepted {
            let g_next = problem.gradient(&x_trial);
            counters.g_evals += 1;
            if !g_next.is_finite() {
                return Err(StepError::NonFinite("gradient at accepted trial point".into()));
            }
            let y = g_next.sub(&st.g);
            st.x = x_trial;
            st.f_val = f_trial;
            st.g = g_next;
            Some(CurvaturePair { s, y })
        } else {
            counters.rejected_steps += 1;
            None
        };
        st.trial_success = accepted;

        let rho_bad = !((T::one() - rho).abs() < cfg.eta2);
        st.dt = update_dt(dt, rho, cfg);
        st.precond.update_and_select(new_pair, rho_bad, &st.x, &st.g, |x, gx| {
            evaluate_hessian(problem, x, gx, cfg, counters)
        })?;
        self.iterations += 1;
        Ok(StepInfo { accepted, rho, reduction, f_trial, dt, mode, moved })
    }

    /// Runs until convergence, the iteration cap, the time limit, or a failure.
    pub fn run(mut self) -> SolveReport<T> {
        let start = Instant::now();
        let cap = self.cfg.iteration_cap(self.state.x.len());
        let mut trace = self.cfg.record_trace.then(Vec::new);
        let mut message = None;
        let status = loop {
            if self.is_converged() {
                break Status::Converged;
            }
            if self.iterations >= cap {
                break Status::MaxIterations;
            }
            if let Some(limit) = self.cfg.time_limit {
                if start.elapsed() >= limit {
                    break Status::Timeout;
                }
            }
            let k = self.iterations;
            let f = self.state.f_val;
            let g_inf = self.state.g.norm_inf();
            match self.step() {
                Ok(info) => {
                    if let Some(t) = trace.as_mut() {
                        t.push(TraceRecord {
                            k,
                            f,
                            f_trial: info.f_trial,
                            g_inf,
                            dt: info.dt,
                            rho: info.rho,
                            accepted: info.accepted,
                            mode: info.mode.as_str(),
                        });
                    }
                    // once the time step has shrunk so far that the trial point
                    // rounds back to x, every further trial is identical
                    if !info.accepted && !info.moved {
                        message = Some("time step too small to move the iterate".into());
                        break Status::Stalled;
                    }
                }
                Err(e) => {
                    message = Some(e.to_string());
                    break e.status();
                }
            }
        };
        SolveReport {
            status,
            g_inf_norm: self.state.g.norm_inf(),
            f_final: self.state.f_val,
            x_final: self.state.x,
            iterations: self.iterations,
            counters: self.counters,
            trace,
            wall_time: start.elapsed(),
            message,
        }
    }
}

/// Why [`Eptctr::new`] could not produce a solver.
#[derive(Debug, Clone)]
pub enum InitError<T> {
    Config(ConfigError),
    /// Evaluation or factorization failed at the start point.
    Failed {
        status: Status,
        message: String,
        x: Vector<T>,
        counters: Counters,
    },
}

/// Minimizes `problem` from `x0`.
///
/// Numerical failures are reported through [`SolveReport::status`]; only an
/// invalid configuration or start point is an `Err`.
pub fn eptctr_solve<T: Scalar, P: Objective<T> + ?Sized>(
    problem: &P,
    x0: Vector<T>,
    cfg: &SolverConfig<T>,
) -> Result<SolveReport<T>, ConfigError> {
    let start = Instant::now();
    match Eptctr::new(problem, x0, cfg.clone()) {
        Ok(solver) => {
            let mut report = solver.run();
            report.wall_time = start.elapsed();
            Ok(report)
        }
        Err(InitError::Config(e)) => Err(e),
        Err(InitError::Failed { status, message, x, counters }) => {
            let f = problem.value(&x);
            let g_inf = problem.gradient(&x).norm_inf();
            Ok(SolveReport {
                status,
                x_final: x,
                f_final: f,
                g_inf_norm: g_inf,
                iterations: 0,
                counters,
                trace: cfg.record_trace.then(Vec::new),
                wall_time: start.elapsed(),
                message: Some(message),
            })
        }
    }
}
