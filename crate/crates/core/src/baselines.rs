//! Reference solvers used for comparison in the benchmark suite: a dogleg
//! trust-region Newton method and BFGS with Armijo backtracking.
//!
//! Both use the same termination test (`‖g‖∞ ≤ grad_tol`), counters and
//! report type as the continuation solver so that their rows line up.

use std::time::{Duration, Instant};

use crate::linalg::{factor_spd_regularized, fd_hessian_from_gradient, LinalgError, SymMatrix, Vector};
use crate::problem::Objective;
use crate::report::{Counters, SolveReport, Status, TraceRecord};
use crate::scalar::Scalar;
use crate::solver::ConfigError;

#[derive(Debug, Clone)]
pub struct BaselineConfig<T> {
    pub grad_tol: T,
    /// `None` means `10 n + 1000`.
    pub max_iter: Option<usize>,
    pub tr_radius0: T,
    pub tr_radius_max: T,
    /// Sufficient-decrease constant of the Armijo test.
    pub armijo_c: T,
    pub backtrack_factor: T,
    pub max_backtracks: usize,
    pub fd_eps: T,
    pub use_analytic_hessian: bool,
    pub record_trace: bool,
    pub time_limit: Option<Duration>,
}

impl<T: Scalar> Default for BaselineConfig<T> {
    fn default() -> Self {
        Self {
            grad_tol: T::lit(1e-6),
            max_iter: None,
            tr_radius0: T::one(),
            tr_radius_max: T::lit(1e3),
            armijo_c: T::lit(1e-4),
            backtrack_factor: T::lit(0.5),
            max_backtracks: 60,
            fd_eps: T::lit(crate::linalg::DEFAULT_FD_EPS),
            use_analytic_hessian: true,
            record_trace: false,
            time_limit: None,
        }
    }
}

impl<T: Scalar> BaselineConfig<T> {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let (zero, one) = (T::zero(), T::one());
        if !(self.grad_tol > zero) {
            return Err(ConfigError::Invalid("grad_tol must be positive"));
        }
        if !(zero < self.armijo_c && self.armijo_c < one) {
            return Err(ConfigError::Invalid("require 0 < armijo_c < 1"));
        }
        if !(zero < self.backtrack_factor && self.backtrack_factor < one) {
            return Err(ConfigError::Invalid("require 0 < backtrack_factor < 1"));
        }
        if !(self.tr_radius0 > zero && self.tr_radius_max >= self.tr_radius0) {
            return Err(ConfigError::Invalid("require 0 < tr_radius0 <= tr_radius_max"));
        }
        Ok(())
    }

    fn iteration_cap(&self, n: usize) -> usize {
        self.max_iter.unwrap_or(10 * n + 1000)
    }
}

fn check_start<T: Scalar>(dim: usize, x0: &Vector<T>) -> Result<(), ConfigError> {
    if x0.len() != dim {
        return Err(ConfigError::DimensionMismatch { expected: dim, got: x0.len() });
    }
    if !x0.is_finite() {
        return Err(ConfigError::NonFiniteStart);
    }
    Ok(())
}

struct Run<T> {
    start: Instant,
    counters: Counters,
    trace: Option<Vec<TraceRecord<T>>>,
    iterations: usize,
}

impl<T: Scalar> Run<T> {
    fn new(record: bool) -> Self {
        Self { start: Instant::now(), counters: Counters::default(), trace: record.then(Vec::new), iterations: 0 }
    }

    fn finish(self, status: Status, x: Vector<T>, f: T, g: &Vector<T>, message: Option<String>) -> SolveReport<T> {
        SolveReport {
            status,
            g_inf_norm: g.norm_inf(),
            f_final: f,
            x_final: x,
            iterations: self.iterations,
            counters: self.counters,
            trace: self.trace,
            wall_time: self.start.elapsed(),
            message,
        }
    }

    fn timed_out(&self, limit: Option<Duration>) -> bool {
        limit.is_some_and(|l| self.start.elapsed() >= l)
    }
}

fn hessian<T: Scalar, P: Objective<T> + ?Sized>(
    problem: &P,
    x: &Vector<T>,
    gx: &Vector<T>,
    cfg: &BaselineConfig<T>,
    counters: &mut Counters,
) -> Result<SymMatrix<T>, LinalgError> {
    counters.hessian_evals += 1;
    if cfg.use_analytic_hessian {
        if let Some(h) = problem.hessian(x) {
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

/// Dogleg step for the model `gᵀp + ½ pᵀ B p` inside `‖p‖ ≤ radius`.
///
/// When `B` is not positive definite, the Newton point and the model are
/// taken from `B + τI` with the smallest shift that factors.
fn dogleg<T: Scalar>(b: &SymMatrix<T>, g: &Vector<T>, radius: T) -> Result<(Vector<T>, T, bool), LinalgError> {
    let (chol, shift) = factor_spd_regularized(b)?;
    let model = if shift > T::zero() { b.shifted(shift) } else { b.clone() };
    let p_newton = chol.solve(&g.neg());
    if p_newton.norm() <= radius {
        return Ok((p_newton, shift, false));
    }
    let gg = g.norm_squared();
    let gbg = model.quad_form(g);
    let g_norm = gg.sqrt();
    let p_cauchy = g.scaled(-gg / gbg);
    let pc_norm = p_cauchy.norm();
    if pc_norm >= radius {
        return Ok((g.scaled(-radius / g_norm), shift, true));
    }
    // ‖pc + τ(pn − pc)‖ = radius for τ ∈ (0, 1)
    let d = p_newton.sub(&p_cauchy);
    let a = d.norm_squared();
    let bq = T::lit(2.0) * p_cauchy.dot(&d);
    let c = pc_norm * pc_norm - radius * radius;
    let tau = (-bq + (bq * bq - T::lit(4.0) * a * c).max(T::zero()).sqrt()) / (T::lit(2.0) * a);
    let mut p = p_cauchy;
    p.axpy(tau, &d);
    Ok((p, shift, true))
}

/// Newton's method globalized by a dogleg trust region.
pub fn trust_region_newton<T: Scalar, P: Objective<T> + ?Sized>(
    problem: &P,
    x0: Vector<T>,
    cfg: &BaselineConfig<T>,
) -> Result<SolveReport<T>, ConfigError> {
    cfg.validate()?;
    check_start(problem.dim(), &x0)?;
    let mut run = Run::new(cfg.record_trace);
    let mut x = x0;
    let mut f = problem.value(&x);
    let mut g = problem.gradient(&x);
    run.counters.f_evals += 1;
    run.counters.g_evals += 1;
    if !f.is_finite() || !g.is_finite() {
        return Ok(run.finish(Status::NonFiniteEvaluation, x, f, &g, Some("at the start point".into())));
    }
    let mut b = match hessian(problem, &x, &g, cfg, &mut run.counters) {
        Ok(b) => b,
        Err(e) => return Ok(run.finish(Status::NonFiniteEvaluation, x, f, &g, Some(e.to_string()))),
    };
    let mut radius = cfg.tr_radius0;
    let cap = cfg.iteration_cap(x.len());
    let quarter = T::lit(0.25);
    let status = loop {
        if g.norm_inf() <= cfg.grad_tol {
            break Status::Converged;
        }
        if run.iterations >= cap {
            break Status::MaxIterations;
        }
        if run.timed_out(cfg.time_limit) {
            break Status::Timeout;
        }
        let (p, shift, on_boundary) = match dogleg(&b, &g, radius) {
            Ok(out) => out,
            Err(e) => return Ok(run.finish(Status::LinearAlgebraFailure, x, f, &g, Some(e.to_string()))),
        };
        if shift > T::zero() {
            run.counters.regularized_solves += 1;
        }
        let x_trial = x.add(&p);
        let f_trial = problem.value(&x_trial);
        run.counters.f_evals += 1;
        let predicted = -(g.dot(&p) + T::lit(0.5) * b.quad_form(&p));
        let rho =
            if f_trial.is_finite() && predicted > T::zero() { (f - f_trial) / predicted } else { T::neg_infinity() };
        let p_norm = p.norm();
        if rho < quarter {
            radius = quarter * p_norm;
        } else if rho > T::lit(0.75) && on_boundary {
            radius = (radius + radius).min(cfg.tr_radius_max);
        }
        let accepted = rho > T::lit(1e-4) && f_trial < f;
        if let Some(t) = run.trace.as_mut() {
            t.push(TraceRecord {
                k: run.iterations,
                f,
                f_trial,
                g_inf: g.norm_inf(),
                dt: p_norm,
                rho,
                accepted,
                mode: "dogleg",
            });
        }
        run.iterations += 1;
        if accepted {
            let g_next = problem.gradient(&x_trial);
            run.counters.g_evals += 1;
            if !g_next.is_finite() {
                return Ok(run.finish(
                    Status::NonFiniteEvaluation,
                    x,
                    f,
                    &g,
                    Some("gradient at accepted point".into()),
                ));
            }
            x = x_trial;
            f = f_trial;
            g = g_next;
            b = match hessian(problem, &x, &g, cfg, &mut run.counters) {
                Ok(b) => b,
                Err(e) => return Ok(run.finish(Status::NonFiniteEvaluation, x, f, &g, Some(e.to_string()))),
            };
        } else {
            run.counters.rejected_steps += 1;
            if radius <= T::epsilon() * (T::one() + x.norm()) {
                break Status::Stalled;
            }
        }
    };
    Ok(run.finish(status, x, f, &g, None))
}

/// BFGS on the dense inverse Hessian approximation with Armijo backtracking
/// from a unit step.
pub fn bfgs_linesearch<T: Scalar, P: Objective<T> + ?Sized>(
    problem: &P,
    x0: Vector<T>,
    cfg: &BaselineConfig<T>,
) -> Result<SolveReport<T>, ConfigError> {
    cfg.validate()?;
    check_start(problem.dim(), &x0)?;
    let n = x0.len();
    let mut run = Run::new(cfg.record_trace);
    let mut x = x0;
    let mut f = problem.value(&x);
    let mut g = problem.gradient(&x);
    run.counters.f_evals += 1;
    run.counters.g_evals += 1;
    if !f.is_finite() || !g.is_finite() {
        return Ok(run.finish(Status::NonFiniteEvaluation, x, f, &g, Some("at the start point".into())));
    }
    let mut h = SymMatrix::<T>::identity(n);
    let mut first_update = true;
    let cap = cfg.iteration_cap(n);
    let status = loop {
        if g.norm_inf() <= cfg.grad_tol {
            break Status::Converged;
        }
        if run.iterations >= cap {
            break Status::MaxIterations;
        }
        if run.timed_out(cfg.time_limit) {
            break Status::Timeout;
        }
        let mut d = h.mul_vec(&g).neg();
        let mut slope = g.dot(&d);
        if !(slope < T::zero()) {
            h = SymMatrix::identity(n);
            first_update = true;
            d = g.neg();
            slope = -g.norm_squared();
        }
        let mut alpha = T::one();
        let mut found = None;
        for _ in 0..=cfg.max_backtracks {
            let mut x_trial = x.clone();
            x_trial.axpy(alpha, &d);
            let f_trial = problem.value(&x_trial);
            run.counters.f_evals += 1;
            if f_trial.is_finite() && f_trial <= f + cfg.armijo_c * alpha * slope {
                found = Some((x_trial, f_trial));
                break;
            }
            run.counters.rejected_steps += 1;
            alpha *= cfg.backtrack_factor;
        }
        let k = run.iterations;
        run.iterations += 1;
        let Some((x_next, f_next)) = found else {
            if let Some(t) = run.trace.as_mut() {
                t.push(TraceRecord {
                    k,
                    f,
                    f_trial: f,
                    g_inf: g.norm_inf(),
                    dt: alpha,
                    rho: T::nan(),
                    accepted: false,
                    mode: "bfgs",
                });
            }
            break Status::Stalled;
        };
        if let Some(t) = run.trace.as_mut() {
            t.push(TraceRecord {
                k,
                f,
                f_trial: f_next,
                g_inf: g.norm_inf(),
                dt: alpha,
                rho: (f - f_next) / (-alpha * slope),
                accepted: true,
                mode: "bfgs",
            });
        }
        let g_next = problem.gradient(&x_next);
        run.counters.g_evals += 1;
        if !g_next.is_finite() {
            return Ok(run.finish(Status::NonFiniteEvaluation, x, f, &g, Some("gradient at accepted point".into())));
        }
        let s = x_next.sub(&x);
        let y = g_next.sub(&g);
        let sy = s.dot(&y);
        if sy > T::lit(1e-10) * s.norm() * y.norm() {
            if first_update {
                h = SymMatrix::identity(n);
                let gamma = sy / y.norm_squared();
                for i in 0..n {
                    h[(i, i)] = gamma;
                }
                first_update = false;
            }
            // H⁺ = H − ρ(s (Hy)ᵀ + (Hy) sᵀ) + (ρ² yᵀHy + ρ) s sᵀ
            let rho = T::one() / sy;
            let hy = h.mul_vec(&y);
            let yhy = y.dot(&hy);
            let coef = rho * rho * yhy + rho;
            for i in 0..n {
                for j in 0..n {
                    h[(i, j)] += -rho * (s[i] * hy[j] + hy[i] * s[j]) + coef * s[i] * s[j];
                }
            }
        }
        x = x_next;
        f = f_next;
        g = g_next;
    };
    Ok(run.finish(status, x, f, &g, None))
}
