//! Reference integrators for the Newton flow `dx/dt = −∇²f(x)⁻¹ ∇f(x)`.
//!
//! Used by the test suites to check the continuous-time decay law and the
//! linearized implicit-Euler origin of the continuation step. Not on any
//! solver hot path.

use thiserror::Error;

use crate::linalg::{fd_hessian, solve_spd, LinalgError, SymMatrix, Vector, DEFAULT_FD_EPS};
use crate::problem::Objective;
use crate::scalar::Scalar;
use crate::solver::continuation_step;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("step size must be positive and t_end nonnegative")]
    InvalidStep,
    #[error("implicit Euler inner iteration did not converge (last update {residual:e})")]
    OracleFailure { residual: f64 },
    #[error("objective `{0}` has no analytic Hessian")]
    MissingHessian(String),
}

#[derive(Debug, Clone)]
pub struct FlowTrajectory<T> {
    pub times: Vec<T>,
    pub states: Vec<Vector<T>>,
    /// `‖g(x(t))‖₂` at each node.
    pub residual_norms: Vec<T>,
}

impl<T: Scalar> FlowTrajectory<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_state(&self) -> &Vector<T> {
        self.states.last().expect("trajectory holds at least x0")
    }
}

fn hessian_or_fd<T: Scalar, P: Objective<T> + ?Sized>(problem: &P, x: &Vector<T>) -> Result<SymMatrix<T>, LinalgError> {
    match problem.hessian(x) {
        Some(h) => Ok(h),
        None => fd_hessian(problem, x, T::lit(DEFAULT_FD_EPS)),
    }
}

/// Explicit Euler with step `h` on the Newton flow from `x0` up to `t_end`.
///
/// The final step is shortened so the last node lands on `t_end` exactly.
pub fn integrate_newton_flow<T: Scalar, P: Objective<T> + ?Sized>(
    problem: &P,
    x0: &Vector<T>,
    t_end: T,
    h: T,
) -> Result<FlowTrajectory<T>, FlowError> {
    if !(h > T::zero()) || !(t_end >= T::zero()) {
        return Err(FlowError::InvalidStep);
    }
    let mut x = x0.clone();
    let mut g = problem.gradient(&x);
    let mut t = T::zero();
    let mut traj = FlowTrajectory { times: vec![t], states: vec![x.clone()], residual_norms: vec![g.norm()] };
    let steps = (t_end / h - T::lit(1e-9)).ceil().max(T::zero()).to_usize().unwrap_or(0);
    for j in 0..steps {
        let t_next = if j + 1 == steps { t_end } else { T::from_count(j + 1) * h };
        let dt = t_next - t;
        let b = hessian_or_fd(problem, &x)?;
        let newton = solve_spd(&b, &g.neg())?;
        x.axpy(dt, &newton);
        g = problem.gradient(&x);
        t = t_next;
        traj.times.push(t);
        traj.states.push(x.clone());
        traj.residual_norms.push(g.norm());
    }
    Ok(traj)
}

const INNER_TOL: f64 = 1e-12;
const INNER_MAX_ITER: usize = 200;

/// Implicit Euler step `s = −Δt ∇²f(x+s)⁻¹ ∇f(x+s)` solved by fixed-point
/// iteration, started from the continuation step.
pub fn implicit_euler_step<T: Scalar, P: Objective<T> + ?Sized>(
    problem: &P,
    x: &Vector<T>,
    dt: T,
) -> Result<Vector<T>, FlowError> {
    let analytic =
        |z: &Vector<T>| problem.hessian(z).ok_or_else(|| FlowError::MissingHessian(problem.name().to_string()));
    let g = problem.gradient(x);
    let s_newton = solve_spd(&analytic(x)?, &g.neg())?;
    let mut s = continuation_step(&s_newton, dt);
    let mut last = f64::INFINITY;
    for _ in 0..INNER_MAX_ITER {
        let z = x.add(&s);
        let gz = problem.gradient(&z);
        let mut next = solve_spd(&analytic(&z)?, &gz)?;
        next.scale_mut(-dt);
        let change = next.sub(&s).norm();
        s = next;
        last = change.as_f64();
        if change <= T::lit(INNER_TOL) * s.norm().max(T::min_positive_value()) {
            return Ok(s);
        }
    }
    Err(FlowError::OracleFailure { residual: last })
}

/// `‖s_cont − s_IE‖ / ‖s^N‖`: gap between the continuation step and the exact
/// implicit Euler step, measured in units of the full Newton step.
///
/// Vanishes for quadratics and shrinks like `Δt²` otherwise. Requires an
/// analytic Hessian.
pub fn one_step_consistency<T: Scalar, P: Objective<T> + ?Sized>(
    problem: &P,
    x: &Vector<T>,
    dt: T,
) -> Result<T, FlowError> {
    let b = problem.hessian(x).ok_or_else(|| FlowError::MissingHessian(problem.name().to_string()))?;
    let s_newton = solve_spd(&b, &problem.gradient(x).neg())?;
    let s_cont = continuation_step(&s_newton, dt);
    let s_ie = implicit_euler_step(problem, x, dt)?;
    Ok(s_cont.sub(&s_ie).norm() / s_newton.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::Quadratic;
    use crate::problems::Rosenbrock;

    fn quad() -> Quadratic<f64> {
        Quadratic::homogeneous(SymMatrix::from_diagonal(&[1.0, 3.0, 10.0]))
    }

    #[test]
    fn zero_horizon_holds_only_start() {
        let x0 = Vector::from_slice(&[1.0, 1.0, 1.0]);
        let traj = integrate_newton_flow(&quad(), &x0, 0.0, 1e-3).unwrap();
        assert_eq!(traj.len(), 1);
        assert_eq!(traj.states[0], x0);
    }

    #[test]
    fn residual_contracts_by_one_minus_h_per_step() {
        let x0 = Vector::from_slice(&[1.0, -2.0, 0.5]);
        let h = 0.01;
        let traj = integrate_newton_flow(&quad(), &x0, 0.5, h).unwrap();
        assert_eq!(traj.len(), 51);
        for w in traj.residual_norms.windows(2) {
            assert!((w[1] / w[0] - (1.0 - h)).abs() < 1e-12);
        }
        assert!((traj.times[50] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn objective_decreases_along_flow() {
        let p = Rosenbrock { n: 2 };
        let x0 = Vector::from_slice(&[-1.2, 1.0]);
        let traj = integrate_newton_flow(&p, &x0, 1.0, 1e-2).unwrap();
        let values: Vec<f64> = traj.states.iter().map(|x| p.value(x)).collect();
        for w in values.windows(2) {
            assert!(w[1] <= w[0]);
        }
    }

    #[test]
    fn consistency_exact_on_quadratic() {
        let x = Vector::from_slice(&[1.0, -1.0, 2.0]);
        assert!(one_step_consistency(&quad(), &x, 1e-3).unwrap() <= 1e-10);
    }

    #[test]
    fn consistency_requires_analytic_hessian() {
        let p = crate::problems::Beale;
        let err = one_step_consistency::<f64, _>(&p, &Vector::from_slice(&[2.0, 2.0]), 1e-4).unwrap_err();
        assert!(matches!(err, FlowError::MissingHessian(_)));
    }

    #[test]
    fn invalid_step_rejected() {
        let x0 = Vector::from_slice(&[1.0, 1.0, 1.0]);
        assert_eq!(integrate_newton_flow(&quad(), &x0, 1.0, 0.0).unwrap_err(), FlowError::InvalidStep);
    }
}
