//! # eptctr
//!
//! Unconstrained minimization by explicit pseudo-transient continuation.
//!
//! The solver follows the Newton flow `dx/dt = −H(x) g(x)` with the damped
//! step `s = Δt/(1 + Δt) · (−H g)`, adapting `Δt` from the ratio of actual to
//! predicted decrease exactly as a trust-region method adapts its radius.
//! `H` is a cheap rank-two inverse update while the model tracks `f` well and
//! the (finite-difference) Hessian inverse once it stops doing so.
//!
//! Everything numerical is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64`.
//!
//! ```
//! use eptctr::{eptctr_solve, problems, SolverConfig, Status};
//!
//! let problem = problems::by_name::<f64>("rosenbrock", Some(10)).unwrap();
//! let report = eptctr_solve(problem.as_ref(), problem.default_x0(), &SolverConfig::default()).unwrap();
//! assert_eq!(report.status, Status::Converged);
//! assert!(report.g_inf_norm <= 1e-6);
//! ```

// `!(a > b)` is used on purpose so that NaN fails every validity check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod flow;
pub mod linalg;
pub mod preconditioner;
pub mod problem;
pub mod problems;
pub mod report;
pub mod scalar;
pub mod solver;

pub use baselines::{bfgs_linesearch, trust_region_newton, BaselineConfig};
pub use linalg::{fd_hessian, solve_spd, sym_eigenvalues, LinalgError, SymMatrix, Vector};
pub use preconditioner::{
    apply_lbfgs_inverse, measurement_phi, scaling_secant_check, CurvaturePair, Mode, PreconditionerState,
};
pub use problem::{FnObjective, Objective, Problem, Quadratic};
pub use report::{Counters, SolveReport, Status, TraceRecord};
pub use scalar::Scalar;
pub use solver::{
    acceptance_ratio, continuation_step, eptctr_solve, model_reduction, update_dt, ConfigError, Eptctr, IterateState,
    SolverConfig,
};

pub type DenseVector = Vector<f64>;
pub type DenseSymMatrix = SymMatrix<f64>;
pub type DenseVectorF32 = Vector<f32>;
pub type DenseSymMatrixF32 = SymMatrix<f32>;
pub type Config = SolverConfig<f64>;
pub type Report = SolveReport<f64>;
pub type Pair = CurvaturePair<f64>;
