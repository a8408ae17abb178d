//! The objective abstraction consumed by every solver.

use crate::linalg::{SymMatrix, Vector};
use crate::scalar::Scalar;

/// A smooth objective `f: Rⁿ → R` with its gradient.
///
/// Implementations must be pure and reentrant: solvers may evaluate the
/// same objective from several threads.
pub trait Objective<T: Scalar>: Send + Sync {
    fn name(&self) -> &str;

    fn dim(&self) -> usize;

    fn value(&self, x: &Vector<T>) -> T;

    fn gradient(&self, x: &Vector<T>) -> Vector<T>;

    /// Analytic Hessian, if the objective provides one.
    fn hessian(&self, _x: &Vector<T>) -> Option<SymMatrix<T>> {
        None
    }

    /// Starting point used by the benchmark suite: `2·ones(n)`.
    fn default_x0(&self) -> Vector<T> {
        Vector::filled(self.dim(), T::lit(2.0))
    }

    /// Documented global minimum value, when known exactly.
    fn known_min(&self) -> Option<T> {
        None
    }

    /// A point at which [`Objective::known_min`] is attained.
    fn minimizer(&self) -> Option<Vector<T>> {
        None
    }
}

/// Owned, type-erased objective.
pub type Problem<T = f64> = Box<dyn Objective<T>>;

type ValueFn<T> = Box<dyn Fn(&Vector<T>) -> T + Send + Sync>;
type GradFn<T> = Box<dyn Fn(&Vector<T>) -> Vector<T> + Send + Sync>;
type HessFn<T> = Box<dyn Fn(&Vector<T>) -> SymMatrix<T> + Send + Sync>;

/// Objective assembled from closures. Handy for tests and ad-hoc problems.
pub struct FnObjective<T: Scalar> {
    name: String,
    dim: usize,
    value: ValueFn<T>,
    gradient: GradFn<T>,
    hessian: Option<HessFn<T>>,
    x0: Option<Vector<T>>,
}

impl<T: Scalar> FnObjective<T> {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        value: impl Fn(&Vector<T>) -> T + Send + Sync + 'static,
        gradient: impl Fn(&Vector<T>) -> Vector<T> + Send + Sync + 'static,
    ) -> Self {
        Self { name: name.into(), dim, value: Box::new(value), gradient: Box::new(gradient), hessian: None, x0: None }
    }

    pub fn with_hessian(mut self, hessian: impl Fn(&Vector<T>) -> SymMatrix<T> + Send + Sync + 'static) -> Self {
        self.hessian = Some(Box::new(hessian));
        self
    }

    pub fn with_x0(mut self, x0: Vector<T>) -> Self {
        self.x0 = Some(x0);
        self
    }
}

impl<T: Scalar> Objective<T> for FnObjective<T> {
    fn name(&self) -> &str {
        &self.name
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &Vector<T>) -> T {
        (self.value)(x)
    }

    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        (self.gradient)(x)
    }

    fn hessian(&self, x: &Vector<T>) -> Option<SymMatrix<T>> {
        self.hessian.as_ref().map(|h| h(x))
    }

    fn default_x0(&self) -> Vector<T> {
        self.x0.clone().unwrap_or_else(|| Vector::filled(self.dim, T::lit(2.0)))
    }
}

/// Convex quadratic `½ xᵀ A x − bᵀ x` with an analytic Hessian.
#[derive(Debug, Clone)]
pub struct Quadratic<T: Scalar> {
    matrix: SymMatrix<T>,
    linear: Vector<T>,
}

impl<T: Scalar> Quadratic<T> {
    pub fn new(matrix: SymMatrix<T>, linear: Vector<T>) -> Self {
        assert_eq!(matrix.dim(), linear.len(), "quadratic dimensions disagree");
        Self { matrix, linear }
    }

    /// `½ xᵀ A x`
    pub fn homogeneous(matrix: SymMatrix<T>) -> Self {
        let n = matrix.dim();
        Self::new(matrix, Vector::zeros(n))
    }

    pub fn matrix(&self) -> &SymMatrix<T> {
        &self.matrix
    }
}

impl<T: Scalar> Objective<T> for Quadratic<T> {
    fn name(&self) -> &str {
        "quadratic"
    }

    fn dim(&self) -> usize {
        self.matrix.dim()
    }

    fn value(&self, x: &Vector<T>) -> T {
        T::lit(0.5) * self.matrix.quad_form(x) - self.linear.dot(x)
    }

    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        self.matrix.mul_vec(x).sub(&self.linear)
    }

    fn hessian(&self, _x: &Vector<T>) -> Option<SymMatrix<T>> {
        Some(self.matrix.clone())
    }
}
