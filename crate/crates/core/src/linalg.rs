//! Dense vectors, symmetric matrices and the handful of factorizations the
//! solvers need: Cholesky with a diagonal-shift fallback, cyclic Jacobi
//! eigenvalues and forward-difference Hessians.

use std::ops::{Deref, DerefMut, Index, IndexMut};

use thiserror::Error;

use crate::problem::Objective;
use crate::scalar::Scalar;

/// Default forward-difference step for [`fd_hessian`].
pub const DEFAULT_FD_EPS: f64 = 1e-6;

/// Largest diagonal shift tried by [`solve_spd`] before giving up.
pub const MAX_SHIFT: f64 = 1e8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("non-finite gradient entry while differencing coordinate {coordinate}")]
    NonFiniteEvaluation { coordinate: usize },
    #[error("system stayed indefinite up to diagonal shift {shift:e}")]
    SingularSystem { shift: f64 },
    #[error("Jacobi eigenvalue iteration did not converge in {sweeps} sweeps")]
    EigenFailure { sweeps: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vector must not be empty")]
    Empty,
    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },
}

/// `Σ aᵢbᵢ` with four independent accumulators so the loop vectorizes.
pub(crate) fn dot_slices<T: Scalar>(a: &[T], b: &[T]) -> T {
    let mut acc = [T::zero(); 4];
    let chunks_a = a.chunks_exact(4);
    let chunks_b = b.chunks_exact(4);
    let tail = chunks_a.remainder().iter().zip(chunks_b.remainder()).fold(T::zero(), |t, (&p, &q)| t + p * q);
    for (ca, cb) in chunks_a.zip(chunks_b) {
        for k in 0..4 {
            acc[k] += ca[k] * cb[k];
        }
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// Owned dense column vector.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Vector<T>(Vec<T>);

impl<T: Scalar> Vector<T> {
    /// Wraps `data` after checking it is non-empty and finite.
    pub fn try_from_vec(data: Vec<T>) -> Result<Self, LinalgError> {
        if data.is_empty() {
            return Err(LinalgError::Empty);
        }
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(LinalgError::NonFinite { index });
        }
        Ok(Self(data))
    }

    /// Wraps `data` without validation.
    pub fn from_vec(data: Vec<T>) -> Self {
        Self(data)
    }

    pub fn from_slice(data: &[T]) -> Self {
        Self(data.to_vec())
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![T::zero(); n])
    }

    pub fn filled(n: usize, value: T) -> Self {
        Self(vec![value; n])
    }

    /// Unit vector `e_i` of length `n`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = T::one();
        v
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> T) -> Self {
        Self((0..n).map(f).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }

    pub fn dot(&self, other: &Self) -> T {
        debug_assert_eq!(self.len(), other.len());
        dot_slices(&self.0, &other.0)
    }

    pub fn norm_squared(&self) -> T {
        self.dot(self)
    }

    pub fn norm(&self) -> T {
        self.norm_squared().sqrt()
    }

    pub fn norm_inf(&self) -> T {
        self.0.iter().fold(T::zero(), |acc, v| acc.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    /// `self += alpha * x`
    pub fn axpy(&mut self, alpha: T, x: &Self) {
        debug_assert_eq!(self.len(), x.len());
        for (a, &b) in self.0.iter_mut().zip(&x.0) {
            *a += alpha * b;
        }
    }

    pub fn scale_mut(&mut self, alpha: T) {
        for a in &mut self.0 {
            *a *= alpha;
        }
    }

    pub fn scaled(&self, alpha: T) -> Self {
        Self(self.0.iter().map(|&v| alpha * v).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(&a, &b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(&a, &b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|&v| -v).collect())
    }

    /// Converts every entry to another scalar type.
    pub fn cast<U: Scalar>(&self) -> Vector<U> {
        Vector(self.0.iter().map(|v| U::lit(v.as_f64())).collect())
    }
}

impl<T> Deref for Vector<T> {
    type Target = [T];
    fn deref(&self) -> &[T] {
        &self.0
    }
}

impl<T> DerefMut for Vector<T> {
    fn deref_mut(&mut self) -> &mut [T] {
        &mut self.0
    }
}

impl<T> From<Vec<T>> for Vector<T> {
    fn from(v: Vec<T>) -> Self {
        Self(v)
    }
}

/// Dense symmetric matrix stored row-major in full.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> SymMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![T::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds `(A + Aᵀ)/2` from an arbitrary square row-major array.
    pub fn symmetrized(n: usize, mut data: Vec<T>) -> Result<Self, LinalgError> {
        if data.len() != n * n {
            return Err(LinalgError::DimensionMismatch { expected: n * n, got: data.len() });
        }
        let half = T::lit(0.5);
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = half * (data[i * n + j] + data[j * n + i]);
                data[i * n + j] = avg;
                data[j * n + i] = avg;
            }
        }
        Ok(Self { n, data })
    }

    /// Builds from rows, symmetrizing the result.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self, LinalgError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(LinalgError::DimensionMismatch { expected: n, got: row.len() });
            }
            data.extend_from_slice(row);
        }
        Self::symmetrized(n, data)
    }

    /// Fills entry `(i, j)` for `j <= i` from `f` and mirrors it.
    pub fn from_lower_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let v = f(i, j);
                m.data[i * n + j] = v;
                m.data[j * n + i] = v;
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn mul_vec(&self, x: &Vector<T>) -> Vector<T> {
        debug_assert_eq!(self.n, x.len());
        Vector::from_fn(self.n, |i| dot_slices(self.row(i), x))
    }

    /// `xᵀ A x`
    pub fn quad_form(&self, x: &Vector<T>) -> T {
        self.mul_vec(x).dot(x)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, v| acc.max(v.abs()))
    }

    pub fn max_abs_diagonal(&self) -> T {
        (0..self.n).fold(T::zero(), |acc, i| acc.max(self[(i, i)].abs()))
    }

    /// Frobenius norm.
    pub fn norm(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, &v| acc + v * v).sqrt()
    }

    pub fn max_asymmetry(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Returns `A + tau I`.
    pub fn shifted(&self, tau: T) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m[(i, i)] += tau;
        }
        m
    }
}

impl<T> Index<(usize, usize)> for SymMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for SymMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

/// Lower-triangular Cholesky factor `L` with `A = L Lᵀ`, packed by rows.
#[derive(Debug, Clone)]
pub struct Cholesky<T> {
    n: usize,
    // row i occupies [i*(i+1)/2, i*(i+1)/2 + i]
    lower: Vec<T>,
}

impl<T: Scalar> Cholesky<T> {
    /// Factors `a`, returning `None` when it is not numerically positive definite.
    pub fn factor(a: &SymMatrix<T>) -> Option<Self> {
        let n = a.dim();
        let mut lower = vec![T::zero(); n * (n + 1) / 2];
        for i in 0..n {
            let ri = i * (i + 1) / 2;
            for j in 0..=i {
                let rj = j * (j + 1) / 2;
                let partial = dot_slices(&lower[ri..ri + j], &lower[rj..rj + j]);
                let v = a[(i, j)] - partial;
                if i == j {
                    if !(v > T::zero()) || !v.is_finite() {
                        return None;
                    }
                    lower[ri + i] = v.sqrt();
                } else {
                    lower[ri + j] = v / lower[rj + j];
                }
            }
        }
        Some(Self { n, lower })
    }

    fn at(&self, i: usize, j: usize) -> T {
        self.lower[i * (i + 1) / 2 + j]
    }

    pub fn solve(&self, rhs: &Vector<T>) -> Vector<T> {
        let n = self.n;
        let mut y = rhs.clone();
        for i in 0..n {
            let ri = i * (i + 1) / 2;
            let partial = dot_slices(&self.lower[ri..ri + i], &y[..i]);
            y[i] = (y[i] - partial) / self.lower[ri + i];
        }
        for i in (0..n).rev() {
            // Lᵀ is upper triangular and its column i is row i of L, which
            // is contiguous in packed storage
            let v = y[i] / self.at(i, i);
            y[i] = v;
            let ri = i * (i + 1) / 2;
            for (yk, &l) in y[..i].iter_mut().zip(&self.lower[ri..ri + i]) {
                *yk -= l * v;
            }
        }
        y
    }
}

/// Solution of a possibly regularized SPD system.
#[derive(Debug, Clone)]
pub struct SpdSolution<T> {
    pub solution: Vector<T>,
    /// Diagonal shift that made the factorization succeed; zero if none was needed.
    pub shift: T,
}

/// Factors `b`, retrying with `b + τI` (τ doubling from `1e-8·(1 + max|b_ii|)`)
/// until the factorization succeeds.
pub fn factor_spd_regularized<T: Scalar>(b: &SymMatrix<T>) -> Result<(Cholesky<T>, T), LinalgError> {
    if let Some(chol) = Cholesky::factor(b) {
        return Ok((chol, T::zero()));
    }
    let limit = T::lit(MAX_SHIFT);
    let mut tau = T::lit(1e-8) * (T::one() + b.max_abs_diagonal());
    // b + τI cannot be positive definite while some diagonal entry stays
    // nonpositive, so those rungs of the doubling ladder are skipped unseen.
    let min_diag = (0..b.dim()).fold(T::infinity(), |m, i| m.min(b[(i, i)]));
    while tau <= limit && !(min_diag + tau > T::zero()) {
        tau = tau + tau;
    }
    while tau <= limit {
        if let Some(chol) = Cholesky::factor(&b.shifted(tau)) {
            return Ok((chol, tau));
        }
        tau = tau + tau;
    }
    Err(LinalgError::SingularSystem { shift: tau.as_f64() })
}

/// Solves `b s = rhs`, regularizing when `b` is not positive definite.
pub fn solve_spd_shifted<T: Scalar>(b: &SymMatrix<T>, rhs: &Vector<T>) -> Result<SpdSolution<T>, LinalgError> {
    if b.dim() != rhs.len() {
        return Err(LinalgError::DimensionMismatch { expected: b.dim(), got: rhs.len() });
    }
    let (chol, shift) = factor_spd_regularized(b)?;
    Ok(SpdSolution { solution: chol.solve(rhs), shift })
}

pub fn solve_spd<T: Scalar>(b: &SymMatrix<T>, rhs: &Vector<T>) -> Result<Vector<T>, LinalgError> {
    solve_spd_shifted(b, rhs).map(|s| s.solution)
}

const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigen-decomposition by cyclic Jacobi rotations.
///
/// Returns ascending eigenvalues and the matching eigenvectors (as columns,
/// i.e. `vectors[k]` belongs to `values[k]`).
pub fn sym_eigen<T: Scalar>(b: &SymMatrix<T>) -> Result<(Vec<T>, Vec<Vector<T>>), LinalgError> {
    let n = b.dim();
    let mut a = b.clone();
    let mut v = SymMatrix::<T>::identity(n);
    let scale = a.norm().max(T::min_positive_value());
    let tiny = T::epsilon() * T::epsilon() * scale * scale;
    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)] * a[(p, q)];
            }
        }
        if off <= tiny {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(LinalgError::EigenFailure { sweeps: JACOBI_MAX_SWEEPS });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = order.iter().map(|&j| Vector::from_fn(n, |k| v[(k, j)])).collect();
    Ok((values, vectors))
}

/// Ascending eigenvalues of a symmetric matrix.
pub fn sym_eigenvalues<T: Scalar>(b: &SymMatrix<T>) -> Result<Vec<T>, LinalgError> {
    sym_eigen(b).map(|(values, _)| values)
}

/// Forward-difference Hessian with columns `(g(x + eps e_i) - g(x)) / eps`,
/// symmetrized. `gx` must equal `grad(x)`; `grad` is called exactly `n` times.
pub fn fd_hessian_from_gradient<T: Scalar>(
    mut grad: impl FnMut(&Vector<T>) -> Vector<T>,
    x: &Vector<T>,
    gx: &Vector<T>,
    eps: T,
) -> Result<SymMatrix<T>, LinalgError> {
    let n = x.len();
    if gx.len() != n {
        return Err(LinalgError::DimensionMismatch { expected: n, got: gx.len() });
    }
    if let Some(coordinate) = gx.iter().position(|v| !v.is_finite()) {
        return Err(LinalgError::NonFiniteEvaluation { coordinate });
    }
    // column i of the difference quotient lands in row i here; the
    // symmetrization below makes the orientation irrelevant
    let mut data = vec![T::zero(); n * n];
    let mut probe = x.clone();
    for i in 0..n {
        let saved = probe[i];
        probe[i] = saved + eps;
        let gi = grad(&probe);
        probe[i] = saved;
        if !gi.is_finite() {
            return Err(LinalgError::NonFiniteEvaluation { coordinate: i });
        }
        for (j, (&a, &b)) in gi.iter().zip(gx.iter()).enumerate() {
            data[i * n + j] = (a - b) / eps;
        }
    }
    SymMatrix::symmetrized(n, data)
}

/// Forward-difference Hessian of `problem` at `x`, using `n + 1` gradient evaluations.
pub fn fd_hessian<T: Scalar, P: Objective<T> + ?Sized>(
    problem: &P,
    x: &Vector<T>,
    eps: T,
) -> Result<SymMatrix<T>, LinalgError> {
    let gx = problem.gradient(x);
    fd_hessian_from_gradient(|z| problem.gradient(z), x, &gx, eps)
}
