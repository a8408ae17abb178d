//! Scalable test functions, evaluated at any dimension `n`.
//!
//! Formulas follow the usual benchmark collections; where a function exists in
//! several variants the one used here is spelled out on the type.

use crate::linalg::{SymMatrix, Vector};
use crate::problem::Objective;
use crate::scalar::Scalar;

fn sq<T: Scalar>(v: T) -> T {
    v * v
}

/// Compensated (Neumaier) summation.
///
/// Several objectives sit at `|f*| ≫ 1` with per-coordinate changes near
/// the end of a run far below `ulp(f*)`; plain accumulation rounds those
/// changes away and the ratio of actual to predicted decrease degenerates.
fn compensated_sum<T: Scalar>(terms: impl IntoIterator<Item = T>) -> T {
    let mut sum = T::zero();
    let mut carry = T::zero();
    for t in terms {
        let next = sum + t;
        if sum.abs() >= t.abs() {
            carry += (sum - next) + t;
        } else {
            carry += (t - next) + sum;
        }
        sum = next;
    }
    sum + carry
}

/// `Σ (xᵢ − 1)² − Σ_{i≥2} xᵢ xᵢ₋₁`, minimized at `xᵢ = i(n + 1 − i)`.
///
/// Evaluated as `½Σ(xᵢ − xᵢ₋₁)² + ½x₁² + ½xₙ² − 2Σxᵢ + n`, which is the same
/// polynomial without the cancellation between two `O(n⁵)` sums near the
/// minimizer.
#[derive(Debug, Clone)]
pub struct Trid {
    pub n: usize,
}

impl<T: Scalar> Objective<T> for Trid {
    fn name(&self) -> &str {
        "trid"
    }
    fn dim(&self) -> usize {
        self.n
    }
    fn value(&self, x: &Vector<T>) -> T {
        let half = T::lit(0.5);
        let n = x.len();
        let diffs = x.windows(2).map(|w| half * sq(w[1] - w[0]));
        let ends = [half * sq(x[0]), half * sq(x[n - 1])];
        let linear = x.iter().map(|&v| T::lit(-2.0) * v);
        compensated_sum(diffs.chain(ends).chain(linear)) + T::from_count(n)
    }
    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        let n = x.len();
        Vector::from_fn(n, |i| {
            let mut g = T::lit(2.0) * (x[i] - T::one());
            if i > 0 {
                g -= x[i - 1];
            }
            if i + 1 < n {
                g -= x[i + 1];
            }
            g
        })
    }
    fn hessian(&self, x: &Vector<T>) -> Option<SymMatrix<T>> {
        Some(SymMatrix::from_lower_fn(x.len(), |i, j| {
            if i == j {
                T::lit(2.0)
            } else if i == j + 1 {
                -T::one()
            } else {
                T::zero()
            }
        }))
    }
    fn known_min(&self) -> Option<T> {
        let n = self.n as f64;
        Some(T::lit(-n * (n + 4.0) * (n - 1.0) / 6.0))
    }
    fn minimizer(&self) -> Option<Vector<T>> {
        let n = self.n;
        Some(Vector::from_fn(n, |i| T::from_count((i + 1) * (n - i))))
    }
}

/// Chained Rosenbrock `Σ_{i<n} 100(xᵢ₊₁ − xᵢ²)² + (xᵢ − 1)²`.
#[derive(Debug, Clone)]
pub struct Rosenbrock {
    pub n: usize,
}

impl<T: Scalar> Objective<T> for Rosenbrock {
    fn name(&self) -> &str {
        "rosenbrock"
    }
    fn dim(&self) -> usize {
        self.n
    }
    fn value(&self, x: &Vector<T>) -> T {
        let hundred = T::lit(100.0);
        x.windows(2).fold(T::zero(), |acc, w| acc + hundred * sq(w[1] - w[0] * w[0]) + sq(w[0] - T::one()))
    }
    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        let n = x.len();
        let mut g = Vector::zeros(n);
        for i in 0..n.saturating_sub(1) {
            let r = x[i + 1] - x[i] * x[i];
            g[i] += T::lit(-400.0) * x[i] * r + T::lit(2.0) * (x[i] - T::one());
            g[i + 1] += T::lit(200.0) * r;
        }
        g
    }
    fn hessian(&self, x: &Vector<T>) -> Option<SymMatrix<T>> {
        let n = x.len();
        let mut h = SymMatrix::zeros(n);
        for i in 0..n.saturating_sub(1) {
            h[(i, i)] += T::lit(1200.0) * x[i] * x[i] - T::lit(400.0) * x[i + 1] + T::lit(2.0);
            h[(i + 1, i + 1)] += T::lit(200.0);
            let off = T::lit(-400.0) * x[i];
            h[(i, i + 1)] = off;
            h[(i + 1, i)] = off;
        }
        Some(h)
    }
    fn known_min(&self) -> Option<T> {
        Some(T::zero())
    }
    fn minimizer(&self) -> Option<Vector<T>> {
        Some(Vector::filled(self.n, T::one()))
    }
}

/// `(x₁ − 1)² + Σ_{i≥2} i (2xᵢ² − xᵢ₋₁)²`.
#[derive(Debug, Clone)]
pub struct DixonPrice {
    pub n: usize,
}

impl<T: Scalar> Objective<T> for DixonPrice {
    fn name(&self) -> &str {
        "dixon-price"
    }
    fn dim(&self) -> usize {
        self.n
    }
    fn value(&self, x: &Vector<T>) -> T {
        let mut f = sq(x[0] - T::one());
        for i in 1..x.len() {
            f += T::from_count(i + 1) * sq(T::lit(2.0) * x[i] * x[i] - x[i - 1]);
        }
        f
    }
    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        let n = x.len();
        let mut g = Vector::zeros(n);
        g[0] = T::lit(2.0) * (x[0] - T::one());
        for i in 1..n {
            let w = T::from_count(i + 1);
            let t = T::lit(2.0) * x[i] * x[i] - x[i - 1];
            g[i] += w * T::lit(8.0) * x[i] * t;
            g[i - 1] -= w * T::lit(2.0) * t;
        }
        g
    }
    fn known_min(&self) -> Option<T> {
        Some(T::zero())
    }
    fn minimizer(&self) -> Option<Vector<T>> {
        Some(Vector::from_fn(self.n, |i| {
            let p = 2f64.powi(i as i32 + 1);
            T::lit(2f64.powf(-(p - 2.0) / p))
        }))
    }
}

/// Levy with `wᵢ = 1 + (xᵢ − 1)/4`.
#[derive(Debug, Clone)]
pub struct Levy {
    pub n: usize,
}

impl<T: Scalar> Objective<T> for Levy {
    fn name(&self) -> &str {
        "levy"
    }
    fn dim(&self) -> usize {
        self.n
    }
    fn value(&self, x: &Vector<T>) -> T {
        let pi = T::PI();
        let n = x.len();
        let w = |i: usize| T::one() + (x[i] - T::one()) / T::lit(4.0);
        let mut f = sq((pi * w(0)).sin());
        for i in 0..n - 1 {
            let wi = w(i);
            f += sq(wi - T::one()) * (T::one() + T::lit(10.0) * sq((pi * wi + T::one()).sin()));
        }
        let wn = w(n - 1);
        f + sq(wn - T::one()) * (T::one() + sq((T::lit(2.0) * pi * wn).sin()))
    }
    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        let pi = T::PI();
        let two = T::lit(2.0);
        let n = x.len();
        let quarter = T::lit(0.25);
        let mut g = Vector::zeros(n);
        let w0 = T::one() + (x[0] - T::one()) * quarter;
        g[0] += pi * (two * pi * w0).sin() * quarter;
        for i in 0..n {
            let wi = T::one() + (x[i] - T::one()) * quarter;
            let d = wi - T::one();
            if i + 1 < n {
                let a = pi * wi + T::one();
                let dw =
                    two * d * (T::one() + T::lit(10.0) * sq(a.sin())) + d * d * T::lit(10.0) * pi * (two * a).sin();
                g[i] += dw * quarter;
            } else {
                let a = two * pi * wi;
                let dw = two * d * (T::one() + sq(a.sin())) + d * d * two * pi * (two * a).sin();
                g[i] += dw * quarter;
            }
        }
        g
    }
    fn known_min(&self) -> Option<T> {
        Some(T::zero())
    }
    fn minimizer(&self) -> Option<Vector<T>> {
        Some(Vector::filled(self.n, T::one()))
    }
}

/// Powell singular function, summed over consecutive blocks of four.
/// Requires `n` divisible by 4.
#[derive(Debug, Clone)]
pub struct Powell {
    pub n: usize,
}

impl<T: Scalar> Objective<T> for Powell {
    fn name(&self) -> &str {
        "powell"
    }
    fn dim(&self) -> usize {
        self.n
    }
    fn value(&self, x: &Vector<T>) -> T {
        x.chunks_exact(4).fold(T::zero(), |acc, b| {
            acc + sq(b[0] + T::lit(10.0) * b[1])
                + T::lit(5.0) * sq(b[2] - b[3])
                + sq(sq(b[1] - T::lit(2.0) * b[2]))
                + T::lit(10.0) * sq(sq(b[0] - b[3]))
        })
    }
    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        let mut g = Vector::zeros(x.len());
        for (gb, b) in g.chunks_exact_mut(4).zip(x.chunks_exact(4)) {
            let p = b[0] + T::lit(10.0) * b[1];
            let q = b[2] - b[3];
            let r = b[1] - T::lit(2.0) * b[2];
            let s = b[0] - b[3];
            let r3 = r * r * r;
            let s3 = s * s * s;
            gb[0] = T::lit(2.0) * p + T::lit(40.0) * s3;
            gb[1] = T::lit(20.0) * p + T::lit(4.0) * r3;
            gb[2] = T::lit(10.0) * q - T::lit(8.0) * r3;
            gb[3] = T::lit(-10.0) * q - T::lit(40.0) * s3;
        }
        g
    }
    fn known_min(&self) -> Option<T> {
        Some(T::zero())
    }
    fn minimizer(&self) -> Option<Vector<T>> {
        Some(Vector::zeros(self.n))
    }
}

/// `10n + Σ (xᵢ² − 10 cos 2πxᵢ)`.
#[derive(Debug, Clone)]
pub struct Rastrigin {
    pub n: usize,
}

impl<T: Scalar> Objective<T> for Rastrigin {
    fn name(&self) -> &str {
        "rastrigin"
    }
    fn dim(&self) -> usize {
        self.n
    }
    fn value(&self, x: &Vector<T>) -> T {
        let tau = T::TAU();
        let ten = T::lit(10.0);
        compensated_sum(x.iter().map(|&v| v * v - ten * (tau * v).cos())) + ten * T::from_count(x.len())
    }
    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        let tau = T::TAU();
        Vector::from_fn(x.len(), |i| T::lit(2.0) * x[i] + T::lit(10.0) * tau * (tau * x[i]).sin())
    }
    fn hessian(&self, x: &Vector<T>) -> Option<SymMatrix<T>> {
        let tau = T::TAU();
        let diag: Vec<T> = x.iter().map(|&v| T::lit(2.0) + T::lit(10.0) * tau * tau * (tau * v).cos()).collect();
        Some(SymMatrix::from_diagonal(&diag))
    }
    fn known_min(&self) -> Option<T> {
        Some(T::zero())
    }
    fn minimizer(&self) -> Option<Vector<T>> {
        Some(Vector::zeros(self.n))
    }
}

/// `Σᵢ Σ_{j≤i} xⱼ²`, which collapses to `Σⱼ (n − j + 1) xⱼ²`.
#[derive(Debug, Clone)]
pub struct RotatedHyperEllipsoid {
    pub n: usize,
}

impl<T: Scalar> Objective<T> for RotatedHyperEllipsoid {
    fn name(&self) -> &str {
        "rotated-hyper-ellipsoid"
    }
    fn dim(&self) -> usize {
        self.n
    }
    fn value(&self, x: &Vector<T>) -> T {
        let mut partial = T::zero();
        let mut total = T::zero();
        for &v in x.iter() {
            partial += v * v;
            total += partial;
        }
        total
    }
    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        let n = x.len();
        Vector::from_fn(n, |j| T::lit(2.0) * T::from_count(n - j) * x[j])
    }
    fn hessian(&self, x: &Vector<T>) -> Option<SymMatrix<T>> {
        let n = x.len();
        let diag: Vec<T> = (0..n).map(|j| T::lit(2.0) * T::from_count(n - j)).collect();
        Some(SymMatrix::from_diagonal(&diag))
    }
    fn known_min(&self) -> Option<T> {
        Some(T::zero())
    }
    fn minimizer(&self) -> Option<Vector<T>> {
        Some(Vector::zeros(self.n))
    }
}

/// `418.9829 n − Σ xᵢ sin √|xᵢ|`.
#[derive(Debug, Clone)]
pub struct Schwefel {
    pub n: usize,
}

impl<T: Scalar> Objective<T> for Schwefel {
    fn name(&self) -> &str {
        "schwefel"
    }
    fn dim(&self) -> usize {
        self.n
    }
    fn value(&self, x: &Vector<T>) -> T {
        T::lit(418.9829) * T::from_count(x.len()) - compensated_sum(x.iter().map(|&v| v * v.abs().sqrt().sin()))
    }
    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        Vector::from_fn(x.len(), |i| {
            let r = x[i].abs().sqrt();
            -r.sin() - T::lit(0.5) * r * r.cos()
        })
    }
}

/// `Σ xᵢ²`
#[derive(Debug, Clone)]
pub struct Sphere {
    pub n: usize,
}

impl<T: Scalar> Objective<T> for Sphere {
    fn name(&self) -> &str {
        "sphere"
    }
    fn dim(&self) -> usize {
        self.n
    }
    fn value(&self, x: &Vector<T>) -> T {
        x.norm_squared()
    }
    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        x.scaled(T::lit(2.0))
    }
    fn hessian(&self, x: &Vector<T>) -> Option<SymMatrix<T>> {
        Some(SymMatrix::from_diagonal(&vec![T::lit(2.0); x.len()]))
    }
    fn known_min(&self) -> Option<T> {
        Some(T::zero())
    }
    fn minimizer(&self) -> Option<Vector<T>> {
        Some(Vector::zeros(self.n))
    }
}

/// `½ Σ (xᵢ⁴ − 16xᵢ² + 5xᵢ)`
#[derive(Debug, Clone)]
pub struct StyblinskiTang {
    pub n: usize,
}

impl<T: Scalar> Objective<T> for StyblinskiTang {
    fn name(&self) -> &str {
        "styblinski-tang"
    }
    fn dim(&self) -> usize {
        self.n
    }
    fn value(&self, x: &Vector<T>) -> T {
        let half = T::lit(0.5);
        compensated_sum(x.iter().map(|&v| {
            let v2 = v * v;
            half * (v2 * v2 - T::lit(16.0) * v2 + T::lit(5.0) * v)
        }))
    }
    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        Vector::from_fn(x.len(), |i| {
            let v = x[i];
            T::lit(2.0) * v * v * v - T::lit(16.0) * v + T::lit(2.5)
        })
    }
    fn hessian(&self, x: &Vector<T>) -> Option<SymMatrix<T>> {
        let diag: Vec<T> = x.iter().map(|&v| T::lit(6.0) * v * v - T::lit(16.0)).collect();
        Some(SymMatrix::from_diagonal(&diag))
    }
}

/// `Σ i xᵢ²`
#[derive(Debug, Clone)]
pub struct SumSquares {
    pub n: usize,
}

impl<T: Scalar> Objective<T> for SumSquares {
    fn name(&self) -> &str {
        "sum-squares"
    }
    fn dim(&self) -> usize {
        self.n
    }
    fn value(&self, x: &Vector<T>) -> T {
        x.iter().enumerate().fold(T::zero(), |acc, (i, &v)| acc + T::from_count(i + 1) * v * v)
    }
    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        Vector::from_fn(x.len(), |i| T::lit(2.0) * T::from_count(i + 1) * x[i])
    }
    fn hessian(&self, x: &Vector<T>) -> Option<SymMatrix<T>> {
        let diag: Vec<T> = (0..x.len()).map(|i| T::lit(2.0) * T::from_count(i + 1)).collect();
        Some(SymMatrix::from_diagonal(&diag))
    }
    fn known_min(&self) -> Option<T> {
        Some(T::zero())
    }
    fn minimizer(&self) -> Option<Vector<T>> {
        Some(Vector::zeros(self.n))
    }
}
