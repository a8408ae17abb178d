//! Fixed-dimension test functions (n ≤ 10).

use crate::linalg::{SymMatrix, Vector};
use crate::problem::Objective;
use crate::scalar::Scalar;

fn sq<T: Scalar>(v: T) -> T {
    v * v
}

fn v2<T: Scalar>(a: T, b: T) -> Vector<T> {
    Vector::from_vec(vec![a, b])
}

fn point<T: Scalar>(coords: &[f64]) -> Vector<T> {
    Vector::from_fn(coords.len(), |i| T::lit(coords[i]))
}

macro_rules! fixed_dim {
    ($name:literal, $dim:expr) => {
        fn name(&self) -> &str {
            $name
        }
        fn dim(&self) -> usize {
            $dim
        }
    };
}

#[derive(Debug, Clone, Copy)]
pub struct Beale;

impl<T: Scalar> Objective<T> for Beale {
    fixed_dim!("beale", 2);
    fn value(&self, x: &Vector<T>) -> T {
        let (a, b) = (x[0], x[1]);
        sq(T::lit(1.5) - a + a * b) + sq(T::lit(2.25) - a + a * b * b) + sq(T::lit(2.625) - a + a * b * b * b)
    }
    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        let (a, b) = (x[0], x[1]);
        let two = T::lit(2.0);
        let t1 = T::lit(1.5) - a + a * b;
        let t2 = T::lit(2.25) - a + a * b * b;
        let t3 = T::lit(2.625) - a + a * b * b * b;
        v2(
            two * t1 * (b - T::one()) + two * t2 * (b * b - T::one()) + two * t3 * (b * b * b - T::one()),
            two * t1 * a + two * t2 * two * a * b + two * t3 * T::lit(3.0) * a * b * b,
        )
    }
    fn known_min(&self) -> Option<T> {
        Some(T::zero())
    }
    fn minimizer(&self) -> Option<Vector<T>> {
        Some(point(&[3.0, 0.5]))
    }
}

/// `(x + 2y − 7)² + (2x + y − 5)²`
#[derive(Debug, Clone, Copy)]
pub struct Booth;

impl<T: Scalar> Objective<T> for Booth {
    fixed_dim!("booth", 2);
    fn value(&self, x: &Vector<T>) -> T {
        sq(x[0] + T::lit(2.0) * x[1] - T::lit(7.0)) + sq(T::lit(2.0) * x[0] + x[1] - T::lit(5.0))
    }
    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        let p = x[0] + T::lit(2.0) * x[1] - T::lit(7.0);
        let q = T::lit(2.0) * x[0] + x[1] - T::lit(5.0);
        v2(T::lit(2.0) * p + T::lit(4.0) * q, T::lit(4.0) * p + T::lit(2.0) * q)
    }
    fn hessian(&self, _x: &Vector<T>) -> Option<SymMatrix<T>> {
        Some(SymMatrix::from_lower_fn(2, |i, j| if i == j { T::lit(10.0) } else { T::lit(8.0) }))
    }
    fn known_min(&self) -> Option<T> {
        Some(T::zero())
    }
    fn minimizer(&self) -> Option<Vector<T>> {
        Some(point(&[1.0, 3.0]))
    }
}

/// Branin–Hoo with the standard constants `a=1, b=5.1/(4π²), c=5/π, r=6, s=10, t=1/(8π)`.
#[derive(Debug, Clone, Copy)]
pub struct Branin;

impl Branin {
    fn constants<T: Scalar>() -> (T, T, T, T, T) {
        let pi = T::PI();
        (
            T::lit(5.1) / (T::lit(4.0) * pi * pi),
            T::lit(5.0) / pi,
            T::lit(6.0),
            T::lit(10.0),
            T::one() / (T::lit(8.0) * pi),
        )
    }
}

impl<T: Scalar> Objective<T> for Branin {
    fixed_dim!("branin", 2);
    fn value(&self, x: &Vector<T>) -> T {
        let (b, c, r, s, t) = Branin::constants::<T>();
        sq(x[1] - b * x[0] * x[0] + c * x[0] - r) + s * (T::one() - t) * x[0].cos() + s
    }
    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        let (b, c, r, s, t) = Branin::constants::<T>();
        let u = x[1] - b * x[0] * x[0] + c * x[0] - r;
        v2(T::lit(2.0) * u * (c - T::lit(2.0) * b * x[0]) - s * (T::one() - t) * x[0].sin(), T::lit(2.0) * u)
    }
    fn known_min(&self) -> Option<T> {
        Some(T::lit(5.0) / (T::lit(4.0) * T::PI()))
    }
    fn minimizer(&self) -> Option<Vector<T>> {
        Some(v2(T::PI(), T::lit(2.275)))
    }
}

/// `−cos x cos y exp(−(x − π)² − (y − π)²)`
#[derive(Debug, Clone, Copy)]
pub struct Easom;

impl<T: Scalar> Objective<T> for Easom {
    fixed_dim!("easom", 2);
    fn value(&self, x: &Vector<T>) -> T {
        let pi = T::PI();
        -x[0].cos() * x[1].cos() * (-(sq(x[0] - pi) + sq(x[1] - pi))).exp()
    }
    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        let pi = T::PI();
        let two = T::lit(2.0);
        let e = (-(sq(x[0] - pi) + sq(x[1] - pi))).exp();
        let (s0, c0) = x[0].sin_cos();
        let (s1, c1) = x[1].sin_cos();
        v2(e * c1 * (s0 + two * (x[0] - pi) * c0), e * c0 * (s1 + two * (x[1] - pi) * c1))
    }
    fn known_min(&self) -> Option<T> {
        Some(-T::one())
    }
    fn minimizer(&self) -> Option<Vector<T>> {
        Some(v2(T::PI(), T::PI()))
    }
}

/// `Σ xᵢ²/4000 − Π cos(xᵢ/√i) + 1`
#[derive(Debug, Clone)]
pub struct Griewank {
    pub n: usize,
}

impl<T: Scalar> Objective<T> for Griewank {
    fn name(&self) -> &str {
        "griewank"
    }
    fn dim(&self) -> usize {
        self.n
    }
    fn value(&self, x: &Vector<T>) -> T {
        let mut sum = T::zero();
        let mut prod = T::one();
        for (i, &v) in x.iter().enumerate() {
            sum += v * v;
            prod *= (v / T::from_count(i + 1).sqrt()).cos();
        }
        sum / T::lit(4000.0) - prod + T::one()
    }
    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        let n = x.len();
        let roots: Vec<T> = (0..n).map(|i| T::from_count(i + 1).sqrt()).collect();
        let cosines: Vec<T> = (0..n).map(|i| (x[i] / roots[i]).cos()).collect();
        // products of all cosines except index i, without dividing
        let mut prefix = vec![T::one(); n + 1];
        for i in 0..n {
            prefix[i + 1] = prefix[i] * cosines[i];
        }
        let mut suffix = T::one();
        let mut g = Vector::zeros(n);
        for i in (0..n).rev() {
            let others = prefix[i] * suffix;
            g[i] = x[i] / T::lit(2000.0) + others * (x[i] / roots[i]).sin() / roots[i];
            suffix *= cosines[i];
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

/// `0.26(x² + y²) − 0.48xy`
#[derive(Debug, Clone, Copy)]
pub struct Matyas;

impl<T: Scalar> Objective<T> for Matyas {
    fixed_dim!("matyas", 2);
    fn value(&self, x: &Vector<T>) -> T {
        T::lit(0.26) * (x[0] * x[0] + x[1] * x[1]) - T::lit(0.48) * x[0] * x[1]
    }
    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        v2(T::lit(0.52) * x[0] - T::lit(0.48) * x[1], T::lit(0.52) * x[1] - T::lit(0.48) * x[0])
    }
    fn hessian(&self, _x: &Vector<T>) -> Option<SymMatrix<T>> {
        Some(SymMatrix::from_lower_fn(2, |i, j| if i == j { T::lit(0.52) } else { T::lit(-0.48) }))
    }
    fn known_min(&self) -> Option<T> {
        Some(T::zero())
    }
    fn minimizer(&self) -> Option<Vector<T>> {
        Some(Vector::zeros(2))
    }
}

/// `sin(x + y) + (x − y)² − 1.5x + 2.5y + 1`
#[derive(Debug, Clone, Copy)]
pub struct McCormick;

impl<T: Scalar> Objective<T> for McCormick {
    fixed_dim!("mccormick", 2);
    fn value(&self, x: &Vector<T>) -> T {
        (x[0] + x[1]).sin() + sq(x[0] - x[1]) - T::lit(1.5) * x[0] + T::lit(2.5) * x[1] + T::one()
    }
    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        let c = (x[0] + x[1]).cos();
        let d = T::lit(2.0) * (x[0] - x[1]);
        v2(c + d - T::lit(1.5), c - d + T::lit(2.5))
    }
    // stationarity gives cos(x + y) = −1/2 and x − y = 1
    fn known_min(&self) -> Option<T> {
        let x = T::lit(0.5) - T::PI() / T::lit(3.0);
        Some(-T::lit(3.0).sqrt() / T::lit(2.0) + x + T::lit(-0.5))
    }
    fn minimizer(&self) -> Option<Vector<T>> {
        let third = T::PI() / T::lit(3.0);
        Some(v2(T::lit(0.5) - third, T::lit(-0.5) - third))
    }
}

/// `Σ xᵢ² + S² + S⁴` with `S = Σ ½ i xᵢ`.
#[derive(Debug, Clone)]
pub struct Zakharov {
    pub n: usize,
}

impl Zakharov {
    fn weighted_sum<T: Scalar>(x: &Vector<T>) -> T {
        x.iter().enumerate().fold(T::zero(), |acc, (i, &v)| acc + T::lit(0.5) * T::from_count(i + 1) * v)
    }
}

impl<T: Scalar> Objective<T> for Zakharov {
    fn name(&self) -> &str {
        "zakharov"
    }
    fn dim(&self) -> usize {
        self.n
    }
    fn value(&self, x: &Vector<T>) -> T {
        let s = Zakharov::weighted_sum(x);
        x.norm_squared() + s * s + s * s * s * s
    }
    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        let s = Zakharov::weighted_sum(x);
        let outer = T::lit(2.0) * s + T::lit(4.0) * s * s * s;
        Vector::from_fn(x.len(), |i| T::lit(2.0) * x[i] + outer * T::lit(0.5) * T::from_count(i + 1))
    }
    fn known_min(&self) -> Option<T> {
        Some(T::zero())
    }
    fn minimizer(&self) -> Option<Vector<T>> {
        Some(Vector::zeros(self.n))
    }
}

/// First Bohachevsky function.
#[derive(Debug, Clone, Copy)]
pub struct Bohachevsky;

impl<T: Scalar> Objective<T> for Bohachevsky {
    fixed_dim!("bohachevsky", 2);
    fn value(&self, x: &Vector<T>) -> T {
        let pi = T::PI();
        x[0] * x[0] + T::lit(2.0) * x[1] * x[1]
            - T::lit(0.3) * (T::lit(3.0) * pi * x[0]).cos()
            - T::lit(0.4) * (T::lit(4.0) * pi * x[1]).cos()
            + T::lit(0.7)
    }
    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        let pi = T::PI();
        v2(
            T::lit(2.0) * x[0] + T::lit(0.9) * pi * (T::lit(3.0) * pi * x[0]).sin(),
            T::lit(4.0) * x[1] + T::lit(1.6) * pi * (T::lit(4.0) * pi * x[1]).sin(),
        )
    }
    fn known_min(&self) -> Option<T> {
        Some(T::zero())
    }
    fn minimizer(&self) -> Option<Vector<T>> {
        Some(Vector::zeros(2))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Colville;

impl<T: Scalar> Objective<T> for Colville {
    fixed_dim!("colville", 4);
    fn value(&self, x: &Vector<T>) -> T {
        let one = T::one();
        T::lit(100.0) * sq(x[0] * x[0] - x[1])
            + sq(x[0] - one)
            + sq(x[2] - one)
            + T::lit(90.0) * sq(x[2] * x[2] - x[3])
            + T::lit(10.1) * (sq(x[1] - one) + sq(x[3] - one))
            + T::lit(19.8) * (x[1] - one) * (x[3] - one)
    }
    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        let one = T::one();
        let a = x[0] * x[0] - x[1];
        let b = x[2] * x[2] - x[3];
        Vector::from_vec(vec![
            T::lit(400.0) * x[0] * a + T::lit(2.0) * (x[0] - one),
            T::lit(-200.0) * a + T::lit(20.2) * (x[1] - one) + T::lit(19.8) * (x[3] - one),
            T::lit(2.0) * (x[2] - one) + T::lit(360.0) * x[2] * b,
            T::lit(-180.0) * b + T::lit(20.2) * (x[3] - one) + T::lit(19.8) * (x[1] - one),
        ])
    }
    fn known_min(&self) -> Option<T> {
        Some(T::zero())
    }
    fn minimizer(&self) -> Option<Vector<T>> {
        Some(Vector::filled(4, T::one()))
    }
}

/// `2x² − 1.05x⁴ + x⁶/6 + xy + y²`
#[derive(Debug, Clone, Copy)]
pub struct ThreeHumpCamel;

impl<T: Scalar> Objective<T> for ThreeHumpCamel {
    fixed_dim!("three-hump-camel", 2);
    fn value(&self, x: &Vector<T>) -> T {
        let (a, b) = (x[0], x[1]);
        let a2 = a * a;
        T::lit(2.0) * a2 - T::lit(1.05) * a2 * a2 + a2 * a2 * a2 / T::lit(6.0) + a * b + b * b
    }
    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        let (a, b) = (x[0], x[1]);
        let a2 = a * a;
        v2(T::lit(4.0) * a - T::lit(4.2) * a2 * a + a2 * a2 * a + b, a + T::lit(2.0) * b)
    }
    fn known_min(&self) -> Option<T> {
        Some(T::zero())
    }
    fn minimizer(&self) -> Option<Vector<T>> {
        Some(Vector::zeros(2))
    }
}

/// `(4 − 2.1x² + x⁴/3)x² + xy + (4y² − 4)y²`
#[derive(Debug, Clone, Copy)]
pub struct SixHumpCamel;

impl<T: Scalar> Objective<T> for SixHumpCamel {
    fixed_dim!("six-hump-camel", 2);
    fn value(&self, x: &Vector<T>) -> T {
        let (a, b) = (x[0], x[1]);
        let a2 = a * a;
        let b2 = b * b;
        (T::lit(4.0) - T::lit(2.1) * a2 + a2 * a2 / T::lit(3.0)) * a2 + a * b + (T::lit(4.0) * b2 - T::lit(4.0)) * b2
    }
    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        let (a, b) = (x[0], x[1]);
        let a2 = a * a;
        v2(
            T::lit(8.0) * a - T::lit(8.4) * a2 * a + T::lit(2.0) * a2 * a2 * a + b,
            a - T::lit(8.0) * b + T::lit(16.0) * b * b * b,
        )
    }
}

/// `x⁴ + 4x³ + 4x² + y²`
#[derive(Debug, Clone, Copy)]
pub struct Trecanni;

impl<T: Scalar> Objective<T> for Trecanni {
    fixed_dim!("trecanni", 2);
    fn value(&self, x: &Vector<T>) -> T {
        let a = x[0];
        let a2 = a * a;
        a2 * a2 + T::lit(4.0) * a2 * a + T::lit(4.0) * a2 + x[1] * x[1]
    }
    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        let a = x[0];
        v2(T::lit(4.0) * a * a * a + T::lit(12.0) * a * a + T::lit(8.0) * a, T::lit(2.0) * x[1])
    }
    fn known_min(&self) -> Option<T> {
        Some(T::zero())
    }
    fn minimizer(&self) -> Option<Vector<T>> {
        Some(Vector::zeros(2))
    }
}

/// `(x² + y² − 2x)² + x/4`
#[derive(Debug, Clone, Copy)]
pub struct Zettl;

impl<T: Scalar> Objective<T> for Zettl {
    fixed_dim!("zettl", 2);
    fn value(&self, x: &Vector<T>) -> T {
        sq(x[0] * x[0] + x[1] * x[1] - T::lit(2.0) * x[0]) + T::lit(0.25) * x[0]
    }
    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        let u = x[0] * x[0] + x[1] * x[1] - T::lit(2.0) * x[0];
        v2(T::lit(2.0) * u * (T::lit(2.0) * x[0] - T::lit(2.0)) + T::lit(0.25), T::lit(4.0) * u * x[1])
    }
}

/// `(1 − 8x + 7x² − 7x³/3 + x⁴/4) y² e⁻ʸ`
#[derive(Debug, Clone, Copy)]
pub struct Hosaki;

impl<T: Scalar> Objective<T> for Hosaki {
    fixed_dim!("hosaki", 2);
    fn value(&self, x: &Vector<T>) -> T {
        let a = x[0];
        let poly = T::one() - T::lit(8.0) * a + T::lit(7.0) * a * a - T::lit(7.0) / T::lit(3.0) * a * a * a
            + T::lit(0.25) * a * a * a * a;
        poly * x[1] * x[1] * (-x[1]).exp()
    }
    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        let (a, b) = (x[0], x[1]);
        let poly = T::one() - T::lit(8.0) * a + T::lit(7.0) * a * a - T::lit(7.0) / T::lit(3.0) * a * a * a
            + T::lit(0.25) * a * a * a * a;
        let dpoly = T::lit(-8.0) + T::lit(14.0) * a - T::lit(7.0) * a * a + a * a * a;
        let e = (-b).exp();
        v2(dpoly * b * b * e, poly * (T::lit(2.0) * b - b * b) * e)
    }
}

/// Levy N.13
#[derive(Debug, Clone, Copy)]
pub struct Levy13;

impl<T: Scalar> Objective<T> for Levy13 {
    fixed_dim!("levy13", 2);
    fn value(&self, x: &Vector<T>) -> T {
        let pi = T::PI();
        let one = T::one();
        sq((T::lit(3.0) * pi * x[0]).sin())
            + sq(x[0] - one) * (one + sq((T::lit(3.0) * pi * x[1]).sin()))
            + sq(x[1] - one) * (one + sq((T::lit(2.0) * pi * x[1]).sin()))
    }
    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        let pi = T::PI();
        let one = T::one();
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        v2(
            three * pi * (T::lit(6.0) * pi * x[0]).sin() + two * (x[0] - one) * (one + sq((three * pi * x[1]).sin())),
            sq(x[0] - one) * three * pi * (T::lit(6.0) * pi * x[1]).sin()
                + two * (x[1] - one) * (one + sq((two * pi * x[1]).sin()))
                + sq(x[1] - one) * two * pi * (T::lit(4.0) * pi * x[1]).sin(),
        )
    }
    fn known_min(&self) -> Option<T> {
        Some(T::zero())
    }
    fn minimizer(&self) -> Option<Vector<T>> {
        Some(Vector::filled(2, T::one()))
    }
}
