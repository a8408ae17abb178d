//! Catalog of benchmark objectives, addressable by name.
//!
//! Large-scale entries take a parametric dimension (default
//! [`DEFAULT_LARGE_N`]); small-scale entries have a fixed dimension. All
//! entries start from `2·ones(n)`.

mod large;
mod small;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::Vector;
use crate::problem::{Objective, Problem};
use crate::scalar::Scalar;

pub use large::{
    DixonPrice, Levy, Powell, Rastrigin, Rosenbrock, RotatedHyperEllipsoid, Schwefel, Sphere, StyblinskiTang,
    SumSquares, Trid,
};
pub use small::{
    Beale, Bohachevsky, Booth, Branin, Colville, Easom, Griewank, Hosaki, Levy13, Matyas, McCormick, SixHumpCamel,
    ThreeHumpCamel, Trecanni, Zakharov, Zettl,
};

pub const DEFAULT_LARGE_N: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown problem `{name}`; known problems: {}", .known.join(", "))]
    UnknownProblem { name: String, known: Vec<&'static str> },
    #[error("problem `{name}` does not support dimension {n}: {reason}")]
    InvalidDimension { name: &'static str, n: usize, reason: &'static str },
}

/// How an entry's dimension is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    /// Any `n ≥ min`, with an optional divisibility requirement.
    Parametric {
        min: usize,
        multiple_of: usize,
    },
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Large,
    Small,
}

/// Static description of a catalog entry.
#[derive(Debug, Clone, Copy)]
pub struct Entry {
    pub name: &'static str,
    pub scale: Scale,
    pub dimension: Dimension,
    /// Part of the mandatory benchmark suite.
    pub mandatory: bool,
}

const fn large(name: &'static str) -> Entry {
    Entry { name, scale: Scale::Large, dimension: Dimension::Parametric { min: 2, multiple_of: 1 }, mandatory: true }
}

const fn small(name: &'static str, n: usize) -> Entry {
    Entry { name, scale: Scale::Small, dimension: Dimension::Fixed(n), mandatory: true }
}

pub const ENTRIES: &[Entry] = &[
    large("trid"),
    large("rosenbrock"),
    large("dixon-price"),
    large("levy"),
    Entry {
        name: "powell",
        scale: Scale::Large,
        dimension: Dimension::Parametric { min: 4, multiple_of: 4 },
        mandatory: true,
    },
    large("rastrigin"),
    large("rotated-hyper-ellipsoid"),
    large("schwefel"),
    large("sphere"),
    large("styblinski-tang"),
    large("sum-squares"),
    small("beale", 2),
    small("booth", 2),
    small("branin", 2),
    small("easom", 2),
    small("griewank", 10),
    small("matyas", 2),
    small("mccormick", 2),
    small("zakharov", 10),
    small("bohachevsky", 2),
    small("colville", 4),
    small("three-hump-camel", 2),
    small("six-hump-camel", 2),
    small("trecanni", 2),
    small("zettl", 2),
    Entry { mandatory: false, ..small("hosaki", 2) },
    Entry { mandatory: false, ..small("levy13", 2) },
];

/// Lower-cases and maps `_`/space to `-`, so `Dixon_Price` resolves to `dixon-price`.
pub fn normalize_name(name: &str) -> String {
    name.trim().chars().map(|c| if c == '_' || c == ' ' { '-' } else { c.to_ascii_lowercase() }).collect()
}

pub fn entry(name: &str) -> Option<&'static Entry> {
    let key = normalize_name(name);
    ENTRIES.iter().find(|e| e.name == key)
}

pub fn names() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.name).collect()
}

pub fn mandatory_names() -> Vec<&'static str> {
    ENTRIES.iter().filter(|e| e.mandatory).map(|e| e.name).collect()
}

fn build<T: Scalar>(name: &str, n: usize) -> Problem<T> {
    match name {
        "trid" => Box::new(Trid { n }),
        "rosenbrock" => Box::new(Rosenbrock { n }),
        "dixon-price" => Box::new(DixonPrice { n }),
        "levy" => Box::new(Levy { n }),
        "powell" => Box::new(Powell { n }),
        "rastrigin" => Box::new(Rastrigin { n }),
        "rotated-hyper-ellipsoid" => Box::new(RotatedHyperEllipsoid { n }),
        "schwefel" => Box::new(Schwefel { n }),
        "sphere" => Box::new(Sphere { n }),
        "styblinski-tang" => Box::new(StyblinskiTang { n }),
        "sum-squares" => Box::new(SumSquares { n }),
        "beale" => Box::new(Beale),
        "booth" => Box::new(Booth),
        "branin" => Box::new(Branin),
        "easom" => Box::new(Easom),
        "griewank" => Box::new(Griewank { n }),
        "matyas" => Box::new(Matyas),
        "mccormick" => Box::new(McCormick),
        "zakharov" => Box::new(Zakharov { n }),
        "bohachevsky" => Box::new(Bohachevsky),
        "colville" => Box::new(Colville),
        "three-hump-camel" => Box::new(ThreeHumpCamel),
        "six-hump-camel" => Box::new(SixHumpCamel),
        "trecanni" => Box::new(Trecanni),
        "zettl" => Box::new(Zettl),
        "hosaki" => Box::new(Hosaki),
        "levy13" => Box::new(Levy13),
        other => unreachable!("catalog entry `{other}` has no constructor"),
    }
}

/// Resolves `name` at dimension `n`.
///
/// `None` selects the default dimension. Fixed-dimension entries only accept
/// their own dimension.
pub fn by_name<T: Scalar>(name: &str, n: Option<usize>) -> Result<Problem<T>, CatalogError> {
    let e = entry(name).ok_or_else(|| CatalogError::UnknownProblem { name: name.to_string(), known: names() })?;
    let n = match (e.dimension, n) {
        (Dimension::Fixed(k), None) => k,
        (Dimension::Fixed(k), Some(m)) if m == k => k,
        (Dimension::Fixed(_), Some(m)) => {
            return Err(CatalogError::InvalidDimension { name: e.name, n: m, reason: "dimension is fixed" })
        }
        (Dimension::Parametric { .. }, None) => DEFAULT_LARGE_N,
        (Dimension::Parametric { min, multiple_of }, Some(m)) => {
            if m < min {
                return Err(CatalogError::InvalidDimension { name: e.name, n: m, reason: "dimension too small" });
            }
            if m % multiple_of != 0 {
                return Err(CatalogError::InvalidDimension {
                    name: e.name,
                    n: m,
                    reason: "dimension must be a multiple of 4",
                });
            }
            m
        }
    };
    Ok(build(e.name, n))
}

/// Every catalog entry; parametric entries are built at `large_n`.
pub fn catalog<T: Scalar>(large_n: usize) -> Vec<Problem<T>> {
    ENTRIES.iter().map(|e| instantiate(e, large_n)).collect()
}

/// The mandatory benchmark suite; parametric entries are built at `large_n`.
pub fn mandatory_suite<T: Scalar>(large_n: usize) -> Vec<Problem<T>> {
    ENTRIES.iter().filter(|e| e.mandatory).map(|e| instantiate(e, large_n)).collect()
}

fn instantiate<T: Scalar>(e: &Entry, large_n: usize) -> Problem<T> {
    match e.dimension {
        Dimension::Fixed(k) => build(e.name, k),
        Dimension::Parametric { multiple_of, min } => build(e.name, (large_n.max(min) / multiple_of) * multiple_of),
    }
}

/// Largest discrepancy between the analytic gradient and central differences
/// of the objective, over `trials` uniform points in `[−5, 5]ⁿ`.
///
/// Per point the error is `‖g − g_fd‖∞ / max(1, ‖g‖∞)`.
pub fn gradient_selfcheck<T: Scalar, P: Objective<T> + ?Sized>(problem: &P, trials: usize, seed: u64) -> T {
    let n = problem.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cbrt_eps = T::epsilon().cbrt();
    let mut worst = T::zero();
    for _ in 0..trials.max(1) {
        let x = Vector::from_fn(n, |_| T::lit(rng.gen_range(-5.0..5.0)));
        let g = problem.gradient(&x);
        let mut probe = x.clone();
        let mut err = T::zero();
        for i in 0..n {
            let h = cbrt_eps * T::one().max(x[i].abs());
            let saved = probe[i];
            probe[i] = saved + h;
            let fp = problem.value(&probe);
            probe[i] = saved - h;
            let fm = problem.value(&probe);
            probe[i] = saved;
            let fd = (fp - fm) / (h + h);
            err = err.max((g[i] - fd).abs());
        }
        worst = worst.max(err / T::one().max(g.norm_inf()));
    }
    worst
}
