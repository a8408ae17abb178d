//! Switching preconditioner for the continuation step.
//!
//! While the run looks well conditioned the Newton-like direction is
//! `−H g` with `H` the single-pair inverse update
//!
//! ```text
//! H = I − (y sᵀ + s yᵀ)/(yᵀs) + 2 (yᵀy)/(yᵀs)² · s sᵀ
//! ```
//!
//! applied matrix-free. Once five trial steps have had a poor model ratio, or
//! the curvature test `|sᵀy| > θ‖s‖²` fails, the direction comes from the
//! Hessian (analytic or forward-difference) instead. The switch on the bad
//! ratio count is permanent.

use thiserror::Error;

use crate::linalg::{solve_spd_shifted, LinalgError, SymMatrix, Vector};
use crate::scalar::Scalar;

/// Number of poor-ratio iterations after which the Hessian branch is used for good.
pub const K_BAD_LIMIT: usize = 5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PreconditionerError {
    #[error("curvature pair has yᵀs = 0")]
    DegenerateCurvature,
    #[error("argument outside the domain: {0}")]
    Domain(&'static str),
    #[error("pair vectors have lengths {s} and {y}")]
    LengthMismatch { s: usize, y: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Most recent step `s = x_{k+1} − x_k` and gradient change `y = g_{k+1} − g_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvaturePair<T> {
    pub s: Vector<T>,
    pub y: Vector<T>,
}

impl<T: Scalar> CurvaturePair<T> {
    pub fn new(s: Vector<T>, y: Vector<T>) -> Result<Self, PreconditionerError> {
        if s.len() != y.len() {
            return Err(PreconditionerError::LengthMismatch { s: s.len(), y: y.len() });
        }
        Ok(Self { s, y })
    }

    /// The all-zero pair used before the first accepted step.
    pub fn zeros(n: usize) -> Self {
        Self { s: Vector::zeros(n), y: Vector::zeros(n) }
    }

    pub fn dim(&self) -> usize {
        self.s.len()
    }

    pub fn sy(&self) -> T {
        self.s.dot(&self.y)
    }

    /// `|sᵀy| > θ‖s‖²`; always false for the zero pair.
    pub fn passes_curvature_test(&self, theta: T) -> bool {
        self.sy().abs() > theta * self.s.norm_squared()
    }
}

/// Returns `H g` for the single-pair inverse update without forming `H`.
pub fn apply_lbfgs_inverse<T: Scalar>(
    pair: &CurvaturePair<T>,
    g: &Vector<T>,
) -> Result<Vector<T>, PreconditionerError> {
    let (s, y) = (&pair.s, &pair.y);
    let sy = pair.sy();
    if sy == T::zero() || !sy.is_finite() {
        return Err(PreconditionerError::DegenerateCurvature);
    }
    let sg = s.dot(g);
    let yg = y.dot(g);
    let yy = y.norm_squared();
    let mut out = g.clone();
    out.axpy(-sg / sy, y);
    out.axpy(-yg / sy + T::lit(2.0) * yy * sg / (sy * sy), s);
    Ok(out)
}

/// `‖H y − (yᵀy / yᵀs) s‖`, which vanishes for the update above.
pub fn scaling_secant_check<T: Scalar>(pair: &CurvaturePair<T>) -> Result<T, PreconditionerError> {
    let hy = apply_lbfgs_inverse(pair, &pair.y)?;
    let ratio = pair.y.norm_squared() / pair.sy();
    let mut r = hy;
    r.axpy(-ratio, &pair.s);
    Ok(r.norm())
}

/// Trace-minus-log-determinant of the two-parameter update
/// `B = λ(I − s sᵀ/sᵀs) + σ y yᵀ/yᵀs` as a function of `(λ, σ)`:
///
/// ```text
/// (n−1)(λ − ln λ) + σ‖y‖²/(yᵀs) − ln σ − ln(yᵀs) + ln ‖s‖²
/// ```
///
/// Its minimizer is `λ = 1`, `σ = yᵀs/‖y‖²`.
pub fn measurement_phi<T: Scalar>(lam: T, sigma: T, pair: &CurvaturePair<T>) -> Result<T, PreconditionerError> {
    if lam <= T::zero() {
        return Err(PreconditionerError::Domain("lambda must be positive"));
    }
    if sigma <= T::zero() {
        return Err(PreconditionerError::Domain("sigma must be positive"));
    }
    let sy = pair.sy();
    if sy <= T::zero() {
        return Err(PreconditionerError::Domain("yᵀs must be positive"));
    }
    let n1 = T::from_count(pair.dim()) - T::one();
    Ok(n1 * (lam - lam.ln()) + sigma * pair.y.norm_squared() / sy - sigma.ln() - sy.ln() + pair.s.norm_squared().ln())
}

/// `(λ*, σ*) = (1, yᵀs/‖y‖²)`
pub fn optimal_phi_parameters<T: Scalar>(pair: &CurvaturePair<T>) -> (T, T) {
    (T::one(), pair.sy() / pair.y.norm_squared())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Lbfgs,
    Hessian,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Lbfgs => "lbfgs",
            Mode::Hessian => "hessian",
        }
    }
}

/// A Newton-like direction together with the diagonal shift used to get it.
#[derive(Debug, Clone)]
pub struct Direction<T> {
    pub s_newton: Vector<T>,
    /// Zero unless the Hessian had to be regularized.
    pub shift: T,
}

/// Preconditioner memory carried between iterations.
#[derive(Debug, Clone)]
pub struct PreconditionerState<T> {
    pair: CurvaturePair<T>,
    k_bad: usize,
    theta: T,
    mode: Mode,
    hessian: SymMatrix<T>,
    /// Point at which `hessian` was evaluated.
    hessian_at: Vector<T>,
}

impl<T: Scalar> PreconditionerState<T> {
    /// Starts in the Hessian branch with `b0 = ∇²f(x0)` and the zero pair.
    pub fn new(theta: T, b0: SymMatrix<T>, x0: &Vector<T>) -> Self {
        Self {
            pair: CurvaturePair::zeros(x0.len()),
            k_bad: 0,
            theta,
            mode: Mode::Hessian,
            hessian: b0,
            hessian_at: x0.clone(),
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn k_bad(&self) -> usize {
        self.k_bad
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn pair(&self) -> &CurvaturePair<T> {
        &self.pair
    }

    pub fn hessian(&self) -> &SymMatrix<T> {
        &self.hessian
    }

    /// `s^N = −H g` for the current branch.
    pub fn direction(&self, g: &Vector<T>) -> Result<Direction<T>, PreconditionerError> {
        match self.mode {
            Mode::Lbfgs => {
                let mut s_newton = apply_lbfgs_inverse(&self.pair, g)?;
                s_newton.scale_mut(-T::one());
                Ok(Direction { s_newton, shift: T::zero() })
            }
            Mode::Hessian => {
                let out = solve_spd_shifted(&self.hessian, &g.neg())?;
                Ok(Direction { s_newton: out.solution, shift: out.shift })
            }
        }
    }

    /// Records the outcome of one trial step and picks the branch for the next.
    ///
    /// `new_pair` is `None` after a rejected step, in which case the stored
    /// pair is kept. `rho_bad` is `|1 − ρ| ≥ η₂`. When the Hessian branch is
    /// selected, `hessian_at(x, g)` is called to refresh the cached matrix
    /// unless it was already evaluated at `x_next`. Returns whether a refresh
    /// happened.
    pub fn update_and_select<F>(
        &mut self,
        new_pair: Option<CurvaturePair<T>>,
        rho_bad: bool,
        x_next: &Vector<T>,
        g_next: &Vector<T>,
        hessian_at: F,
    ) -> Result<bool, PreconditionerError>
    where
        F: FnOnce(&Vector<T>, &Vector<T>) -> Result<SymMatrix<T>, LinalgError>,
    {
        if let Some(pair) = new_pair {
            if pair.dim() != self.pair.dim() {
                return Err(PreconditionerError::LengthMismatch { s: pair.s.len(), y: pair.y.len() });
            }
            self.pair = pair;
        }
        if rho_bad {
            self.k_bad += 1;
        }
        if self.k_bad >= K_BAD_LIMIT || !self.pair.passes_curvature_test(self.theta) {
            self.mode = Mode::Hessian;
            if self.hessian_at != *x_next {
                self.hessian = hessian_at(x_next, g_next)?;
                self.hessian_at = x_next.clone();
                return Ok(true);
            }
        } else {
            self.mode = Mode::Lbfgs;
        }
        Ok(false)
    }
}
