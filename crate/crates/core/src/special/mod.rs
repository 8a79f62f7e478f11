//! Zeta-type evaluators with explicit accuracy budgets.

pub mod bernoulli;
pub mod hurwitz;
pub mod matsumoto;
pub mod mean_square;
pub mod periodic;
pub mod riemann;
pub mod smoothed;

use crate::error::{Error, Result};
use crate::scalar::Real;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

pub use hurwitz::{hurwitz_zeta, hurwitz_zeta_regular};
pub use matsumoto::{
    matsumoto_product, matsumoto_series, p0_local_factors, partial_matsumoto, CoeffTable,
    MatsumotoSpec, SteudingMeta,
};
pub use mean_square::mean_square;
pub use periodic::{periodic_hurwitz_zeta, periodic_hurwitz_zeta_direct, PeriodicSequence};
pub use riemann::riemann_zeta_strip;
pub use smoothed::{smoothed_periodic_zeta_n, smoothed_phi_n, v1, v2, SmoothingParam};

/// A point `s = sigma + i t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoint<T> {
    pub sigma: T,
    pub t: T,
}

impl<T: Real> ComplexPoint<T> {
    pub fn new(sigma: T, t: T) -> Result<Self> {
        if !sigma.is_finite() || !t.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite point ({sigma}, {t})")));
        }
        Ok(Self { sigma, t })
    }

    pub fn to_complex(self) -> Complex<T> {
        Complex::new(self.sigma, self.t)
    }
}

/// Requested absolute accuracy and a cap on the work spent reaching it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccuracyBudget<T> {
    pub abs_tol: T,
    pub max_terms: usize,
}

impl<T: Real> AccuracyBudget<T> {
    pub fn new(abs_tol: T, max_terms: usize) -> Result<Self> {
        if !(abs_tol > T::zero()) || !abs_tol.is_finite() {
            return Err(Error::InvalidInput(format!("abs_tol must be positive, got {abs_tol}")));
        }
        if max_terms == 0 {
            return Err(Error::InvalidInput("max_terms must be at least 1".into()));
        }
        Ok(Self { abs_tol, max_terms })
    }

    /// Same cap, tolerance scaled by `factor`.
    pub fn scaled(self, factor: T) -> Self {
        Self { abs_tol: self.abs_tol * factor, max_terms: self.max_terms }
    }
}

impl<T: Real> Default for AccuracyBudget<T> {
    fn default() -> Self {
        Self { abs_tol: T::lit(1e-10), max_terms: 50_000_000 }
    }
}

/// Hurwitz shift parameter `0 < alpha <= 1`. The transcendence flag is the
/// caller's assertion; every check in this crate is numeric in `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HurwitzParam<T> {
    pub alpha: T,
    #[serde(default)]
    pub transcendental_flag: bool,
}

impl<T: Real> HurwitzParam<T> {
    pub fn new(alpha: T, transcendental_flag: bool) -> Result<Self> {
        if !(alpha > T::zero() && alpha <= T::one()) {
            return Err(Error::InvalidInput(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        Ok(Self { alpha, transcendental_flag })
    }
}

/// A value with the evaluator's error bound and the number of terms used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation<T> {
    pub value: Complex<T>,
    pub abs_err_bound: T,
    pub terms: usize,
}

pub(crate) fn check_finite<T: Real>(s: Complex<T>) -> Result<()> {
    if s.re.is_finite() && s.im.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("non-finite argument {s}")))
    }
}
