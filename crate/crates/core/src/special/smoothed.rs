//! Smoothed, absolutely convergent approximants
//!
//! `phi_n(s) = sum c_k v1(k, n) k^{-s}` and
//! `zeta_n(s, alpha; B) = sum b_m v2(m, n, alpha) (m + alpha)^{-s}`
//!
//! with `v1(k, n) = exp(-(k/n)^{s1})` and
//! `v2(m, n, alpha) = exp(-((m + alpha)/(n + alpha))^{s1})`, `s1 > 1/2`.
//! Both converge for `sigma > 1/2`. The tails are bounded through the upper
//! incomplete gamma function:
//! `sum_{k>K} exp(-(k/n)^{s1}) <= (n/s1) Gamma(1/s1, (K/n)^{s1})`.

use super::matsumoto::{CoeffTable, MatsumotoSpec};
use super::periodic::PeriodicSequence;
use super::{check_finite, AccuracyBudget, Evaluation};
use crate::error::{Error, Result};
use crate::numerics::{pairwise_sum, pow_neg, upper_gamma_bound};
use crate::scalar::Real;
use num_complex::Complex;
use num_traits::Zero;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingParam<T> {
    pub n: u64,
    pub sigma_star1: T,
}

impl<T: Real> SmoothingParam<T> {
    pub fn new(n: u64, sigma_star1: T) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("smoothing length n must be >= 1".into()));
        }
        if !(sigma_star1 > T::lit(0.5)) || !sigma_star1.is_finite() {
            return Err(Error::InvalidInput(format!("sigma_star1 must exceed 1/2, got {sigma_star1}")));
        }
        Ok(Self { n, sigma_star1 })
    }
}

#[inline]
pub fn v1<T: Real>(k: T, n: T, s1: T) -> T {
    (-(k / n).powf(s1)).exp()
}

#[inline]
pub fn v2<T: Real>(m: T, n: T, alpha: T, s1: T) -> T {
    (-((m + alpha) / (n + alpha)).powf(s1)).exp()
}

/// `int_x0^inf exp(-((x + c)/L)^{s1}) dx` bound, with `x0 + c` = `start`.
fn smooth_integral_bound<T: Real>(start: T, scale: T, s1: T) -> T {
    let inv = T::one() / s1;
    scale * inv * upper_gamma_bound(inv, (start / scale).powf(s1))
}

/// Coefficient envelope `|c_k| <= amp * k^{gamma}`. Exact for one root per
/// prime; for more roots it is the heuristic `(9 k^{1/4})^{G-1}` covering the
/// divisor-type growth at desk-scale `k`.
pub(crate) fn coeff_envelope<T: Real>(spec: &MatsumotoSpec<T>) -> (T, T) {
    let g = spec.max_degree();
    if g <= 1 {
        (T::one(), T::zero())
    } else {
        let e = T::from_usize(g - 1).unwrap();
        (T::lit(9.0).powf(e), e * T::lit(0.25))
    }
}

/// Smallest `K` (within `[lo, cap]`) with `tail(K) <= tol`, by doubling then bisection.
fn smallest_cutoff<T: Real, F: Fn(u64) -> T>(lo: u64, cap: u64, tol: T, tail: F) -> Option<u64> {
    let mut hi = lo.max(1);
    while tail(hi) > tol {
        if hi >= cap {
            return None;
        }
        hi = (hi * 2).min(cap);
    }
    let mut lo = (hi / 2).max(1);
    if tail(lo) <= tol {
        return Some(lo);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if tail(mid) <= tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// Cutoff and tail bound for `phi_n` at real part `sigma`.
pub(crate) fn phi_n_cutoff<T: Real>(
    spec: &MatsumotoSpec<T>,
    sigma: T,
    smooth: SmoothingParam<T>,
    tol: T,
    max_terms: usize,
) -> Result<(u64, T)> {
    let (amp, gamma) = coeff_envelope(spec);
    if gamma >= sigma {
        return Err(Error::Domain(format!(
            "coefficient envelope k^{gamma} too large for sigma = {sigma}"
        )));
    }
    let n = T::from_u64_lossy(smooth.n);
    let tail = |k: u64| {
        let kf = T::from_u64_lossy(k);
        amp * kf.powf(gamma - sigma) * smooth_integral_bound(kf, n, smooth.sigma_star1)
    };
    let k = smallest_cutoff(smooth.n, max_terms as u64, tol, tail).ok_or_else(|| {
        Error::BudgetExceeded(format!("smoothed series needs more than {max_terms} terms"))
    })?;
    Ok((k, tail(k)))
}

pub fn smoothed_phi_n<T: Real>(
    s: Complex<T>,
    spec: &MatsumotoSpec<T>,
    smooth: SmoothingParam<T>,
    acc: AccuracyBudget<T>,
) -> Result<Evaluation<T>> {
    check_finite(s)?;
    if s.re <= T::lit(0.5) {
        return Err(Error::Domain(format!("smoothed series needs sigma > 1/2, got {}", s.re)));
    }
    let (k, tail) = phi_n_cutoff(spec, s.re, smooth, acc.abs_tol * T::lit(0.5), acc.max_terms)?;
    let table = CoeffTable::build(spec, k, acc.max_terms)?;
    let n = T::from_u64_lossy(smooth.n);
    let (value, abs) = table.weighted_sum(s, |_, e| {
        Complex::new(v1(T::from_u64_lossy(e.k), n, smooth.sigma_star1), T::zero())
    });
    let rounding = T::epsilon() * abs * (T::lit(8.0) + s.norm() * T::from_u64_lossy(k).ln());
    Ok(Evaluation { value, abs_err_bound: tail + rounding, terms: table.entries.len() })
}

/// Number of terms `M` (indices `m < M`) and the tail bound for `zeta_n`.
pub(crate) fn periodic_n_cutoff<T: Real>(
    sigma: T,
    alpha: T,
    bmax: T,
    smooth: SmoothingParam<T>,
    tol: T,
    max_terms: usize,
) -> Result<(u64, T)> {
    let scale = T::from_u64_lossy(smooth.n) + alpha;
    let s1 = smooth.sigma_star1;
    let tail = |m: u64| {
        let start = T::from_u64_lossy(m) + alpha;
        bmax * start.powf(-sigma) * ((-(start / scale).powf(s1)).exp() + smooth_integral_bound(start, scale, s1))
    };
    let m = smallest_cutoff(smooth.n, max_terms as u64, tol, tail).ok_or_else(|| {
        Error::BudgetExceeded(format!("smoothed periodic series needs more than {max_terms} terms"))
    })?;
    Ok((m, tail(m)))
}

pub fn smoothed_periodic_zeta_n<T: Real>(
    s: Complex<T>,
    alpha: T,
    b: &PeriodicSequence<T>,
    smooth: SmoothingParam<T>,
    acc: AccuracyBudget<T>,
) -> Result<Evaluation<T>> {
    check_finite(s)?;
    if s.re <= T::lit(0.5) {
        return Err(Error::Domain(format!("smoothed series needs sigma > 1/2, got {}", s.re)));
    }
    let bmax = b.max_abs();
    if bmax == T::zero() {
        return Ok(Evaluation { value: Complex::zero(), abs_err_bound: T::zero(), terms: 0 });
    }
    let (m, tail) = periodic_n_cutoff(s.re, alpha, bmax, smooth, acc.abs_tol * T::lit(0.5), acc.max_terms)?;
    let n = T::from_u64_lossy(smooth.n);
    let mut terms = Vec::with_capacity(m as usize);
    let mut abs = T::zero();
    for i in 0..m as usize {
        let bm = b.at(i);
        if bm == Complex::zero() {
            continue;
        }
        let x = T::from_usize(i).unwrap();
        let term = bm * pow_neg(x + alpha, s) * v2(x, n, alpha, smooth.sigma_star1);
        abs += term.norm();
        terms.push(term);
    }
    let value = pairwise_sum(&terms);
    let rounding = T::epsilon() * abs * (T::lit(8.0) + s.norm() * (T::from_u64_lossy(m) + alpha).ln());
    Ok(Evaluation { value, abs_err_bound: tail + rounding, terms: m as usize })
}
