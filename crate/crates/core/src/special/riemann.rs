//! Riemann zeta for `sigma > 0` through the alternating (eta) series with
//! Borwein's Chebyshev-weighted acceleration:
//!
//! `eta(s) ~ sum_{k<n} (-1)^k (1 - e_k) (k + 1)^{-s}`, `zeta = eta / (1 - 2^{1-s})`,
//!
//! where `e_k` are the normalized partial sums of the weights
//! `t_i = n (n + i - 1)! 4^i / ((n - i)! (2i)!)`, formed in log space.
//! The truncation error is at most
//! `2 (3 + sqrt 8)^{-n} Gamma(sigma) / |Gamma(s)| / |1 - 2^{1-s}|`.

use super::{check_finite, AccuracyBudget, Evaluation};
use crate::error::{Error, Result};
use crate::numerics::{ln_gamma, ln_gamma_real, pairwise_sum, pow_neg};
use crate::scalar::Real;
use num_complex::Complex;

pub fn riemann_zeta_strip<T: Real>(s: Complex<T>, acc: AccuracyBudget<T>) -> Result<Evaluation<T>> {
    check_finite(s)?;
    let one = Complex::new(T::one(), T::zero());
    if s == one {
        return Err(Error::PoleAt1);
    }
    if s.re <= T::zero() {
        return Err(Error::Domain(format!("eta continuation needs sigma > 0, got {}", s.re)));
    }
    let two = T::lit(2.0);
    let denom = one - pow_neg(two, s - one);
    let dn = denom.norm();
    if dn < T::lit(1e-8) {
        return Err(Error::Domain(format!("1 - 2^(1-s) vanishes at s = {s}")));
    }
    let ln_rate = (T::lit(3.0) + T::lit(8.0).sqrt()).ln();
    let ln_prefactor = two.ln() + ln_gamma_real(s.re) - ln_gamma(s).re - dn.ln();
    let need = (ln_prefactor - (acc.abs_tol * T::lit(0.5)).ln()) / ln_rate;
    let n = need.ceil().max(T::one());
    if !(n <= T::from_usize(acc.max_terms).unwrap()) {
        return Err(Error::BudgetExceeded(format!("eta series at s = {s} needs {n} terms")));
    }
    let n = n.to_usize().unwrap();

    // ln t_i, then e_k = sum_{i<=k} t_i / sum t_i with a log-sum-exp shift.
    let nf = T::from_usize(n).unwrap();
    let four_ln = T::lit(4.0).ln();
    let ln_t: Vec<T> = (0..=n)
        .map(|i| {
            let fi = T::from_usize(i).unwrap();
            nf.ln() + ln_gamma_real(nf + fi) - ln_gamma_real(nf - fi + T::one())
                - ln_gamma_real(T::lit(2.0) * fi + T::one())
                + fi * four_ln
        })
        .collect();
    let peak = ln_t.iter().copied().fold(T::neg_infinity(), T::max);
    let w: Vec<T> = ln_t.iter().map(|&l| (l - peak).exp()).collect();
    let total = pairwise_sum(&w);
    let mut cum = T::zero();
    let mut terms = Vec::with_capacity(n);
    let mut mag = T::zero();
    for (k, wk) in w.iter().take(n).enumerate() {
        cum += *wk;
        let weight = T::one() - cum / total;
        let sign = if k % 2 == 0 { T::one() } else { -T::one() };
        let term = pow_neg(T::from_usize(k + 1).unwrap(), s) * (sign * weight);
        mag += term.norm();
        terms.push(term);
    }
    let eta = pairwise_sum(&terms);
    let value = eta / denom;
    let trunc = (ln_prefactor - nf * ln_rate).exp();
    let rounding = T::epsilon() * (mag * T::lit(8.0) + T::from_usize(n).unwrap()) / dn;
    Ok(Evaluation { value, abs_err_bound: trunc + rounding, terms: n })
}
