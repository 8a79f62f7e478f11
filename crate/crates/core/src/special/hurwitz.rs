//! Hurwitz zeta `zeta(s, a) = sum_{m>=0} (m + a)^{-s}` by Euler-Maclaurin.
//!
//! The sum is split at a shift `M` chosen from the remainder bound
//!
//! `|R| <= 4 |(s)_{2P}| / (2 pi)^{2P} * (M + a)^{-sigma-2P+1} / (sigma + 2P - 1)`,
//!
//! with the order `P` fixed at [`EM_ORDER`]. The bound, and therefore the
//! evaluator, is valid for `sigma > 1 - 2P`.

use super::bernoulli::B2J_OVER_FACT;
use super::{check_finite, AccuracyBudget, Evaluation};
use crate::error::{Error, Result};
use crate::numerics::{expm1_over_z, pairwise_sum, pow_neg};
use crate::scalar::Real;
use num_complex::Complex;
use num_traits::Zero;

/// Number of Bernoulli correction terms.
pub const EM_ORDER: usize = 20;

const CHUNK: usize = 1024;

/// `zeta(s, a)` for `a > 0`, `s != 1`.
pub fn hurwitz_zeta<T: Real>(s: Complex<T>, a: T, acc: AccuracyBudget<T>) -> Result<Evaluation<T>> {
    if s.re == T::one() && s.im == T::zero() {
        return Err(Error::PoleAt1);
    }
    euler_maclaurin(s, a, acc, false)
}

/// The regular part `zeta(s, a) - 1/(s - 1)`, entire in `s` and finite at `s = 1`.
pub fn hurwitz_zeta_regular<T: Real>(
    s: Complex<T>,
    a: T,
    acc: AccuracyBudget<T>,
) -> Result<Evaluation<T>> {
    euler_maclaurin(s, a, acc, true)
}

/// Euler-Maclaurin tail `sum_{m>=M} (m + a)^{-s}` from `n = M + a`; with
/// `regular` the pole term `1/(s-1)` is removed.
pub(crate) fn em_tail<T: Real>(s: Complex<T>, n: T, ln_n: T, regular: bool) -> Complex<T> {
    let u = pow_neg(n, s);
    let one = Complex::new(T::one(), T::zero());
    let pole_part = if regular {
        // ((n^{1-s} - 1) / (s - 1)) = -L E((1 - s) L) with L = ln n
        -expm1_over_z((one - s) * ln_n) * ln_n
    } else {
        u * n / (s - one)
    };
    let mut corr = Complex::<T>::zero();
    let inv_n = T::one() / n;
    let mut r = s * inv_n; // (s)_{2j-1} n^{-(2j-1)}
    for (j, &c) in B2J_OVER_FACT.iter().take(EM_ORDER).enumerate() {
        corr += r * T::lit(c);
        let k = T::from_usize(2 * j + 1).unwrap();
        r = r * (s + k) * inv_n * (s + k + T::one()) * inv_n;
    }
    pole_part + u * (corr + T::lit(0.5))
}

/// Natural log of the remainder bound at `n = M + a`.
pub(crate) fn ln_remainder_bound<T: Real>(s: Complex<T>, ln_n: T) -> T {
    let two_p = T::from_usize(2 * EM_ORDER).unwrap();
    let q = s.re + two_p - T::one();
    let ln_poch: T = (0..2 * EM_ORDER)
        .map(|i| (s + T::from_usize(i).unwrap()).norm().ln())
        .sum();
    T::lit(4.0).ln() + ln_poch - two_p * T::two_pi().ln() - q * ln_n - q.ln()
}

/// Smallest shift `M` meeting `tol`, as a float (may exceed any integer range).
pub(crate) fn required_shift<T: Real>(s: Complex<T>, a: T, tol: T) -> T {
    let two_p = T::from_usize(2 * EM_ORDER).unwrap();
    let q = s.re + two_p - T::one();
    // ln_remainder_bound is affine in ln n with slope -q.
    let at_one = ln_remainder_bound(s, T::zero());
    let ln_n = (at_one - tol.ln()) / q;
    (ln_n.exp() - a).ceil().max(T::one())
}

fn euler_maclaurin<T: Real>(
    s: Complex<T>,
    a: T,
    acc: AccuracyBudget<T>,
    regular: bool,
) -> Result<Evaluation<T>> {
    check_finite(s)?;
    if !(a > T::zero()) || !a.is_finite() {
        return Err(Error::InvalidInput(format!("Hurwitz parameter must be positive, got {a}")));
    }
    let two_p = 2 * EM_ORDER;
    if s.re + T::from_usize(two_p).unwrap() - T::one() <= T::zero() {
        return Err(Error::Domain(format!(
            "Euler-Maclaurin order {EM_ORDER} is valid only for sigma > {}",
            1 - two_p as i64
        )));
    }
    let half_tol = acc.abs_tol * T::lit(0.5);
    let m_req = required_shift(s, a, half_tol);
    if !(m_req <= T::from_usize(acc.max_terms).unwrap()) {
        return Err(Error::BudgetExceeded(format!(
            "Hurwitz zeta at s = {s} needs shift {m_req}, cap {}",
            acc.max_terms
        )));
    }
    let m = m_req.to_usize().unwrap();

    let (head, head_abs) = head_sum(s, a, m);

    let n = T::from_usize(m).unwrap() + a;
    let ln_n = n.ln();
    let tail = em_tail(s, n, ln_n, regular);
    let value = head + tail;

    let remainder = ln_remainder_bound(s, ln_n).exp();
    let mag = head_abs + tail.norm();
    let rounding = T::epsilon() * mag * (T::lit(16.0) + s.norm() * ln_n.abs());
    Ok(Evaluation { value, abs_err_bound: remainder + rounding, terms: m + EM_ORDER })
}

/// `sum_{m<count} (m + a)^{-s}` and `sum (m + a)^{-sigma}`, summed in fixed
/// chunks so the rounding pattern depends only on `count`.
fn head_sum<T: Real>(s: Complex<T>, a: T, count: usize) -> (Complex<T>, T) {
    let mut chunks = Vec::with_capacity(count / CHUNK + 1);
    let mut abs_total = T::zero();
    let mut start = 0;
    while start < count {
        let end = (start + CHUNK).min(count);
        let mut acc = Complex::zero();
        for m in start..end {
            let x = T::from_usize(m).unwrap() + a;
            let term = pow_neg(x, s);
            abs_total += (-s.re * x.ln()).exp();
            acc += term;
        }
        chunks.push(acc);
        start = end;
    }
    (pairwise_sum(&chunks), abs_total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn acc(tol: f64) -> AccuracyBudget<f64> {
        AccuracyBudget::new(tol, 10_000_000).unwrap()
    }

    /// Brute-force oracle: a million terms plus the midpoint integral tail
    /// `int_{M-1/2}^inf x^{-2} dx`, accurate to about `M^{-3}/12`.
    fn brute_square(a: f64) -> f64 {
        let m = 1_000_000usize;
        let head: f64 = (0..m).rev().map(|k| (k as f64 + a).powi(-2)).sum();
        head + 1.0 / (m as f64 + a - 0.5)
    }

    #[test]
    fn zeta_two_matches_brute_force() {
        let oracle = brute_square(1.0);
        assert!((oracle - PI * PI / 6.0).abs() < 1e-13);
        let z = hurwitz_zeta(Complex::new(2.0, 0.0), 1.0, acc(1e-13)).unwrap();
        assert!((z.value.re - oracle).abs() < 1e-12);
        assert!(z.value.im.abs() < 1e-15);
        assert!(z.abs_err_bound <= 1e-13);
    }

    #[test]
    fn zeta_two_half_matches_brute_force() {
        let oracle = brute_square(0.5);
        let z = hurwitz_zeta(Complex::new(2.0, 0.0), 0.5, acc(1e-12)).unwrap();
        assert!((z.value.re - oracle).abs() < 1e-11);
        assert!((z.value.re - PI * PI / 2.0).abs() < 1e-11);
    }

    #[test]
    fn critical_strip_reference() {
        // zeta(0.75 + 10 i) from an independent 50-digit evaluation.
        let z = hurwitz_zeta(Complex::new(0.75, 10.0), 1.0, acc(1e-12)).unwrap();
        assert!((z.value.re - 1.461434953126222).abs() < 1e-11);
        assert!((z.value.im + 0.11416177125806473).abs() < 1e-11);
        // zeta(0) = -1/2, zeta(-1) = -1/12
        let z0 = hurwitz_zeta(Complex::new(0.0, 0.0), 1.0, acc(1e-12)).unwrap();
        assert!((z0.value.re + 0.5).abs() < 1e-11);
        let zm1 = hurwitz_zeta(Complex::new(-1.0, 0.0), 1.0, acc(1e-12)).unwrap();
        assert!((zm1.value.re + 1.0 / 12.0).abs() < 1e-11);
    }

    #[test]
    fn regular_part_at_one_is_minus_digamma() {
        // zeta(s, a) - 1/(s-1) -> -psi(a); psi(1) = -Euler gamma.
        let r = hurwitz_zeta_regular(Complex::new(1.0, 0.0), 1.0, acc(1e-12)).unwrap();
        assert!((r.value.re - 0.5772156649015329).abs() < 1e-11);
        let s = Complex::new(1.3, 0.4);
        let full = hurwitz_zeta(s, 0.3, acc(1e-12)).unwrap().value;
        let reg = hurwitz_zeta_regular(s, 0.3, acc(1e-12)).unwrap().value;
        assert!((full - reg - (s - 1.0).inv()).norm() < 1e-11);
    }

    #[test]
    fn pole_and_domain_errors() {
        assert_eq!(hurwitz_zeta(Complex::new(1.0, 0.0), 0.5, acc(1e-10)), Err(Error::PoleAt1));
        assert!(matches!(
            hurwitz_zeta(Complex::new(-50.0, 0.0), 0.5, acc(1e-10)),
            Err(Error::Domain(_))
        ));
        let tiny = AccuracyBudget::new(1e-10, 5).unwrap();
        assert!(matches!(
            hurwitz_zeta(Complex::new(0.5, 1.0e4), 0.5, tiny),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn single_precision_instantiation() {
        let a = AccuracyBudget::new(1e-5f32, 1_000_000).unwrap();
        let z = hurwitz_zeta(Complex::new(2.0f32, 0.0), 1.0, a).unwrap();
        assert!((z.value.re - 1.644934f32).abs() < 2e-5);
    }
}
