//! Randomized Dirichlet series `sum c_k omega1(k) k^{-s}` and
//! `sum b_m omega2(m) (m + alpha)^{-s}`, with `omega1` extended completely
//! multiplicatively. Tails are bounded by the deterministic coefficient
//! tails since `|omega| = 1`.

use super::omega::OmegaSample;
use crate::error::{Error, Result};
use crate::numerics::{cis_turns, pairwise_sum, pow_neg, wrap_turns};
use crate::scalar::Real;
use crate::special::matsumoto::{series_tail, CoeffTable, MatsumotoSpec};
use crate::special::smoothed::{periodic_n_cutoff, phi_n_cutoff, v1, v2, SmoothingParam};
use crate::special::{check_finite, AccuracyBudget, Evaluation, PeriodicSequence};
use num_complex::Complex;

/// `sum_i c_i omega1(k_i) w(k_i) k_i^{-s}` over a coefficient table.
/// Returns the value and `sum |c_i w_i| k_i^{-sigma}`.
pub fn twisted_sum<T: Real, W: Fn(u64) -> T>(
    s: Complex<T>,
    table: &CoeffTable<T>,
    omega: &OmegaSample<T>,
    weight: W,
) -> Result<(Complex<T>, T)> {
    let mut turns = vec![T::zero(); table.entries.len()];
    for (i, e) in table.entries.iter().enumerate().skip(1) {
        let tp = omega.turns_at_prime(e.prime).ok_or_else(|| {
            Error::TruncationTooSmall(format!(
                "coefficient k = {} needs prime {} beyond the sampled cutoff {}",
                e.k,
                e.prime,
                omega.truncation().prime_cutoff
            ))
        })?;
        turns[i] = wrap_turns(turns[e.parent] + tp);
    }
    Ok(table.weighted_sum(s, |i, e| cis_turns(turns[i]) * weight(e.k)))
}

fn check_prime_cover<T: Real>(k: u64, omega: &OmegaSample<T>) -> Result<()> {
    let cutoff = omega.truncation().prime_cutoff;
    if k > cutoff {
        return Err(Error::TruncationTooSmall(format!(
            "series needs k up to {k}, but omega covers primes only up to {cutoff}"
        )));
    }
    Ok(())
}

/// Randomized polynomial Euler product as a Dirichlet series, `sigma > 1`.
pub fn randomized_phi<T: Real>(
    s: Complex<T>,
    spec: &MatsumotoSpec<T>,
    omega: &OmegaSample<T>,
    acc: AccuracyBudget<T>,
) -> Result<Evaluation<T>> {
    check_finite(s)?;
    if s.re <= T::one() {
        return Err(Error::Domain(format!("randomized series needs sigma > 1, got {}", s.re)));
    }
    let (tail, k) = series_tail(spec, s.re, acc.abs_tol * T::lit(0.5), None)?;
    check_prime_cover(k, omega)?;
    let table = CoeffTable::build(spec, k, acc.max_terms)?;
    let (value, abs) = twisted_sum(s, &table, omega, |_| T::one())?;
    let rounding = T::epsilon() * abs * (T::lit(8.0) + s.norm() * T::from_u64_lossy(k).ln());
    Ok(Evaluation { value, abs_err_bound: tail + rounding, terms: table.entries.len() })
}

/// Randomized smoothed series `sum c_k omega1(k) v1(k, n) k^{-s}`, `sigma > 1/2`.
pub fn randomized_phi_smoothed<T: Real>(
    s: Complex<T>,
    spec: &MatsumotoSpec<T>,
    omega: &OmegaSample<T>,
    smooth: SmoothingParam<T>,
    acc: AccuracyBudget<T>,
) -> Result<Evaluation<T>> {
    check_finite(s)?;
    if s.re <= T::lit(0.5) {
        return Err(Error::Domain(format!("smoothed series needs sigma > 1/2, got {}", s.re)));
    }
    let (k, tail) = phi_n_cutoff(spec, s.re, smooth, acc.abs_tol * T::lit(0.5), acc.max_terms)?;
    check_prime_cover(k, omega)?;
    let table = CoeffTable::build(spec, k, acc.max_terms)?;
    let n = T::from_u64_lossy(smooth.n);
    let (value, abs) =
        twisted_sum(s, &table, omega, |k| v1(T::from_u64_lossy(k), n, smooth.sigma_star1))?;
    let rounding = T::epsilon() * abs * (T::lit(8.0) + s.norm() * T::from_u64_lossy(k).ln());
    Ok(Evaluation { value, abs_err_bound: tail + rounding, terms: table.entries.len() })
}

fn periodic_terms<T: Real>(
    s: Complex<T>,
    alpha: T,
    b: &PeriodicSequence<T>,
    omega: &OmegaSample<T>,
    count: usize,
    weight: impl Fn(T) -> T,
) -> (Complex<T>, T) {
    let turns = omega.turns2();
    let mut terms = Vec::with_capacity(count);
    let mut abs = T::zero();
    for (m, &t) in turns.iter().enumerate().take(count) {
        let bm = b.at(m);
        if bm == Complex::new(T::zero(), T::zero()) {
            continue;
        }
        let x = T::from_usize(m).unwrap();
        let term = bm * pow_neg(x + alpha, s) * cis_turns(t) * weight(x);
        abs += term.norm();
        terms.push(term);
    }
    (pairwise_sum(&terms), abs)
}

fn check_m_cover<T: Real>(count: u64, omega: &OmegaSample<T>) -> Result<()> {
    let have = omega.truncation().m_cutoff + 1;
    if count > have {
        return Err(Error::TruncationTooSmall(format!(
            "series needs {count} values of omega2, sample has {have}"
        )));
    }
    Ok(())
}

/// Randomized periodic series, `sigma > 1`, to the requested accuracy.
pub fn randomized_periodic_zeta<T: Real>(
    s: Complex<T>,
    alpha: T,
    b: &PeriodicSequence<T>,
    omega: &OmegaSample<T>,
    acc: AccuracyBudget<T>,
) -> Result<Evaluation<T>> {
    check_finite(s)?;
    if s.re <= T::one() {
        return Err(Error::Domain(format!("randomized series needs sigma > 1, got {}", s.re)));
    }
    let bmax = b.max_abs();
    let sig1 = s.re - T::one();
    let x = (bmax / (sig1 * acc.abs_tol * T::lit(0.5))).powf(T::one() / sig1);
    let count = (x + T::one() - alpha).ceil().max(T::one());
    if !(count <= T::from_u64_lossy(omega.truncation().m_cutoff + 1)) {
        return Err(Error::TruncationTooSmall(format!(
            "series needs {count} values of omega2, sample has {}",
            omega.truncation().m_cutoff + 1
        )));
    }
    let count = count.to_usize().unwrap();
    let (value, abs) = periodic_terms(s, alpha, b, omega, count, |_| T::one());
    let tail = bmax * (T::from_usize(count).unwrap() - T::one() + alpha).powf(-sig1) / sig1;
    Ok(Evaluation { value, abs_err_bound: tail + T::epsilon() * abs * T::lit(8.0), terms: count })
}

/// Randomized periodic series summed over every available `omega2(m)`,
/// `sigma > 1`, with the integral tail bound for the omitted part.
pub fn randomized_periodic_truncated<T: Real>(
    s: Complex<T>,
    alpha: T,
    b: &PeriodicSequence<T>,
    omega: &OmegaSample<T>,
) -> Result<Evaluation<T>> {
    check_finite(s)?;
    if s.re <= T::one() {
        return Err(Error::Domain(format!("randomized series needs sigma > 1, got {}", s.re)));
    }
    let count = omega.turns2().len();
    let (value, abs) = periodic_terms(s, alpha, b, omega, count, |_| T::one());
    let sig1 = s.re - T::one();
    let tail = b.max_abs() * (T::from_usize(count).unwrap() - T::one() + alpha).powf(-sig1) / sig1;
    Ok(Evaluation { value, abs_err_bound: tail + T::epsilon() * abs * T::lit(8.0), terms: count })
}

/// Randomized smoothed periodic series, `sigma > 1/2`.
pub fn randomized_periodic_smoothed<T: Real>(
    s: Complex<T>,
    alpha: T,
    b: &PeriodicSequence<T>,
    omega: &OmegaSample<T>,
    smooth: SmoothingParam<T>,
    acc: AccuracyBudget<T>,
) -> Result<Evaluation<T>> {
    check_finite(s)?;
    if s.re <= T::lit(0.5) {
        return Err(Error::Domain(format!("smoothed series needs sigma > 1/2, got {}", s.re)));
    }
    let (count, tail) =
        periodic_n_cutoff(s.re, alpha, b.max_abs(), smooth, acc.abs_tol * T::lit(0.5), acc.max_terms)?;
    check_m_cover(count, omega)?;
    let n = T::from_u64_lossy(smooth.n);
    let (value, abs) =
        periodic_terms(s, alpha, b, omega, count as usize, |x| v2(x, n, alpha, smooth.sigma_star1));
    Ok(Evaluation { value, abs_err_bound: tail + T::epsilon() * abs * T::lit(8.0), terms: count as usize })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::RationalShift;
    use crate::special::{matsumoto_series, periodic_hurwitz_zeta_direct};
    use crate::torus::{HaarSampler, Truncation};

    fn acc(tol: f64) -> AccuracyBudget<f64> {
        AccuracyBudget::new(tol, 10_000_000).unwrap()
    }

    #[test]
    fn unit_twist_is_deterministic_series() {
        let t = Truncation { prime_cutoff: 5000, m_cutoff: 5000 };
        let one = OmegaSample::<f64>::unit(t);
        let s = Complex::new(2.0, 1.0);
        let spec = MatsumotoSpec::riemann();
        let r = randomized_phi(s, &spec, &one, acc(1e-3)).unwrap();
        let d = matsumoto_series(s, &spec, acc(1e-3)).unwrap();
        assert!((r.value - d.value).norm() < 1e-12);
        let b = PeriodicSequence::from_real(&[1.0, -0.5, 2.0]).unwrap();
        let s = Complex::new(2.5, -3.0);
        let r = randomized_periodic_zeta(s, 0.6, &b, &one, acc(1e-3)).unwrap();
        let d = periodic_hurwitz_zeta_direct(s, 0.6, &b, acc(1e-6)).unwrap();
        assert!((r.value - d.value).norm() < 1e-3);
    }

    #[test]
    fn truncation_too_small() {
        let t = Truncation { prime_cutoff: 10, m_cutoff: 10 };
        let one = OmegaSample::<f64>::unit(t);
        let s = Complex::new(2.0, 0.0);
        assert!(matches!(
            randomized_phi(s, &MatsumotoSpec::riemann(), &one, acc(1e-6)),
            Err(Error::TruncationTooSmall(_))
        ));
        let b = PeriodicSequence::from_real(&[1.0]).unwrap();
        assert!(matches!(
            randomized_periodic_zeta(s, 0.5, &b, &one, acc(1e-6)),
            Err(Error::TruncationTooSmall(_))
        ));
    }

    #[test]
    fn zero_coefficients() {
        let shift = RationalShift::new(2, 1).unwrap();
        let t = Truncation { prime_cutoff: 20, m_cutoff: 100 };
        let w: OmegaSample<f64> = HaarSampler::new(&shift, t).unwrap().sample(3, 1);
        let b = PeriodicSequence::from_real(&[0.0]).unwrap();
        let v = randomized_periodic_truncated(Complex::new(1.5, 0.0), 0.5, &b, &w).unwrap();
        assert_eq!(v.value, Complex::new(0.0, 0.0));
    }

    #[test]
    fn euler_factor_at_two_is_deterministic_for_shift_two_one() {
        // With omega1(2) = 1 the twisted coefficients at powers of two are untouched.
        let shift = RationalShift::new(2, 1).unwrap();
        let t = Truncation { prime_cutoff: 64, m_cutoff: 4 };
        let sampler = HaarSampler::new(&shift, t).unwrap();
        let table = CoeffTable::build(&MatsumotoSpec::<f64>::riemann(), 64, 100).unwrap();
        for i in 0..20 {
            let w = sampler.sample(11, i);
            let s = Complex::new(2.0, 0.0);
            let only_twos = CoeffTable {
                entries: table.entries.iter().copied().filter(|e| e.k.is_power_of_two()).collect(),
                cutoff: 64,
            };
            // Re-index parents for the filtered table: powers of two chain to each other.
            let mut only_twos = only_twos;
            for (j, e) in only_twos.entries.iter_mut().enumerate() {
                e.parent = j.saturating_sub(1);
            }
            let (v, _) = twisted_sum(s, &only_twos, &w, |_| 1.0).unwrap();
            let exact: f64 = (0..=6).map(|e| 4f64.powi(-e)).sum();
            assert!((v.re - exact).abs() < 1e-15 && v.im == 0.0);
        }
    }
}
