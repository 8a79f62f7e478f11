//! Polynomial Euler products
//!
//! `phi(s) = prod_p prod_j (1 - a_p^{(j)} p^{-(s + alpha0 + beta0) f_j})^{-1} = sum_k c_k k^{-s}`,
//!
//! stored through per-prime root lists. All evaluators work with the
//! normalized roots `a p^{-(alpha0 + beta0) f}`, which have modulus at most
//! one on a validated spec; the tail bounds rely on that.

use super::hurwitz::hurwitz_zeta;
use super::{check_finite, AccuracyBudget, Evaluation};
use crate::arithmetic::RationalShift;
use crate::error::{Error, Result};
use crate::numerics::{pairwise_sum, pow_neg};
use crate::primes::{is_prime, primes_up_to, smallest_prime_factors};
use crate::scalar::Real;
use num_complex::Complex;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Roots of one local factor: pairs `(f, a)` meaning `(1 - a x^f)`.
pub type LocalRoots<T> = Vec<(u32, Complex<T>)>;

/// Steuding-class metadata. Carried and validated, never used in arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SteudingMeta<T> {
    pub sigma_star: T,
    pub kappa: T,
    pub sigma_phi: T,
}

impl<T: Real> SteudingMeta<T> {
    pub fn validate(&self) -> Result<()> {
        let half = T::lit(0.5);
        if !(self.sigma_star >= half && self.sigma_star < T::one()) {
            return Err(Error::InvalidInput(format!(
                "sigma_star must lie in [1/2, 1), got {}",
                self.sigma_star
            )));
        }
        if !(self.kappa > T::zero()) {
            return Err(Error::InvalidInput("kappa must be positive".into()));
        }
        if !(self.sigma_phi < T::one()) {
            return Err(Error::InvalidInput("sigma_phi must be below 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatsumotoSpec<T> {
    pub alpha0: T,
    pub beta0: T,
    /// The constant `C` in `g(p) <= C p^{alpha0}`.
    pub degree_const: T,
    /// Explicit local factors; an empty list means the factor is 1.
    pub local_factors: BTreeMap<u64, LocalRoots<T>>,
    /// Roots used at every prime without an explicit entry. `None` means
    /// such primes contribute nothing (a finitely supported product).
    pub default_factor: Option<LocalRoots<T>>,
    pub declared_poles: Vec<Complex<T>>,
    pub sigma0: T,
    pub steuding: Option<SteudingMeta<T>>,
}

impl<T: Real> MatsumotoSpec<T> {
    /// The Riemann instance: every prime carries the single root `a = 1`, `f = 1`.
    pub fn riemann() -> Self {
        Self {
            alpha0: T::zero(),
            beta0: T::zero(),
            degree_const: T::one(),
            local_factors: BTreeMap::new(),
            default_factor: Some(vec![(1, Complex::one())]),
            declared_poles: vec![Complex::one()],
            sigma0: T::lit(0.5),
            steuding: Some(SteudingMeta {
                sigma_star: T::lit(0.5),
                kappa: T::one(),
                sigma_phi: T::zero(),
            }),
        }
    }

    /// A product over finitely many primes.
    pub fn finite(alpha0: T, beta0: T, local_factors: BTreeMap<u64, LocalRoots<T>>) -> Result<Self> {
        let spec = Self {
            alpha0,
            beta0,
            degree_const: T::lit(1e300_f64.min(T::max_value().as_f64())),
            local_factors,
            default_factor: None,
            declared_poles: Vec::new(),
            sigma0: T::lit(0.5),
            steuding: None,
        };
        let g = spec.max_degree();
        let spec = Self { degree_const: T::from_usize(g.max(1)).unwrap(), ..spec };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let finite_nonneg = |x: T| x.is_finite() && x >= T::zero();
        if !finite_nonneg(self.alpha0) || !finite_nonneg(self.beta0) {
            return Err(Error::InvalidInput("alpha0 and beta0 must be finite and >= 0".into()));
        }
        if !(self.degree_const > T::zero()) {
            return Err(Error::InvalidInput("degree constant must be positive".into()));
        }
        if !(self.sigma0 >= T::lit(0.5) && self.sigma0 < T::one()) {
            return Err(Error::InvalidInput(format!("sigma0 must lie in [1/2, 1), got {}", self.sigma0)));
        }
        if let Some(meta) = &self.steuding {
            meta.validate()?;
        }
        let slack = T::one() + T::lit(1e-12);
        let check = |p: u64, roots: &LocalRoots<T>| -> Result<()> {
            let pf = T::from_u64_lossy(p);
            let cap = self.degree_const * pf.powf(self.alpha0) * slack;
            if T::from_usize(roots.len()).unwrap() > cap {
                return Err(Error::InvalidInput(format!(
                    "prime {p}: {} roots exceed C p^alpha0",
                    roots.len()
                )));
            }
            let amax = pf.powf(self.beta0) * slack;
            for &(f, a) in roots {
                if f == 0 {
                    return Err(Error::InvalidInput(format!("prime {p}: exponent f must be >= 1")));
                }
                if !a.re.is_finite() || !a.im.is_finite() || a.norm() > amax {
                    return Err(Error::InvalidInput(format!("prime {p}: |a| = {} exceeds p^beta0", a.norm())));
                }
            }
            Ok(())
        };
        for (&p, roots) in &self.local_factors {
            if !is_prime(p) {
                return Err(Error::InvalidInput(format!("{p} is not prime")));
            }
            check(p, roots)?;
        }
        if let Some(roots) = &self.default_factor {
            // The binding prime for both constraints is p = 2.
            check(2, roots)?;
        }
        for z in &self.declared_poles {
            check_finite(*z)?;
        }
        Ok(())
    }

    pub fn roots_at(&self, p: u64) -> Option<&LocalRoots<T>> {
        self.local_factors.get(&p).or(self.default_factor.as_ref())
    }

    /// Normalized roots `a p^{-(alpha0 + beta0) f}` with their exponents.
    pub fn normalized_roots(&self, p: u64) -> Vec<(u32, Complex<T>)> {
        let shift = self.alpha0 + self.beta0;
        let lp = T::from_u64_lossy(p).ln();
        self.roots_at(p)
            .map(|roots| {
                roots
                    .iter()
                    .map(|&(f, a)| (f, a * (-shift * T::from_u32(f).unwrap() * lp).exp()))
                    .collect()
            })
            .unwrap_or_default()
    }

    pub fn is_dense(&self) -> bool {
        self.default_factor.as_ref().is_some_and(|r| !r.is_empty())
    }

    /// Largest number of roots at any prime.
    pub fn max_degree(&self) -> usize {
        let explicit = self.local_factors.values().map(Vec::len).max().unwrap_or(0);
        let default = self.default_factor.as_ref().map_or(0, Vec::len);
        explicit.max(default)
    }

    /// Whether all Dirichlet coefficients are real.
    pub fn has_real_coefficients(&self) -> bool {
        let real = |r: &LocalRoots<T>| r.iter().all(|(_, a)| a.im == T::zero());
        self.local_factors.values().all(real) && self.default_factor.as_ref().is_none_or(real)
    }

    /// The same product with the given primes' factors replaced by 1.
    pub fn without_primes(&self, primes: &[u64]) -> Self {
        let mut out = self.clone();
        for &p in primes {
            out.local_factors.insert(p, Vec::new());
        }
        out
    }

    /// Explicitly listed primes with a non-trivial factor.
    pub fn listed_primes(&self) -> Vec<u64> {
        self.local_factors.iter().filter(|(_, r)| !r.is_empty()).map(|(&p, _)| p).collect()
    }

    /// `prod_j (1 - a~_j p^{-s f_j})^{-1}` at one prime.
    pub fn local_factor(&self, p: u64, s: Complex<T>) -> Result<Complex<T>> {
        let pf = T::from_u64_lossy(p);
        let guard = T::lit(1e3) * T::epsilon();
        let mut acc = Complex::one();
        for (f, a) in self.normalized_roots(p) {
            let d = Complex::<T>::one() - a * pow_neg(pf, s * T::from_u32(f).unwrap());
            if d.norm() <= guard {
                return Err(Error::SingularFactor { prime: p });
            }
            acc /= d;
        }
        Ok(acc)
    }

    /// Coefficients `c_{p^e}`, `e = 0..=emax`, of the local factor at `p`.
    fn local_series(&self, p: u64, emax: usize) -> Vec<Complex<T>> {
        let mut c = vec![Complex::zero(); emax + 1];
        c[0] = Complex::one();
        for (f, a) in self.normalized_roots(p) {
            let f = f as usize;
            for e in f..=emax {
                let prev = c[e - f];
                c[e] += a * prev;
            }
        }
        c
    }
}

/// One Dirichlet coefficient with the bookkeeping needed to evaluate a
/// completely multiplicative twist: `k = prime * entries[parent].k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffEntry<T> {
    pub k: u64,
    pub c: Complex<T>,
    pub prime: u64,
    pub parent: usize,
}

/// The coefficients `c_k`, `k <= cutoff`, sorted by `k`; entry 0 is `k = 1`.
#[derive(Debug, Clone)]
pub struct CoeffTable<T> {
    pub entries: Vec<CoeffEntry<T>>,
    pub cutoff: u64,
}

impl<T: Real> CoeffTable<T> {
    /// Expands the Euler product up to `cutoff`. Fails with `BudgetExceeded`
    /// when more than `max_entries` coefficients would be stored.
    pub fn build(spec: &MatsumotoSpec<T>, cutoff: u64, max_entries: usize) -> Result<Self> {
        if cutoff == 0 {
            return Err(Error::InvalidInput("coefficient cutoff must be >= 1".into()));
        }
        if spec.is_dense() {
            if cutoff > max_entries as u64 {
                return Err(Error::BudgetExceeded(format!(
                    "{cutoff} coefficients requested, cap {max_entries}"
                )));
            }
            Ok(Self::build_dense(spec, cutoff as usize))
        } else {
            Self::build_sparse(spec, cutoff, max_entries)
        }
    }

    fn build_dense(spec: &MatsumotoSpec<T>, k_max: usize) -> Self {
        let spf = smallest_prime_factors(k_max);
        let mut c = vec![Complex::<T>::zero(); k_max + 1];
        c[1] = Complex::one();
        for k in 2..=k_max {
            let p = spf[k] as usize;
            if p == k {
                let mut emax = 0;
                let mut pe = 1usize;
                while pe <= k_max / p {
                    pe *= p;
                    emax += 1;
                }
                let series = spec.local_series(p as u64, emax);
                let mut pe = p;
                for coeff in series.iter().skip(1) {
                    c[pe] = *coeff;
                    pe = pe.saturating_mul(p);
                }
                continue;
            }
            let mut pe = p;
            let mut m = k / p;
            while m.is_multiple_of(p) {
                m /= p;
                pe *= p;
            }
            if m != 1 {
                c[k] = c[pe] * c[m];
            }
        }
        let entries = (1..=k_max)
            .map(|k| {
                let p = if k == 1 { 1 } else { spf[k] as usize };
                CoeffEntry { k: k as u64, c: c[k], prime: p as u64, parent: k / p - 1 }
            })
            .collect();
        Self { entries, cutoff: k_max as u64 }
    }

    fn build_sparse(spec: &MatsumotoSpec<T>, cutoff: u64, max_entries: usize) -> Result<Self> {
        let primes: Vec<u64> = spec.listed_primes().into_iter().filter(|&p| p <= cutoff).collect();
        let series: Vec<Vec<Complex<T>>> = primes
            .iter()
            .map(|&p| {
                let mut emax = 0;
                let mut pe = 1u64;
                while pe <= cutoff / p {
                    pe *= p;
                    emax += 1;
                }
                spec.local_series(p, emax)
            })
            .collect();
        // (k, c, smallest prime) by depth-first expansion in increasing primes.
        let mut found: Vec<(u64, Complex<T>, u64)> = vec![(1, Complex::one(), 1)];
        let mut stack: Vec<(usize, u64, Complex<T>, u64)> = vec![(0, 1, Complex::one(), 1)];
        while let Some((start, k, c, spf)) = stack.pop() {
            for (i, &p) in primes.iter().enumerate().skip(start) {
                if k > cutoff / p {
                    break;
                }
                let mut kk = k;
                let mut e = 0;
                while kk <= cutoff / p {
                    kk *= p;
                    e += 1;
                    let cc = c * series[i][e];
                    let s = if spf == 1 { p } else { spf };
                    found.push((kk, cc, s));
                    if found.len() > max_entries {
                        return Err(Error::BudgetExceeded(format!(
                            "more than {max_entries} coefficients below {cutoff}"
                        )));
                    }
                    stack.push((i + 1, kk, cc, s));
                }
            }
        }
        found.sort_by_key(|e| e.0);
        let ks: Vec<u64> = found.iter().map(|e| e.0).collect();
        let entries = found
            .iter()
            .map(|&(k, c, p)| {
                let parent = if k == 1 { 0 } else { ks.binary_search(&(k / p)).expect("parent present") };
                CoeffEntry { k, c, prime: p, parent }
            })
            .collect();
        Ok(Self { entries, cutoff })
    }

    /// `sum c_k w_k k^{-s}` and `sum |c_k w_k| k^{-sigma}`, pairwise summed.
    pub fn weighted_sum<F>(&self, s: Complex<T>, weight: F) -> (Complex<T>, T)
    where
        F: Fn(usize, &CoeffEntry<T>) -> Complex<T>,
    {
        let mut terms = Vec::with_capacity(self.entries.len());
        let mut abs = T::zero();
        for (i, e) in self.entries.iter().enumerate() {
            if e.c == Complex::zero() {
                continue;
            }
            let term = e.c * weight(i, e) * pow_neg(T::from_u64_lossy(e.k), s);
            abs += term.norm();
            terms.push(term);
        }
        (pairwise_sum(&terms), abs)
    }
}

/// Rankin-type bound for `sum_{k > K} |c_k| k^{-sigma}`. Returns `(bound, K)`
/// with `K` the smallest cutoff (capped at 1e18) meeting `tol`, or the bound
/// at a given `K` when `fixed` is set.
pub(crate) fn series_tail<T: Real>(
    spec: &MatsumotoSpec<T>,
    sigma: T,
    tol: T,
    fixed: Option<u64>,
) -> Result<(T, u64)> {
    let cap = T::lit(1e18);
    let g = spec.max_degree();
    let solve = |ln_const: T, rate: T| -> (T, u64) {
        // bound(K) = exp(ln_const) K^{-rate}
        let k = match fixed {
            Some(k) => T::from_u64_lossy(k),
            None => ((ln_const - tol.ln()) / rate).exp().ceil().max(T::one()).min(cap),
        };
        ((ln_const - rate * k.ln()).exp(), k.to_u64().unwrap())
    };
    if spec.is_dense() && g <= 1 {
        // |c_k| <= 1: tail <= K^{1-sigma} / (sigma - 1)
        let rate = sigma - T::one();
        return Ok(solve(-rate.ln(), rate));
    }
    let delta = if spec.is_dense() { (sigma - T::one()) * T::lit(0.5) } else { sigma * T::lit(0.5) };
    let x = sigma - delta;
    let ln_const = if spec.is_dense() {
        // |c_k| <= d_G(k); sum d_G(k) k^{-x} = zeta(x)^G
        let acc = AccuracyBudget::new(T::lit(1e-6), 10_000_000)?;
        let z = hurwitz_zeta(Complex::new(x, T::zero()), T::one(), acc)?.value.re;
        T::from_usize(g).unwrap() * z.ln()
    } else {
        let mut l = T::zero();
        for p in spec.listed_primes() {
            let pf = T::from_u64_lossy(p);
            for (f, a) in spec.normalized_roots(p) {
                let q = a.norm() * pf.powf(-x * T::from_u32(f).unwrap());
                l -= (T::one() - q).ln();
            }
        }
        l
    };
    Ok(solve(ln_const, delta))
}

/// Dirichlet series `sum c_k k^{-s}` for `sigma > 1`.
pub fn matsumoto_series<T: Real>(
    s: Complex<T>,
    spec: &MatsumotoSpec<T>,
    acc: AccuracyBudget<T>,
) -> Result<Evaluation<T>> {
    check_finite(s)?;
    if s.re <= T::one() {
        return Err(Error::Domain(format!("Dirichlet series needs sigma > 1, got {}", s.re)));
    }
    let (tail, k) = series_tail(spec, s.re, acc.abs_tol * T::lit(0.5), None)?;
    if spec.is_dense() && k > acc.max_terms as u64 {
        return Err(Error::BudgetExceeded(format!(
            "series at s = {s} needs {k} coefficients, cap {}",
            acc.max_terms
        )));
    }
    let table = CoeffTable::build(spec, k, acc.max_terms)?;
    let (value, abs) = table.weighted_sum(s, |_, _| Complex::one());
    let rounding = T::epsilon() * abs * (T::lit(8.0) + s.norm() * T::from_u64_lossy(k).ln());
    Ok(Evaluation { value, abs_err_bound: tail + rounding, terms: table.entries.len() })
}

/// Upper bound for `sum_{p > P} p^{-x}`, `x > 1`, from `pi(y) < 1.25506 y / ln y`.
fn prime_tail_bound<T: Real>(cutoff: u64, x: T) -> T {
    let p = T::from_u64_lossy(cutoff.max(2));
    T::lit(1.25506) * x * p.powf(T::one() - x) / ((x - T::one()) * p.ln())
}

fn euler_product<T: Real>(
    s: Complex<T>,
    spec: &MatsumotoSpec<T>,
    prime_cutoff: u64,
    skip: &[u64],
) -> Result<Evaluation<T>> {
    check_finite(s)?;
    if s.re <= T::one() {
        return Err(Error::Domain(format!("Euler product needs sigma > 1, got {}", s.re)));
    }
    if prime_cutoff < 2 {
        return Err(Error::InvalidInput("prime cutoff must be >= 2".into()));
    }
    let sigma = s.re;
    let primes = if spec.is_dense() {
        primes_up_to(prime_cutoff)
    } else {
        spec.listed_primes().into_iter().filter(|&p| p <= prime_cutoff).collect()
    };
    let mut prod = Complex::<T>::one();
    let mut count = 0usize;
    for &p in &primes {
        if skip.contains(&p) {
            continue;
        }
        prod *= spec.local_factor(p, s)?;
        count += 1;
    }
    // log-expansion tail: |ln (1 - z)^{-1}| <= |z| / (1 - |z|)
    let explicit = |p: u64| -> T {
        let pf = T::from_u64_lossy(p);
        spec.normalized_roots(p)
            .into_iter()
            .map(|(f, a)| {
                let q = a.norm() * pf.powf(-sigma * T::from_u32(f).unwrap());
                q / (T::one() - q)
            })
            .sum::<T>()
    };
    let mut ln_tail = T::zero();
    for p in spec.listed_primes() {
        if p > prime_cutoff && !skip.contains(&p) {
            ln_tail += explicit(p);
        }
    }
    if spec.is_dense() {
        let g = T::from_usize(spec.default_factor.as_ref().map_or(0, Vec::len)).unwrap();
        let pc = T::from_u64_lossy(prime_cutoff);
        ln_tail += g * prime_tail_bound(prime_cutoff, sigma) / (T::one() - pc.powf(-sigma));
    }
    let err = prod.norm() * ln_tail.exp_m1() + T::epsilon() * T::lit(4.0) * T::from_usize(count + 1).unwrap() * prod.norm();
    Ok(Evaluation { value: prod, abs_err_bound: err, terms: count })
}

/// Truncated Euler product over primes up to `prime_cutoff`, with a bound
/// for the omitted primes.
pub fn matsumoto_product<T: Real>(
    s: Complex<T>,
    spec: &MatsumotoSpec<T>,
    prime_cutoff: u64,
) -> Result<Evaluation<T>> {
    euler_product(s, spec, prime_cutoff, &[])
}

/// The partial product with the primes dividing `a b` removed.
pub fn partial_matsumoto<T: Real>(
    s: Complex<T>,
    spec: &MatsumotoSpec<T>,
    shift: &RationalShift,
    prime_cutoff: u64,
) -> Result<Evaluation<T>> {
    euler_product(s, spec, prime_cutoff, &shift.p0())
}

/// The finitely many local factors at the primes dividing `a b`; the full
/// product equals the partial product times this value.
pub fn p0_local_factors<T: Real>(
    s: Complex<T>,
    spec: &MatsumotoSpec<T>,
    shift: &RationalShift,
) -> Result<Complex<T>> {
    let mut acc = Complex::one();
    for p in shift.p0() {
        acc *= spec.local_factor(p, s)?;
    }
    Ok(acc)
}
