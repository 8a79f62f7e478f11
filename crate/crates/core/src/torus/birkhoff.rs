//! Birkhoff averages along the orbit of `omega = 1` and the orbit-versus-Haar
//! distributional comparison.

use super::ks::ks_two_sample;
use super::omega::{HaarSampler, OmegaSample, Orbit, Truncation};
use super::randomized::{randomized_periodic_smoothed, randomized_periodic_truncated, twisted_sum};
use crate::arithmetic::{k3_satisfied, CharacterIndex, RationalShift};
use crate::error::{Error, Result};
use crate::numerics::{cis_turns, pairwise_sum, pow_neg, wrap_turns};
use crate::primes::factorize;
use crate::scalar::Real;
use crate::special::matsumoto::{series_tail, CoeffTable, MatsumotoSpec};
use crate::special::smoothed::{phi_n_cutoff, v1, SmoothingParam};
use crate::special::{
    hurwitz_zeta, periodic_hurwitz_zeta, smoothed_periodic_zeta_n, AccuracyBudget, PeriodicSequence,
};
use num_complex::Complex;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::str::FromStr;

/// Catalog of observables on the truncated torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Functional {
    /// `F = 1`.
    One,
    /// `F = omega1(p)`.
    Omega1(u64),
    /// `F = omega2(m)`.
    Omega2(u64),
    /// `F = Re sum_{m <= m_cutoff} b_m omega2(m) (m + alpha)^{-s}`.
    ReZeta,
    /// `F = Re sum_{k <= K} c_k omega1(k) k^{-s}`.
    RePhi,
}

impl FromStr for Functional {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownFunctional(s.to_string());
        match s {
            "one" => Ok(Self::One),
            "re_zeta" => Ok(Self::ReZeta),
            "re_phi" => Ok(Self::RePhi),
            _ => {
                let (head, arg) = s.split_once(':').ok_or_else(bad)?;
                let v: u64 = arg.parse().map_err(|_| bad())?;
                match head {
                    "omega1" => Ok(Self::Omega1(v)),
                    "omega2" => Ok(Self::Omega2(v)),
                    _ => Err(bad()),
                }
            }
        }
    }
}

impl std::fmt::Display for Functional {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::One => write!(f, "one"),
            Self::Omega1(p) => write!(f, "omega1:{p}"),
            Self::Omega2(m) => write!(f, "omega2:{m}"),
            Self::ReZeta => write!(f, "re_zeta"),
            Self::RePhi => write!(f, "re_phi"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BirkhoffSetup<T> {
    pub shift: RationalShift,
    pub alpha: T,
    pub truncation: Truncation,
    /// Evaluation point of the `re_zeta` / `re_phi` observables (`sigma > 1`).
    pub point: Complex<T>,
    pub coeffs: PeriodicSequence<T>,
    pub spec: MatsumotoSpec<T>,
    /// Coefficient cutoff `K` of `re_phi`; at most the prime cutoff.
    pub phi_terms: u64,
    /// Haar samples for the space average (at least 1000).
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BirkhoffResult<T> {
    pub time_avg: Complex<T>,
    pub space_avg: Complex<T>,
    pub stderr: T,
    /// Exact Haar expectation of the observable.
    pub space_mean: Complex<T>,
    /// Deterministic bound for `|time_avg - space_mean|` from geometric sums.
    pub geometric_bound: T,
}

/// An observable with everything independent of `omega` precomputed.
enum Prepared<T> {
    Const,
    Coord1(usize),
    Coord2(usize),
    Zeta(Vec<Complex<T>>),
    Phi { table: CoeffTable<T>, weights: Vec<Complex<T>>, prime_idx: Vec<usize> },
}

impl<T: Real> Prepared<T> {
    fn eval(&self, w: &OmegaSample<T>) -> Complex<T> {
        match self {
            Prepared::Const => Complex::one(),
            Prepared::Coord1(i) => cis_turns(w.turns1()[*i]),
            Prepared::Coord2(m) => cis_turns(w.turns2()[*m]),
            Prepared::Zeta(weights) => {
                let terms: Vec<T> = weights
                    .iter()
                    .zip(w.turns2())
                    .map(|(c, &t)| (*c * cis_turns(t)).re)
                    .collect();
                Complex::new(pairwise_sum(&terms), T::zero())
            }
            Prepared::Phi { table, weights, prime_idx } => {
                let mut turns = vec![T::zero(); table.entries.len()];
                let mut terms = Vec::with_capacity(turns.len());
                for (i, e) in table.entries.iter().enumerate() {
                    if i > 0 {
                        turns[i] = wrap_turns(turns[e.parent] + w.turns1()[prime_idx[i]]);
                    }
                    terms.push((weights[i] * cis_turns(turns[i])).re);
                }
                Complex::new(pairwise_sum(&terms), T::zero())
            }
        }
    }
}

/// `min(1, 2 / ((N + 1) |1 - e^{-2 pi i r}|))` for a per-step rotation of `r` turns.
fn geometric<T: Real>(n: u64, r: T) -> T {
    let gap = T::lit(2.0) * (T::PI() * wrap_turns(r)).sin().abs();
    let b = T::lit(2.0) / (T::from_u64_lossy(n + 1) * gap);
    if b.is_finite() { b.min(T::one()) } else { T::one() }
}

fn exponent_index(k: u64) -> CharacterIndex {
    let k_p = factorize(k).into_iter().map(|(p, e)| (p, e as i64)).collect();
    CharacterIndex::new(k_p, Default::default(), 0)
}

/// Time average from `omega = 1` over `k = 0..=N`, Monte-Carlo space average
/// over `setup.samples` Haar samples with its standard error, and the exact
/// space mean together with a deterministic bound for the time average's
/// distance to it.
pub fn birkhoff_average<T: Real>(
    functional: &str,
    setup: &BirkhoffSetup<T>,
    n: u64,
) -> Result<BirkhoffResult<T>> {
    let functional: Functional = functional.parse()?;
    if n < 1 {
        return Err(Error::InvalidInput("N must be >= 1".into()));
    }
    if setup.samples < 2 {
        return Err(Error::InvalidInput("need at least two Haar samples".into()));
    }
    let orbit = Orbit::new(&setup.shift, setup.alpha, setup.truncation)?;
    let unit = OmegaSample::<T>::unit(setup.truncation);
    let s = setup.point;
    let slack = T::lit(1e-12);
    let (prepared, space_mean, bound) = match functional {
        Functional::One => (Prepared::Const, Complex::one(), T::zero()),
        Functional::Omega1(p) => {
            let i = unit.prime_index(p).ok_or_else(|| {
                Error::TruncationTooSmall(format!("omega1({p}) is not a coordinate of the truncated torus"))
            })?;
            let resonant = k3_satisfied(&exponent_index(p), &setup.shift).0;
            let (mean, b) = if resonant {
                (Complex::one(), slack)
            } else {
                (Complex::zero(), geometric(n, orbit.rate1()[i]))
            };
            (Prepared::Coord1(i), mean, b)
        }
        Functional::Omega2(m) => {
            if m > setup.truncation.m_cutoff {
                return Err(Error::TruncationTooSmall(format!("omega2({m}) beyond m cutoff")));
            }
            let b = geometric(n, orbit.rate2()[m as usize]);
            (Prepared::Coord2(m as usize), Complex::zero(), b)
        }
        Functional::ReZeta => {
            let weights: Vec<Complex<T>> = (0..=setup.truncation.m_cutoff as usize)
                .map(|m| setup.coeffs.at(m) * pow_neg(T::from_usize(m).unwrap() + setup.alpha, s))
                .collect();
            let b = weights
                .iter()
                .zip(orbit.rate2())
                .map(|(w, &r)| w.norm() * geometric(n, r))
                .sum::<T>();
            let total: T = weights.iter().map(|w| w.norm()).sum();
            (Prepared::Zeta(weights), Complex::zero(), b + slack * total)
        }
        Functional::RePhi => {
            if setup.phi_terms > setup.truncation.prime_cutoff {
                return Err(Error::TruncationTooSmall(format!(
                    "re_phi with K = {} needs primes up to K",
                    setup.phi_terms
                )));
            }
            let table = CoeffTable::build(&setup.spec, setup.phi_terms.max(1), usize::MAX)?;
            let ln_ratio = setup.shift.ln_ratio::<T>();
            let mut weights = Vec::with_capacity(table.entries.len());
            let mut prime_idx = Vec::with_capacity(table.entries.len());
            let mut mean = Complex::zero();
            let mut b = T::zero();
            let mut total = T::zero();
            for e in &table.entries {
                let w = e.c * pow_neg(T::from_u64_lossy(e.k), s);
                total += w.norm();
                if k3_satisfied(&exponent_index(e.k), &setup.shift).0 {
                    mean += w;
                } else {
                    b += w.norm() * geometric(n, T::from_u64_lossy(e.k).ln() / ln_ratio);
                }
                weights.push(w);
                prime_idx.push(if e.k == 1 { 0 } else { unit.prime_index(e.prime).unwrap() });
            }
            let prepared = Prepared::Phi { table, weights, prime_idx };
            (prepared, Complex::new(mean.re, T::zero()), b + slack * total)
        }
    };

    let time: Vec<Complex<T>> = (0..=n as i64)
        .into_par_iter()
        .map(|k| prepared.eval(&orbit.apply(&unit, k)))
        .collect();
    let time_avg = pairwise_sum(&time) / T::from_u64_lossy(n + 1);

    let sampler = HaarSampler::new(&setup.shift, setup.truncation)?;
    let space: Vec<Complex<T>> = (0..setup.samples as u64)
        .into_par_iter()
        .map(|i| prepared.eval(&sampler.sample(setup.seed, i)))
        .collect();
    let count = T::from_usize(space.len()).unwrap();
    let space_avg = pairwise_sum(&space) / count;
    let dev: Vec<T> = space.iter().map(|v| (*v - space_avg).norm_sqr()).collect();
    let stderr = (pairwise_sum(&dev) / (count * (count - T::one()))).sqrt();
    Ok(BirkhoffResult { time_avg, space_avg, stderr, space_mean, geometric_bound: bound })
}

/// The function whose value distribution is compared.
#[derive(Debug, Clone)]
pub enum OrbitTarget<T> {
    Periodic { alpha: T, coeffs: PeriodicSequence<T> },
    Phi { spec: MatsumotoSpec<T> },
    Constant(Complex<T>),
}

#[derive(Debug, Clone)]
pub struct OrbitVsHaar<T> {
    pub target: OrbitTarget<T>,
    pub point: Complex<T>,
    pub shift: RationalShift,
    pub n: u64,
    pub samples: usize,
    /// Required when `sigma <= 1`; both sides then use the smoothed series.
    pub smooth: Option<SmoothingParam<T>>,
    pub truncation: Truncation,
    pub seed: u64,
    pub acc: AccuracyBudget<T>,
}

#[derive(Debug, Clone)]
pub struct KsReport<T> {
    pub ks: T,
    /// `f(point + i k h)`, `k = 0..=N`; the statistic compares real parts.
    pub orbit_values: Vec<Complex<T>>,
    /// `f(point, omega_j)` over the Haar samples.
    pub haar_values: Vec<Complex<T>>,
}

fn is_riemann<T: Real>(spec: &MatsumotoSpec<T>) -> bool {
    *spec == MatsumotoSpec::riemann()
        || (spec.alpha0 == T::zero()
            && spec.beta0 == T::zero()
            && spec.local_factors.values().all(|r| r == &vec![(1, Complex::one())])
            && spec.default_factor == Some(vec![(1, Complex::one())]))
}

/// Two-sample KS statistic between orbit values `Re f(s + ikh)`, `k <= N`,
/// and Haar-sample values `Re f(s, omega)`.
///
/// The orbit side uses the analytic evaluators (Euler-Maclaurin for the
/// periodic and Riemann cases); the Haar side uses the randomized series on
/// the truncated torus. With `smooth` set, both sides use the smoothed series.
pub fn orbit_vs_haar<T: Real>(cfg: &OrbitVsHaar<T>) -> Result<KsReport<T>> {
    let s = cfg.point;
    if cfg.smooth.is_none() && s.re <= T::one() {
        return Err(Error::Domain(format!(
            "sigma = {} <= 1 requires the smoothed evaluators",
            s.re
        )));
    }
    let h = cfg.shift.h::<T>();
    let sampler = HaarSampler::new(&cfg.shift, cfg.truncation)?;
    let ks_points = |k: u64| Complex::new(s.re, s.im + h * T::from_u64_lossy(k));

    let (orbit_values, haar_values): (Vec<Complex<T>>, Vec<Complex<T>>) = match &cfg.target {
        OrbitTarget::Constant(c) => (vec![*c; cfg.n as usize + 1], vec![*c; cfg.samples]),
        OrbitTarget::Periodic { alpha, coeffs } => {
            let orbit = (0..=cfg.n)
                .into_par_iter()
                .map(|k| {
                    let z = ks_points(k);
                    let v = match cfg.smooth {
                        Some(sm) => smoothed_periodic_zeta_n(z, *alpha, coeffs, sm, cfg.acc)?,
                        None => periodic_hurwitz_zeta(z, *alpha, coeffs, cfg.acc)?,
                    };
                    Ok(v.value)
                })
                .collect::<Result<Vec<Complex<T>>>>()?;
            let haar = (0..cfg.samples as u64)
                .into_par_iter()
                .map(|i| {
                    let w = sampler.sample::<T>(cfg.seed, i);
                    let v = match cfg.smooth {
                        Some(sm) => randomized_periodic_smoothed(s, *alpha, coeffs, &w, sm, cfg.acc)?,
                        None => randomized_periodic_truncated(s, *alpha, coeffs, &w)?,
                    };
                    Ok(v.value)
                })
                .collect::<Result<Vec<Complex<T>>>>()?;
            (orbit, haar)
        }
        OrbitTarget::Phi { spec } => {
            let k = match cfg.smooth {
                Some(sm) => phi_n_cutoff(spec, s.re, sm, cfg.acc.abs_tol * T::lit(0.5), cfg.acc.max_terms)?.0,
                None => cfg.truncation.prime_cutoff,
            };
            if k > cfg.truncation.prime_cutoff {
                return Err(Error::TruncationTooSmall(format!(
                    "smoothed series needs k up to {k}, prime cutoff is {}",
                    cfg.truncation.prime_cutoff
                )));
            }
            let table = CoeffTable::build(spec, k, cfg.acc.max_terms)?;
            let weight = |kk: u64| match cfg.smooth {
                Some(sm) => v1(T::from_u64_lossy(kk), T::from_u64_lossy(sm.n), sm.sigma_star1),
                None => T::one(),
            };
            let riemann = cfg.smooth.is_none() && is_riemann(spec);
            if !riemann && cfg.smooth.is_none() {
                // Without smoothing the orbit side needs the full series.
                let (_, need) = series_tail(spec, s.re, cfg.acc.abs_tol * T::lit(0.5), None)?;
                if need > cfg.acc.max_terms as u64 {
                    return Err(Error::BudgetExceeded(format!(
                        "orbit-side Dirichlet series needs {need} terms"
                    )));
                }
            }
            let orbit = (0..=cfg.n)
                .into_par_iter()
                .map(|kk| {
                    let z = ks_points(kk);
                    if riemann {
                        return Ok(hurwitz_zeta(z, T::one(), cfg.acc)?.value);
                    }
                    let (v, _) = table.weighted_sum(z, |_, e| Complex::new(weight(e.k), T::zero()));
                    Ok(v)
                })
                .collect::<Result<Vec<Complex<T>>>>()?;
            let haar = (0..cfg.samples as u64)
                .into_par_iter()
                .map(|i| {
                    let w = sampler.sample::<T>(cfg.seed, i);
                    Ok(twisted_sum(s, &table, &w, weight)?.0)
                })
                .collect::<Result<Vec<Complex<T>>>>()?;
            (orbit, haar)
        }
    };
    let re = |v: &[Complex<T>]| v.iter().map(|z| z.re).collect::<Vec<T>>();
    let ks = ks_two_sample(&re(&orbit_values), &re(&haar_values));
    Ok(KsReport { ks, orbit_values, haar_values })
}
