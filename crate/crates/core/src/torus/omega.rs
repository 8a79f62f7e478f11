use crate::arithmetic::RationalShift;
use crate::error::{Error, Result};
use crate::numerics::{cis_turns, frac_product, wrap_turns};
use crate::primes::primes_up_to;
use crate::scalar::Real;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub prime_cutoff: u64,
    pub m_cutoff: u64,
}

/// A point of the truncated torus: phases (in turns) at every prime up to
/// the prime cutoff and at `m = 0..=m_cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaSample<T> {
    primes: Arc<[u64]>,
    turns1: Vec<T>,
    turns2: Vec<T>,
    truncation: Truncation,
}

impl<T: Real> OmegaSample<T> {
    /// The identity element `omega = 1`.
    pub fn unit(truncation: Truncation) -> Self {
        let primes: Arc<[u64]> = primes_up_to(truncation.prime_cutoff).into();
        let n1 = primes.len();
        Self {
            primes,
            turns1: vec![T::zero(); n1],
            turns2: vec![T::zero(); truncation.m_cutoff as usize + 1],
            truncation,
        }
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn turns1(&self) -> &[T] {
        &self.turns1
    }

    pub fn turns2(&self) -> &[T] {
        &self.turns2
    }

    pub fn prime_index(&self, p: u64) -> Option<usize> {
        self.primes.binary_search(&p).ok()
    }

    pub fn turns_at_prime(&self, p: u64) -> Option<T> {
        self.prime_index(p).map(|i| self.turns1[i])
    }

    pub fn omega1(&self, p: u64) -> Option<Complex<T>> {
        self.turns_at_prime(p).map(cis_turns)
    }

    pub fn omega2(&self, m: u64) -> Option<Complex<T>> {
        self.turns2.get(m as usize).map(|&t| cis_turns(t))
    }

    /// `|prod_{p in P0} omega1(p)^{alpha_p} - 1|`.
    pub fn constraint_residual(&self, shift: &RationalShift) -> T {
        let mut x = T::zero();
        for (&p, &a) in shift.decomposition() {
            if let Some(t) = self.turns_at_prime(p) {
                x += T::from_i32(a).unwrap() * t;
            }
        }
        let x = wrap_turns(x);
        T::lit(2.0) * (T::PI() * x).sin().abs()
    }

    /// Largest deviation of `|omega|` from one over all coordinates.
    pub fn modulus_defect(&self) -> T {
        self.turns1
            .iter()
            .chain(&self.turns2)
            .map(|&t| (cis_turns(t).norm() - T::one()).abs())
            .fold(T::zero(), T::max)
    }
}

/// Geometry of the `P0` constraint: which coordinate is solved for.
#[derive(Debug, Clone)]
struct Constraint {
    /// (index into primes, alpha_p) for every prime of `P0`.
    p0: Vec<(usize, i64)>,
    /// Position in `p0` of the solved coordinate (smallest |alpha|, then smallest p).
    solved: usize,
}

impl Constraint {
    fn new(shift: &RationalShift, primes: &[u64]) -> Result<Self> {
        let mut p0 = Vec::new();
        for (&p, &a) in shift.decomposition() {
            let i = primes.binary_search(&p).map_err(|_| {
                Error::BadTruncation(format!("prime cutoff must include every prime of ab (missing {p})"))
            })?;
            p0.push((i, a as i64));
        }
        let solved = (0..p0.len())
            .min_by_key(|&j| (p0[j].1.unsigned_abs(), j))
            .expect("a > 1 has a prime factor");
        Ok(Self { p0, solved })
    }

    /// Turns of the solved coordinate for branch `j` given the others.
    fn solve<T: Real>(&self, turns1: &[T], branch: i64) -> T {
        let ac = self.p0[self.solved].1;
        let mut rest = T::zero();
        for (k, &(i, a)) in self.p0.iter().enumerate() {
            if k != self.solved {
                rest += T::from_i64(a).unwrap() * turns1[i];
            }
        }
        wrap_turns((T::from_i64(branch).unwrap() - rest) / T::from_i64(ac).unwrap())
    }

    fn branches(&self) -> i64 {
        self.p0[self.solved].1.abs()
    }

    fn solved_index(&self) -> usize {
        self.p0[self.solved].0
    }
}

/// Haar sampler on the truncated kernel subgroup `{omega1(a) = omega1(b)}`
/// times the free torus in `m`.
///
/// Sample `i` of seed `s` is drawn from `ChaCha8Rng::seed_from_u64(s)` with
/// stream `i`, so any subset of samples can be regenerated independently and
/// parallel generation is bit-identical to serial generation.
#[derive(Debug, Clone)]
pub struct HaarSampler {
    shift: RationalShift,
    truncation: Truncation,
    primes: Arc<[u64]>,
    constraint: Constraint,
}

impl HaarSampler {
    pub fn new(shift: &RationalShift, truncation: Truncation) -> Result<Self> {
        let primes: Arc<[u64]> = primes_up_to(truncation.prime_cutoff).into();
        let constraint = Constraint::new(shift, &primes)?;
        Ok(Self { shift: shift.clone(), truncation, primes, constraint })
    }

    pub fn shift(&self) -> &RationalShift {
        &self.shift
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    /// Prime whose phase is solved from the constraint.
    pub fn constrained_prime(&self) -> u64 {
        self.primes[self.constraint.solved_index()]
    }

    pub fn sample<T: Real>(&self, seed: u64, stream: u64) -> OmegaSample<T> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let solved = self.constraint.solved_index();
        let mut turns1: Vec<T> = (0..self.primes.len())
            .map(|i| if i == solved { T::zero() } else { T::lit(rng.gen::<f64>()) })
            .collect();
        let branch = rng.gen_range(0..self.constraint.branches());
        turns1[solved] = self.constraint.solve(&turns1, branch);
        let turns2 = (0..=self.truncation.m_cutoff).map(|_| T::lit(rng.gen::<f64>())).collect();
        OmegaSample { primes: self.primes.clone(), turns1, turns2, truncation: self.truncation }
    }

    /// Samples `0..count` of `seed`, generated in parallel, returned in order.
    pub fn sample_many<T: Real>(&self, seed: u64, count: usize) -> Vec<OmegaSample<T>> {
        (0..count as u64).into_par_iter().map(|i| self.sample(seed, i)).collect()
    }
}

/// One Haar sample (stream 0 of `seed`).
pub fn sample_haar<T: Real>(shift: &RationalShift, truncation: Truncation, seed: u64) -> Result<OmegaSample<T>> {
    Ok(HaarSampler::new(shift, truncation)?.sample(seed, 0))
}

/// The orbit generator `f_h = (p^{-ih}, (m + alpha)^{-ih})`, stored as the
/// per-step phase decrements `ln p / ln(a/b)` and `ln(m + alpha) / ln(a/b)`
/// in turns.
#[derive(Debug, Clone)]
pub struct Orbit<T> {
    sampler: HaarSampler,
    alpha: T,
    rate1: Vec<T>,
    rate2: Vec<T>,
}

impl<T: Real> Orbit<T> {
    pub fn new(shift: &RationalShift, alpha: T, truncation: Truncation) -> Result<Self> {
        let sampler = HaarSampler::new(shift, truncation)?;
        let l = shift.ln_ratio::<T>();
        let rate1 = sampler.primes.iter().map(|&p| T::from_u64_lossy(p).ln() / l).collect();
        let rate2 = (0..=truncation.m_cutoff).map(|m| (T::from_u64_lossy(m) + alpha).ln() / l).collect();
        Ok(Self { sampler, alpha, rate1, rate2 })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn sampler(&self) -> &HaarSampler {
        &self.sampler
    }

    pub fn rate1(&self) -> &[T] {
        &self.rate1
    }

    pub fn rate2(&self) -> &[T] {
        &self.rate2
    }

    /// `f_h^k * base`, recomputed from `k` directly. The solved `P0`
    /// coordinate is re-derived from the constraint, choosing the branch
    /// nearest the direct formula, so the subgroup relation holds to
    /// rounding for every `k`.
    pub fn apply(&self, base: &OmegaSample<T>, k: i64) -> OmegaSample<T> {
        let kf = T::from_i64(k).unwrap();
        let turns1: Vec<T> = base
            .turns1
            .iter()
            .zip(&self.rate1)
            .map(|(&b, &r)| wrap_turns(b - frac_product(kf, r)))
            .collect();
        let turns2 = base
            .turns2
            .iter()
            .zip(&self.rate2)
            .map(|(&b, &r)| wrap_turns(b - frac_product(kf, r)))
            .collect();
        let mut out = OmegaSample {
            primes: base.primes.clone(),
            turns1,
            turns2,
            truncation: base.truncation,
        };
        let c = &self.sampler.constraint;
        let direct = out.turns1[c.solved_index()];
        let circ = |x: T| {
            let d = wrap_turns(x - direct);
            d.min(T::one() - d)
        };
        let best = (0..c.branches())
            .map(|j| c.solve(&out.turns1, j))
            .min_by(|a, b| circ(*a).partial_cmp(&circ(*b)).unwrap())
            .unwrap();
        out.turns1[c.solved_index()] = best;
        out
    }

    pub fn start(&self, base: OmegaSample<T>) -> OrbitState<T> {
        OrbitState { current: base.clone(), base, k: 0 }
    }
}

/// A point `f_h^k * base` on an orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitState<T> {
    pub base: OmegaSample<T>,
    pub k: i64,
    pub current: OmegaSample<T>,
}

impl<T: Real> OrbitState<T> {
    /// One application of the ergodic shift.
    pub fn step(&self, orbit: &Orbit<T>) -> Self {
        self.jump(orbit, 1)
    }

    /// The inverse shift.
    pub fn step_back(&self, orbit: &Orbit<T>) -> Self {
        self.jump(orbit, -1)
    }

    pub fn jump(&self, orbit: &Orbit<T>, by: i64) -> Self {
        let k = self.k + by;
        Self { base: self.base.clone(), k, current: orbit.apply(&self.base, k) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trunc() -> Truncation {
        Truncation { prime_cutoff: 50, m_cutoff: 20 }
    }

    #[test]
    fn shift_two_one_pins_omega_two() {
        let shift = RationalShift::new(2, 1).unwrap();
        let s = HaarSampler::new(&shift, trunc()).unwrap();
        for i in 0..200 {
            let w: OmegaSample<f64> = s.sample(7, i);
            assert_eq!(w.omega1(2), Some(Complex::new(1.0, 0.0)));
        }
    }

    #[test]
    fn bad_truncation() {
        let shift = RationalShift::new(14, 3).unwrap();
        let t = Truncation { prime_cutoff: 5, m_cutoff: 3 };
        assert!(matches!(HaarSampler::new(&shift, t), Err(Error::BadTruncation(_))));
    }

    #[test]
    fn solved_coordinate_prefers_small_exponent() {
        // 12/5 = 2^2 3 5^-1: |alpha| = 1 at 3 and 5, so 3 is solved.
        let shift = RationalShift::new(12, 5).unwrap();
        let s = HaarSampler::new(&shift, trunc()).unwrap();
        assert_eq!(s.constrained_prime(), 3);
        let w: OmegaSample<f64> = s.sample(1, 3);
        assert!(w.constraint_residual(&shift) < 1e-12);
    }

    #[test]
    fn parallel_and_serial_sampling_agree() {
        let shift = RationalShift::new(6, 5).unwrap();
        let s = HaarSampler::new(&shift, trunc()).unwrap();
        let many: Vec<OmegaSample<f64>> = s.sample_many(99, 16);
        for (i, w) in many.iter().enumerate() {
            assert_eq!(*w, s.sample(99, i as u64));
        }
    }

    #[test]
    fn orbit_matches_direct_powers() {
        let shift = RationalShift::new(3, 2).unwrap();
        let alpha = 0.7548776662466927;
        let orbit = Orbit::new(&shift, alpha, trunc()).unwrap();
        let unit = OmegaSample::unit(trunc());
        let h = shift.h::<f64>();
        let k = 9_876i64;
        let w = orbit.apply(&unit, k);
        for &p in &[2u64, 3, 47] {
            let direct = Complex::from_polar(1.0, -(k as f64) * h * (p as f64).ln());
            assert!((w.omega1(p).unwrap() - direct).norm() < 1e-9);
        }
        let direct = Complex::from_polar(1.0, -(k as f64) * h * (5.0 + alpha).ln());
        assert!((w.omega2(5).unwrap() - direct).norm() < 1e-9);
    }

    #[test]
    fn step_and_inverse() {
        let shift = RationalShift::new(6, 5).unwrap();
        let orbit = Orbit::new(&shift, 0.3f64, trunc()).unwrap();
        let base = orbit.sampler().sample(5, 0);
        let st = orbit.start(base.clone());
        let back = st.step(&orbit).step_back(&orbit);
        assert_eq!(back.k, 0);
        for (a, b) in back.current.turns1().iter().zip(base.turns1()) {
            let d = wrap_turns(a - b);
            assert!(d.min(1.0 - d) < 1e-12);
        }
    }
}
