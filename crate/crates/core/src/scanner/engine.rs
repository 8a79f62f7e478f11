//! Block evaluation of Dirichlet polynomials along vertical shifts.
//!
//! For `S(s) = sum_j w_j x_j^{-s}` on a grid shifted by `i k h`, points are
//! grouped in clusters around centers `c`. With `L_j = ln x_j` and a
//! centering log `L0`,
//!
//! `S(c + d + i k h) = e^{-d L0} sum_r d^r / r! * S_r(k)`,
//! `S_r(k) = sum_j w_j x_j^{-c - i k h} (-(L_j - L0))^r`,
//!
//! so the expensive sums are shared by every point in a cluster. The terms
//! for consecutive `k` follow from one another by the fixed rotation
//! `x_j^{-i h}`, which is taken directly only at the start of each block.

use super::grid::{clusters, Cluster};
use crate::error::{Error, Result};
use crate::numerics::{cis_turns, frac_product};
use crate::scalar::Real;
use num_complex::Complex;
use num_traits::Zero;

/// Shifts processed together; block starts are multiples of this.
pub const BLOCK: usize = 64;

/// Largest cluster radius in the complex plane.
pub const CLUSTER_RADIUS: f64 = 0.125;

const MAX_ORDER: usize = 48;

struct ClusterTerms<T> {
    cluster: Cluster<T>,
    /// Member offsets from the center, aligned with `cluster.members`.
    deltas: Vec<Complex<T>>,
    amps: Vec<Complex<T>>,
    /// `prefix[m] = sum_{j<m} |amps_j|`
    prefix: Vec<T>,
}

/// A Dirichlet polynomial prepared for a fixed point set and step `h`.
pub(crate) struct ShiftedSeries<T> {
    logs: Vec<T>,
    rate: Vec<T>,
    rot: Vec<Complex<T>>,
    clusters: Vec<ClusterTerms<T>>,
    npoints: usize,
}

/// Per-block output of [`ShiftedSeries::head_block`].
pub(crate) struct HeadBlock<T> {
    /// Row-major: `values[k * npoints + p]`.
    pub values: Vec<Complex<T>>,
    pub err: T,
}

impl<T: Real> ShiftedSeries<T> {
    /// `logs` must be ascending. `weights` defaults to all ones.
    pub fn new(logs: Vec<T>, weights: Option<&[Complex<T>]>, h: T, points: &[Complex<T>]) -> Self {
        let rate: Vec<T> = logs.iter().map(|&l| h * l / T::two_pi()).collect();
        let rot: Vec<Complex<T>> = rate.iter().map(|&r| cis_turns(-r)).collect();
        let clusters = clusters(points, T::lit(CLUSTER_RADIUS))
            .into_iter()
            .map(|cluster| {
                let c = cluster.center;
                let amps: Vec<Complex<T>> = logs
                    .iter()
                    .enumerate()
                    .map(|(j, &l)| {
                        let z = (-c * l).exp();
                        weights.map_or(z, |w| w[j] * z)
                    })
                    .collect();
                let mut prefix = Vec::with_capacity(amps.len() + 1);
                let mut acc = T::zero();
                prefix.push(acc);
                for a in &amps {
                    acc += a.norm();
                    prefix.push(acc);
                }
                let deltas = cluster.members.iter().map(|&p| points[p] - c).collect();
                ClusterTerms { cluster, deltas, amps, prefix }
            })
            .collect();
        Self { logs, rate, rot, clusters, npoints: points.len() }
    }

    pub fn len(&self) -> usize {
        self.logs.len()
    }

    /// `sum_{j<m}` at every point for shifts `k0 .. k0 + count`. The Taylor
    /// truncation in each cluster is kept below `tol`. Masked-out shifts are
    /// left at zero.
    pub fn head_block(
        &self,
        m: usize,
        k0: u64,
        count: usize,
        tol: T,
        mask: Option<&[bool]>,
    ) -> Result<HeadBlock<T>> {
        let np = self.npoints;
        let mut values = vec![Complex::<T>::zero(); count * np];
        if m == 0 {
            return Ok(HeadBlock { values, err: T::zero() });
        }
        if m > self.logs.len() {
            return Err(Error::BudgetExceeded(format!(
                "block needs {m} terms, {} prepared",
                self.logs.len()
            )));
        }
        let half = T::lit(0.5);
        let l_lo = self.logs[0];
        let l_hi = self.logs[m - 1];
        let l0 = (l_lo + l_hi) * half;
        let d = (l_hi - l_lo) * half;
        let k0f = T::from_u64_lossy(k0);
        let mut err = T::zero();
        let active = |k: usize| mask.is_none_or(|mk| mk[k]);
        for ct in &self.clusters {
            let rho = ct.cluster.radius;
            let s_abs = ct.prefix[m];
            let growth = s_abs * (rho * (l0.abs() + d)).exp();
            let x = rho * d;
            let mut order = 0usize;
            let mut bound = growth * x;
            while bound > tol {
                order += 1;
                if order > MAX_ORDER {
                    return Err(Error::BudgetExceeded(format!(
                        "Taylor order above {MAX_ORDER} for cluster radius {rho}"
                    )));
                }
                bound = bound * x / T::from_usize(order + 1).unwrap();
            }
            let stride = order + 1;
            let mut acc_re = vec![T::zero(); count * stride];
            let mut acc_im = vec![T::zero(); count * stride];
            let job = Accumulate {
                logs: &self.logs[..m],
                rate: &self.rate[..m],
                rot: &self.rot[..m],
                amps: &ct.amps[..m],
                l0,
                k0: k0f,
                mask,
            };
            macro_rules! fixed {
                ($($n:literal)*) => {
                    match stride {
                        $($n => job.run::<$n>(&mut acc_re, &mut acc_im),)*
                        _ => job.run_dyn(stride, &mut acc_re, &mut acc_im),
                    }
                };
            }
            fixed!(1 2 3 4 5 6 7 8 9 10 11 12 13 14 15 16);
            for (&p, &delta) in ct.cluster.members.iter().zip(&ct.deltas) {
                let e = (-delta * l0).exp();
                let mut pc = Vec::with_capacity(stride);
                let mut term = e;
                pc.push(term);
                for r in 1..stride {
                    term = term * delta / T::from_usize(r).unwrap();
                    pc.push(term);
                }
                for kk in 0..count {
                    if !active(kk) {
                        continue;
                    }
                    let base = kk * stride;
                    let mut v = Complex::<T>::zero();
                    for r in 0..stride {
                        v += pc[r] * Complex::new(acc_re[base + r], acc_im[base + r]);
                    }
                    values[kk * np + p] = v;
                }
            }
            let phase = T::two_pi() * (k0f + T::from_usize(count).unwrap()) * self.rate[m - 1];
            let rounding = T::epsilon()
                * growth
                * (T::from_usize(4 * count + 8 * stride + 16).unwrap() + phase + ct.cluster.center.im.abs() * l_hi.abs());
            err = err.max(bound + rounding);
        }
        Ok(HeadBlock { values, err })
    }
}

/// The shared sums `S_r(k)` of one cluster, accumulated into
/// `acc[k * stride + r]`.
struct Accumulate<'a, T> {
    logs: &'a [T],
    rate: &'a [T],
    rot: &'a [Complex<T>],
    amps: &'a [Complex<T>],
    l0: T,
    k0: T,
    mask: Option<&'a [bool]>,
}

impl<T: Real> Accumulate<'_, T> {
    fn run<const S: usize>(&self, acc_re: &mut [T], acc_im: &mut [T]) {
        const LANES: usize = 4;
        let count = acc_re.len() / S;
        let m = self.logs.len();
        let full = m - m % LANES;
        let mut coef = [[T::one(); S]; LANES];
        let mut z = [Complex::new(T::zero(), T::zero()); LANES];
        let mut rot = z;
        for j0 in (0..full).step_by(LANES) {
            for q in 0..LANES {
                let j = j0 + q;
                let dl = self.l0 - self.logs[j];
                for r in 1..S {
                    coef[q][r] = coef[q][r - 1] * dl;
                }
                z[q] = self.amps[j] * cis_turns(-frac_product(self.k0, self.rate[j]));
                rot[q] = self.rot[j];
            }
            for kk in 0..count {
                if self.mask.is_none_or(|mk| mk[kk]) {
                    let re: &mut [T; S] = (&mut acc_re[kk * S..(kk + 1) * S]).try_into().unwrap();
                    let im: &mut [T; S] = (&mut acc_im[kk * S..(kk + 1) * S]).try_into().unwrap();
                    for r in 0..S {
                        re[r] += (coef[0][r] * z[0].re + coef[1][r] * z[1].re) + (coef[2][r] * z[2].re + coef[3][r] * z[3].re);
                        im[r] += (coef[0][r] * z[0].im + coef[1][r] * z[1].im) + (coef[2][r] * z[2].im + coef[3][r] * z[3].im);
                    }
                }
                for q in 0..LANES {
                    z[q] *= rot[q];
                }
            }
        }
        self.run_range(full, S, acc_re, acc_im);
    }

    fn run_dyn(&self, stride: usize, acc_re: &mut [T], acc_im: &mut [T]) {
        self.run_range(0, stride, acc_re, acc_im);
    }

    /// Terms `from..` one at a time.
    fn run_range(&self, from: usize, stride: usize, acc_re: &mut [T], acc_im: &mut [T]) {
        let count = acc_re.len() / stride;
        let mut coef = vec![T::one(); stride];
        for j in from..self.logs.len() {
            let dl = self.l0 - self.logs[j];
            for r in 1..stride {
                coef[r] = coef[r - 1] * dl;
            }
            let mut z = self.amps[j] * cis_turns(-frac_product(self.k0, self.rate[j]));
            let rot = self.rot[j];
            for kk in 0..count {
                if self.mask.is_none_or(|mk| mk[kk]) {
                    let base = kk * stride;
                    for r in 0..stride {
                        acc_re[base + r] += coef[r] * z.re;
                        acc_im[base + r] += coef[r] * z.im;
                    }
                }
                z *= rot;
            }
        }
    }
}
