//! Function families evaluated on shifted grids.

use super::engine::{ShiftedSeries, BLOCK};
use crate::arithmetic::RationalShift;
use crate::error::{Error, Result};
use crate::numerics::pow_neg;
use crate::scalar::Real;
use crate::special::hurwitz::{em_tail, required_shift};
use crate::special::matsumoto::series_tail;
use crate::special::smoothed::{periodic_n_cutoff, phi_n_cutoff};
use crate::special::{v1, v2, CoeffTable, MatsumotoSpec, PeriodicSequence, SmoothingParam};
use num_complex::Complex;
use num_traits::Zero;

/// Values of a family at `points + i k h` for a block of consecutive `k`.
#[derive(Debug, Clone)]
pub struct BlockValues<T> {
    /// Row-major: `values[(k - k0) * npoints + p]`.
    pub values: Vec<Complex<T>>,
    /// Uniform absolute error bound over the block.
    pub err: T,
}

/// A holomorphic function that can be evaluated on vertically shifted grids.
pub trait GridFamily<T: Real>: Send + Sync {
    /// Open interval of real parts where the family is evaluable.
    fn sigma_range(&self) -> (T, T);

    /// Fixes the point set, step `h`, accuracy, and the exclusive upper end
    /// `k_end` of the shifts that will be requested.
    fn prepare(
        &self,
        h: T,
        points: &[Complex<T>],
        tol: T,
        max_terms: usize,
        k_end: u64,
    ) -> Result<Box<dyn PreparedFamily<T>>>;
}

pub trait PreparedFamily<T: Real>: Send + Sync {
    /// Values for shifts `k0 .. k0 + count`. Shifts with `mask[k - k0] ==
    /// false` may be skipped and are then reported as zero.
    fn eval_block(&self, k0: u64, count: usize, mask: Option<&[bool]>) -> Result<BlockValues<T>>;
}

/// Config-level description of a family.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec<T> {
    /// The Riemann zeta function; with `partial`, the factors at the primes
    /// dividing the shift's numerator and denominator are removed.
    Riemann { partial: bool },
    /// The periodic Hurwitz zeta function with coefficients `coeffs`.
    Periodic { alpha: T, coeffs: Vec<Complex<T>> },
    /// A Matsumoto product: its Dirichlet series for `sigma > 1`, or the
    /// smoothed proxy when `smoothing` is set.
    Matsumoto { spec: MatsumotoSpec<T>, smoothing: Option<SmoothingParam<T>>, partial: bool },
    /// The smoothed periodic series.
    SmoothedPeriodic { alpha: T, coeffs: Vec<Complex<T>>, smoothing: SmoothingParam<T> },
    Constant { value: Complex<T> },
}

impl<T: Real> FamilySpec<T> {
    pub fn build(&self, shift: &RationalShift) -> Result<Box<dyn GridFamily<T>>> {
        Ok(match self {
            FamilySpec::Riemann { partial } => {
                let removed = if *partial { shift.p0() } else { Vec::new() };
                Box::new(HurwitzFamily::new(T::one(), PeriodicSequence::from_real(&[T::one()])?, removed)?)
            }
            FamilySpec::Periodic { alpha, coeffs } => {
                Box::new(HurwitzFamily::new(*alpha, PeriodicSequence::new(coeffs.clone())?, Vec::new())?)
            }
            FamilySpec::Matsumoto { spec, smoothing, partial } => {
                spec.validate()?;
                let spec = if *partial { spec.without_primes(&shift.p0()) } else { spec.clone() };
                match smoothing {
                    Some(sm) => Box::new(DirichletFamily::SmoothedPhi { spec, smoothing: *sm }),
                    None => Box::new(DirichletFamily::Series { spec }),
                }
            }
            FamilySpec::SmoothedPeriodic { alpha, coeffs, smoothing } => {
                check_alpha(*alpha)?;
                Box::new(DirichletFamily::SmoothedPeriodic {
                    alpha: *alpha,
                    coeffs: PeriodicSequence::new(coeffs.clone())?,
                    smoothing: *smoothing,
                })
            }
            FamilySpec::Constant { value } => Box::new(ConstantFamily(*value)),
        })
    }
}

fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if !(alpha > T::zero() && alpha <= T::one()) {
        return Err(Error::InvalidInput(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    Ok(())
}

fn check_points<T: Real>(points: &[Complex<T>], range: (T, T)) -> Result<()> {
    if points.is_empty() {
        return Err(Error::InvalidInput("empty point set".into()));
    }
    for p in points {
        if !(p.re.is_finite() && p.im.is_finite()) || !(p.re > range.0 && p.re < range.1) {
            return Err(Error::Domain(format!(
                "point {p} outside the evaluable region {} < sigma < {}",
                range.0, range.1
            )));
        }
    }
    Ok(())
}

fn sigma_bounds<T: Real>(points: &[Complex<T>]) -> (T, T, T) {
    let lo = points.iter().map(|p| p.re).fold(T::infinity(), T::min);
    let hi = points.iter().map(|p| p.re).fold(T::neg_infinity(), T::max);
    let t = points.iter().map(|p| p.im.abs()).fold(T::zero(), T::max);
    (lo, hi, t)
}

/// `k^{-s} (sum_l b_l zeta_reg(s, (l + alpha)/k) + (sum b)/(s - 1))`, times
/// `prod_{p in removed} (1 - p^{-s})`.
pub struct HurwitzFamily<T: Real> {
    alpha: T,
    coeffs: PeriodicSequence<T>,
    removed: Vec<u64>,
}

impl<T: Real> HurwitzFamily<T> {
    pub fn new(alpha: T, coeffs: PeriodicSequence<T>, removed: Vec<u64>) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self { alpha, coeffs, removed })
    }
}

struct Component<T> {
    a: T,
    b: Complex<T>,
    series: ShiftedSeries<T>,
}

struct PreparedHurwitz<T: Real> {
    points: Vec<Complex<T>>,
    h: T,
    period: T,
    pole: Option<Complex<T>>,
    removed: Vec<T>,
    comps: Vec<Component<T>>,
    tol_each: T,
    sigma: (T, T, T),
    scale: T,
}

impl<T: Real> GridFamily<T> for HurwitzFamily<T> {
    fn sigma_range(&self) -> (T, T) {
        (T::from_usize(1).unwrap() - T::from_usize(2 * crate::special::hurwitz::EM_ORDER).unwrap(), T::infinity())
    }

    fn prepare(
        &self,
        h: T,
        points: &[Complex<T>],
        tol: T,
        max_terms: usize,
        k_end: u64,
    ) -> Result<Box<dyn PreparedFamily<T>>> {
        check_points(points, self.sigma_range())?;
        let (lo, hi, t_abs) = sigma_bounds(points);
        let period = T::from_usize(self.coeffs.period()).unwrap();
        let removed: Vec<T> = self.removed.iter().map(|&p| T::from_u64_lossy(p)).collect();
        let removal_bound: T = removed.iter().map(|&p| T::one() + p.powf(-lo)).fold(T::one(), |a, b| a * b);
        let scale = period.powf(-lo) * removal_bound;
        let tol_each = tol * T::lit(0.5) / (scale * self.coeffs.abs_sum().max(T::epsilon()));
        let t_top = t_abs + h * T::from_u64_lossy(k_end.div_ceil(BLOCK as u64) * BLOCK as u64);
        let mut comps = Vec::new();
        for (l, &b) in self.coeffs.coeffs().iter().enumerate() {
            if b == Complex::zero() {
                continue;
            }
            let a = (T::from_usize(l).unwrap() + self.alpha) / period;
            let m = shift_for(lo, hi, t_top, a, tol_each);
            if !(m <= T::from_usize(max_terms).unwrap()) {
                return Err(Error::BudgetExceeded(format!(
                    "Hurwitz component needs {m} terms at |t| = {t_top}, cap {max_terms}"
                )));
            }
            let m = m.to_usize().unwrap();
            let logs: Vec<T> = (0..m).map(|j| (T::from_usize(j).unwrap() + a).ln()).collect();
            comps.push(Component { a, b, series: ShiftedSeries::new(logs, None, h, points) });
        }
        let pole = if self.coeffs.is_entire() { None } else { Some(self.coeffs.sum()) };
        Ok(Box::new(PreparedHurwitz {
            points: points.to_vec(),
            h,
            period,
            pole,
            removed,
            comps,
            tol_each,
            sigma: (lo, hi, t_abs),
            scale,
        }))
    }
}

/// Euler-Maclaurin shift covering every point with real part in `[lo, hi]`
/// and `|t| <= t_top`.
fn shift_for<T: Real>(lo: T, hi: T, t_top: T, a: T, tol: T) -> T {
    let half = tol * T::lit(0.5);
    required_shift(Complex::new(lo, t_top), a, half).max(required_shift(Complex::new(hi, t_top), a, half))
}

impl<T: Real> PreparedFamily<T> for PreparedHurwitz<T> {
    fn eval_block(&self, k0: u64, count: usize, mask: Option<&[bool]>) -> Result<BlockValues<T>> {
        let np = self.points.len();
        let one = Complex::new(T::one(), T::zero());
        let (lo, hi, t_abs) = self.sigma;
        // Shifts come from the nominal block so results do not depend on how
        // a range is split into blocks.
        let nominal_end = (k0 / BLOCK as u64 + 1) * BLOCK as u64;
        let t_top = t_abs + self.h * T::from_u64_lossy(nominal_end.max(k0 + count as u64));
        let mut inner = vec![Complex::<T>::zero(); count * np];
        let mut err = T::zero();
        let active = |k: usize| mask.is_none_or(|mk| mk[k]);
        for c in &self.comps {
            let m = shift_for(lo, hi, t_top, c.a, self.tol_each).to_usize().unwrap();
            let head = c.series.head_block(m, k0, count, self.tol_each * T::lit(0.25), mask)?;
            let n = T::from_usize(m).unwrap() + c.a;
            let ln_n = n.ln();
            let mut tail_round = T::zero();
            for kk in 0..count {
                if !active(kk) {
                    continue;
                }
                let shift = Complex::new(T::zero(), self.h * T::from_u64_lossy(k0 + kk as u64));
                for (p, &pt) in self.points.iter().enumerate() {
                    let s = pt + shift;
                    let tail = em_tail(s, n, ln_n, true);
                    let v = head.values[kk * np + p] + tail;
                    inner[kk * np + p] += c.b * v;
                    tail_round = tail_round.max(T::epsilon() * tail.norm() * (T::lit(16.0) + s.norm() * ln_n));
                }
            }
            err += c.b.norm() * (self.tol_each * T::lit(0.5) + head.err + tail_round);
        }
        let mut values = vec![Complex::<T>::zero(); count * np];
        for kk in 0..count {
            if !active(kk) {
                continue;
            }
            let shift = Complex::new(T::zero(), self.h * T::from_u64_lossy(k0 + kk as u64));
            for (p, &pt) in self.points.iter().enumerate() {
                let s = pt + shift;
                let mut v = inner[kk * np + p];
                if let Some(res) = self.pole {
                    if s == one {
                        return Err(Error::PoleAt1);
                    }
                    v += res / (s - one);
                }
                v *= pow_neg(self.period, s);
                for &q in &self.removed {
                    v *= one - pow_neg(q, s);
                }
                values[kk * np + p] = v;
            }
        }
        Ok(BlockValues { values, err: err * self.scale })
    }
}

/// Finite Dirichlet polynomials standing in for absolutely convergent series.
enum DirichletFamily<T: Real> {
    Series { spec: MatsumotoSpec<T> },
    SmoothedPhi { spec: MatsumotoSpec<T>, smoothing: SmoothingParam<T> },
    SmoothedPeriodic { alpha: T, coeffs: PeriodicSequence<T>, smoothing: SmoothingParam<T> },
}

struct PreparedDirichlet<T> {
    series: ShiftedSeries<T>,
    tail: T,
    tol: T,
}

fn table_terms<T: Real, F: Fn(u64) -> T>(table: &CoeffTable<T>, weight: F) -> (Vec<T>, Vec<Complex<T>>) {
    let mut terms: Vec<(u64, Complex<T>)> = table
        .entries
        .iter()
        .filter(|e| e.c != Complex::zero())
        .map(|e| (e.k, e.c * weight(e.k)))
        .collect();
    terms.sort_by_key(|t| t.0);
    terms.into_iter().map(|(k, w)| (T::from_u64_lossy(k).ln(), w)).unzip()
}

impl<T: Real> GridFamily<T> for DirichletFamily<T> {
    fn sigma_range(&self) -> (T, T) {
        match self {
            DirichletFamily::Series { .. } => (T::one(), T::infinity()),
            _ => (T::lit(0.5), T::infinity()),
        }
    }

    fn prepare(
        &self,
        h: T,
        points: &[Complex<T>],
        tol: T,
        max_terms: usize,
        _k_end: u64,
    ) -> Result<Box<dyn PreparedFamily<T>>> {
        check_points(points, self.sigma_range()).map_err(|e| match (self, e) {
            (DirichletFamily::Series { .. }, Error::Domain(msg)) => Error::Domain(format!(
                "{msg}; a generic product has no continuation into the strip, enable smoothing"
            )),
            (_, e) => e,
        })?;
        let (lo, _, _) = sigma_bounds(points);
        let half = tol * T::lit(0.5);
        let (logs, weights, tail) = match self {
            DirichletFamily::Series { spec } => {
                let (tail, k) = series_tail(spec, lo, half, None)?;
                if k > max_terms as u64 {
                    return Err(Error::BudgetExceeded(format!("series needs {k} terms, cap {max_terms}")));
                }
                let table = CoeffTable::build(spec, k.max(1), max_terms)?;
                let (l, w) = table_terms(&table, |_| T::one());
                (l, w, tail)
            }
            DirichletFamily::SmoothedPhi { spec, smoothing } => {
                let (k, tail) = phi_n_cutoff(spec, lo, *smoothing, half, max_terms)?;
                let table = CoeffTable::build(spec, k, max_terms)?;
                let n = T::from_u64_lossy(smoothing.n);
                let (l, w) = table_terms(&table, |k| v1(T::from_u64_lossy(k), n, smoothing.sigma_star1));
                (l, w, tail)
            }
            DirichletFamily::SmoothedPeriodic { alpha, coeffs, smoothing } => {
                let (m, tail) = periodic_n_cutoff(lo, *alpha, coeffs.max_abs(), *smoothing, half, max_terms)?;
                let n = T::from_u64_lossy(smoothing.n);
                let mut logs = Vec::new();
                let mut weights = Vec::new();
                for i in 0..m as usize {
                    let b = coeffs.at(i);
                    if b == Complex::zero() {
                        continue;
                    }
                    let x = T::from_usize(i).unwrap();
                    logs.push((x + *alpha).ln());
                    weights.push(b * v2(x, n, *alpha, smoothing.sigma_star1));
                }
                (logs, weights, tail)
            }
        };
        let series = ShiftedSeries::new(logs, Some(&weights), h, points);
        Ok(Box::new(PreparedDirichlet { series, tail, tol }))
    }
}

impl<T: Real> PreparedFamily<T> for PreparedDirichlet<T> {
    fn eval_block(&self, k0: u64, count: usize, mask: Option<&[bool]>) -> Result<BlockValues<T>> {
        let head = self.series.head_block(self.series.len(), k0, count, self.tol * T::lit(0.25), mask)?;
        Ok(BlockValues { values: head.values, err: self.tail + head.err })
    }
}

/// A constant function.
pub struct ConstantFamily<T>(pub Complex<T>);

struct PreparedConstant<T> {
    value: Complex<T>,
    npoints: usize,
}

impl<T: Real> GridFamily<T> for ConstantFamily<T> {
    fn sigma_range(&self) -> (T, T) {
        (T::neg_infinity(), T::infinity())
    }

    fn prepare(&self, _h: T, points: &[Complex<T>], _tol: T, _max: usize, _k_end: u64) -> Result<Box<dyn PreparedFamily<T>>> {
        Ok(Box::new(PreparedConstant { value: self.0, npoints: points.len() }))
    }
}

impl<T: Real> PreparedFamily<T> for PreparedConstant<T> {
    fn eval_block(&self, _k0: u64, count: usize, _mask: Option<&[bool]>) -> Result<BlockValues<T>> {
        Ok(BlockValues { values: vec![self.value; count * self.npoints], err: T::zero() })
    }
}
