//! Counting shifts that approximate a pair of targets simultaneously.

use super::engine::BLOCK;
use super::family::{FamilySpec, GridFamily, PreparedFamily};
use super::grid::CompactGrid;
use super::target::{target_admissible, Role, TargetSpec};
use crate::arithmetic::RationalShift;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::AccuracyBudget;
use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

/// Blocks per parallel work item.
pub const CHUNK_BLOCKS: usize = 4;

#[derive(Debug, Clone)]
pub struct ScanConfig<T> {
    /// Largest shift index; shifts `0..=n` are examined.
    pub n: u64,
    pub shift: RationalShift,
    pub epsilon: T,
    pub k1: CompactGrid<T>,
    pub k2: CompactGrid<T>,
    pub targets: (TargetSpec<T>, TargetSpec<T>),
    pub phi: FamilySpec<T>,
    pub zeta: FamilySpec<T>,
    pub eval_budget: AccuracyBudget<T>,
    /// Left edge of the strip holding `k1`.
    pub sigma_star: T,
}

impl<T: Real> ScanConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > T::zero()) || !self.epsilon.is_finite() {
            return Err(Error::Config(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if !(self.eval_budget.abs_tol > T::zero()) || self.eval_budget.abs_tol > self.epsilon / T::lit(10.0) {
            return Err(Error::Config(format!(
                "abs_tol {} must be positive and at most epsilon/10 = {}",
                self.eval_budget.abs_tol,
                self.epsilon / T::lit(10.0)
            )));
        }
        let inside = |g: &CompactGrid<T>, lo: T| g.points().iter().all(|p| p.re > lo && p.re < T::one());
        if !inside(&self.k1, self.sigma_star) {
            return Err(Error::Domain(format!("K1 must lie in {} < sigma < 1", self.sigma_star)));
        }
        if !inside(&self.k2, T::lit(0.5)) {
            return Err(Error::Domain("K2 must lie in 1/2 < sigma < 1".into()));
        }
        Ok(())
    }
}

/// One shift where both distances are below epsilon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HitRow<T> {
    pub k: u64,
    pub dist1: T,
    pub dist2: T,
}

/// Hit density over shifts `0..=n`, stored as the exact ratio `hits/(n+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityPoint {
    pub n: u64,
    pub hits: u64,
    pub density: f64,
}

impl DensityPoint {
    fn new(n: u64, hits: u64) -> Self {
        Self { n, hits, density: hits as f64 / (n as f64 + 1.0) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult<T> {
    pub n: u64,
    pub hits: u64,
    pub density: f64,
    pub density_num: u64,
    pub density_den: u64,
    pub best_k: u64,
    pub best_distance: T,
    /// Shifts whose larger distance lies within `2 abs_tol` of epsilon.
    pub borderline: u64,
    pub density_series: Vec<DensityPoint>,
    pub hit_rows: Vec<HitRow<T>>,
}

struct ChunkOut<T> {
    rows: Vec<HitRow<T>>,
    borderline: u64,
    best: Option<(T, u64)>,
}

fn better<T: Real>(a: Option<(T, u64)>, b: Option<(T, u64)>) -> Option<(T, u64)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => {
            if y.0 < x.0 || (y.0 == x.0 && y.1 < x.1) {
                Some(y)
            } else {
                Some(x)
            }
        }
    }
}

fn sup_over<T: Real>(values: &[Complex<T>], target: &[Complex<T>]) -> T {
    values.iter().zip(target).map(|(v, t)| (v - t).norm()).fold(T::zero(), T::max)
}

/// Powers of ten up to `n`, followed by `n` itself.
pub fn default_checkpoints(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 10u64;
    while p <= n {
        out.push(p);
        p = match p.checked_mul(10) {
            Some(q) => q,
            None => break,
        };
    }
    if out.last() != Some(&n) {
        out.push(n);
    }
    out
}

pub fn scan<T: Real>(config: &ScanConfig<T>) -> Result<ScanResult<T>> {
    scan_with(config, &default_checkpoints(config.n), CHUNK_BLOCKS)
}

/// Density at each checkpoint from one pass up to the last checkpoint.
pub fn density_series<T: Real>(config: &ScanConfig<T>, checkpoints: &[u64]) -> Result<Vec<DensityPoint>> {
    let last = *checkpoints
        .last()
        .ok_or_else(|| Error::InvalidInput("at least one checkpoint is required".into()))?;
    let cfg = ScanConfig { n: last, ..config.clone() };
    Ok(scan_with(&cfg, checkpoints, CHUNK_BLOCKS)?.density_series)
}

/// The smallest `k` minimizing the larger of the two sup distances.
pub fn best_shift<T: Real>(config: &ScanConfig<T>) -> Result<(u64, T)> {
    let r = scan(config)?;
    Ok((r.best_k, r.best_distance))
}

/// [`scan`] with explicit checkpoints and work-item size in blocks. The
/// result does not depend on `chunk_blocks` or on the number of workers.
pub fn scan_with<T: Real>(config: &ScanConfig<T>, checkpoints: &[u64], chunk_blocks: usize) -> Result<ScanResult<T>> {
    config.validate()?;
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("checkpoints must be strictly ascending".into()));
    }
    if checkpoints.last().is_some_and(|&c| c > config.n) {
        return Err(Error::InvalidInput(format!("checkpoint beyond n = {}", config.n)));
    }
    if !target_admissible(&config.targets.0, &config.k1, Role::K1) {
        return Err(Error::InadmissibleTarget("f1 vanishes on K1".into()));
    }
    if !target_admissible(&config.targets.1, &config.k2, Role::K2) {
        return Err(Error::InadmissibleTarget("f2 is not admissible on K2".into()));
    }
    let t1 = config.targets.0.values_on(&config.k1)?;
    let t2 = config.targets.1.values_on(&config.k2)?;
    let h = config.shift.h::<T>();
    let tol = config.eval_budget.abs_tol;
    let total = config.n + 1;
    let nblocks = total.div_ceil(BLOCK as u64);
    let k_end = nblocks * BLOCK as u64;
    let f1 = prepare(&config.phi, config, &config.k1, h, k_end)?;
    let f2 = prepare(&config.zeta, config, &config.k2, h, k_end)?;
    let chunk_blocks = chunk_blocks.max(1) as u64;
    let nchunks = nblocks.div_ceil(chunk_blocks);
    let eps = config.epsilon;
    let band = tol + tol;

    let outs: Vec<ChunkOut<T>> = (0..nchunks)
        .into_par_iter()
        .map(|c| {
            let mut out = ChunkOut { rows: Vec::new(), borderline: 0, best: None };
            for b in c * chunk_blocks..((c + 1) * chunk_blocks).min(nblocks) {
                let k0 = b * BLOCK as u64;
                let count = (total - k0).min(BLOCK as u64) as usize;
                let v1 = f1.eval_block(k0, count, None)?;
                check_err(v1.err, tol)?;
                let d1: Vec<T> = (0..count)
                    .map(|kk| sup_over(&v1.values[kk * t1.len()..(kk + 1) * t1.len()], &t1))
                    .collect();
                // A shift can be skipped when it can neither hit, sit in the
                // borderline band, nor beat the best distance seen so far.
                let mask: Vec<bool> = d1
                    .iter()
                    .map(|&d| !(d > eps + band && out.best.is_some_and(|(bd, _)| d >= bd)))
                    .collect();
                let v2 = f2.eval_block(k0, count, Some(&mask))?;
                check_err(v2.err, tol)?;
                for kk in 0..count {
                    if !mask[kk] {
                        continue;
                    }
                    let k = k0 + kk as u64;
                    let d2 = sup_over(&v2.values[kk * t2.len()..(kk + 1) * t2.len()], &t2);
                    let dm = d1[kk].max(d2);
                    if d1[kk] < eps && d2 < eps {
                        out.rows.push(HitRow { k, dist1: d1[kk], dist2: d2 });
                    }
                    if (dm - eps).abs() <= band {
                        out.borderline += 1;
                    }
                    out.best = better(out.best, Some((dm, k)));
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::new();
    let mut borderline = 0;
    let mut best = None;
    for o in outs {
        rows.extend(o.rows);
        borderline += o.borderline;
        best = better(best, o.best);
    }
    let (best_distance, best_k) = best.expect("at least one shift is scanned");
    let hits = rows.len() as u64;
    let density_series = checkpoints
        .iter()
        .map(|&cp| DensityPoint::new(cp, rows.partition_point(|r| r.k <= cp) as u64))
        .collect();
    Ok(ScanResult {
        n: config.n,
        hits,
        density: hits as f64 / total as f64,
        density_num: hits,
        density_den: total,
        best_k,
        best_distance,
        borderline,
        density_series,
        hit_rows: rows,
    })
}

fn prepare<T: Real>(
    spec: &FamilySpec<T>,
    config: &ScanConfig<T>,
    grid: &CompactGrid<T>,
    h: T,
    k_end: u64,
) -> Result<Box<dyn PreparedFamily<T>>> {
    spec.build(&config.shift)?
        .prepare(h, grid.points(), config.eval_budget.abs_tol, config.eval_budget.max_terms, k_end)
}

fn check_err<T: Real>(err: T, tol: T) -> Result<()> {
    if err > tol {
        return Err(Error::BudgetExceeded(format!("block error bound {err} exceeds abs_tol {tol}")));
    }
    Ok(())
}

/// `max over the grid of |f(s + i k h) - target(s)|`.
///
/// This is the grid supremum, a lower bound for the supremum over the
/// underlying compact set; the gap shrinks with the mesh.
pub fn sup_distance<T: Real>(
    family: &dyn GridFamily<T>,
    k: u64,
    h: T,
    target: &TargetSpec<T>,
    grid: &CompactGrid<T>,
    acc: AccuracyBudget<T>,
) -> Result<T> {
    let tv = target.values_on(grid)?;
    let prep = family.prepare(h, grid.points(), acc.abs_tol, acc.max_terms, k + 1)?;
    let v = prep.eval_block(k, 1, None)?;
    Ok(sup_over(&v.values, &tv))
}
