//! The product metric on tuples of holomorphic functions and the smoothing
//! convergence study.
//!
//! For a region `sigma_lo < sigma < sigma_hi`, `|t| < t_max` the exhaustion
//! uses the closed rectangles
//! `K_l: sigma_lo + w 2^{-l-1} <= sigma <= sigma_hi - w 2^{-l-1}, |t| <= t_max (1 - 2^{-l})`,
//! `l = 1, 2, ...`, with `w = sigma_hi - sigma_lo`, and the metric
//! `sum_l 2^{-l} min(1, sup_{K_l} |f - g|)` per component. Tuples are
//! compared by the maximum over components.

use super::engine::BLOCK;
use super::family::{FamilySpec, PreparedFamily};
use super::grid::{CompactGrid, Shape};
use crate::arithmetic::RationalShift;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::{AccuracyBudget, MatsumotoSpec, SmoothingParam};
use num_complex::Complex;
use rayon::prelude::*;

/// An open rectangle `sigma_lo < sigma < sigma_hi`, `|t| < t_max`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Region<T> {
    pub sigma_lo: T,
    pub sigma_hi: T,
    pub t_max: T,
}

/// The first `levels` rectangles of the exhaustion of `region`.
pub fn exhaustion<T: Real>(region: Region<T>, levels: usize, mesh: T) -> Result<Vec<CompactGrid<T>>> {
    if levels == 0 {
        return Err(Error::InvalidInput("exhaustion needs at least one level".into()));
    }
    let w = region.sigma_hi - region.sigma_lo;
    if !(w > T::zero() && region.t_max > T::zero()) {
        return Err(Error::InvalidInput("exhaustion region is empty".into()));
    }
    (1..=levels)
        .map(|l| {
            let inset = w * T::lit(0.5).powi(l as i32 + 1);
            let t = region.t_max * (T::one() - T::lit(0.5).powi(l as i32));
            let shape = Shape::Rect {
                sigma_min: region.sigma_lo + inset,
                sigma_max: region.sigma_hi - inset,
                t_min: -t,
                t_max: t,
            };
            CompactGrid::new(shape, mesh, (region.sigma_lo, region.sigma_hi))
        })
        .collect()
}

fn component_metric<T: Real>(f: &[Vec<Complex<T>>], g: &[Vec<Complex<T>>]) -> T {
    let mut w = T::one();
    let mut total = T::zero();
    for (fl, gl) in f.iter().zip(g) {
        w *= T::lit(0.5);
        let sup = fl.iter().zip(gl).map(|(a, b)| (a - b).norm()).fold(T::zero(), T::max);
        total += w * sup.min(T::one());
    }
    total
}

/// The metric between two tuples sampled as `[component][level][point]` on
/// the exhaustion grids of each component.
pub fn metric_rho<T: Real>(
    f: &[Vec<Vec<Complex<T>>>],
    g: &[Vec<Vec<Complex<T>>>],
    exhaustion: &[Vec<CompactGrid<T>>],
) -> Result<T> {
    if f.len() != exhaustion.len() || g.len() != exhaustion.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} and {} components for {} exhaustions",
            f.len(),
            g.len(),
            exhaustion.len()
        )));
    }
    let mut rho = T::zero();
    for ((fc, gc), ex) in f.iter().zip(g).zip(exhaustion) {
        if fc.len() != ex.len() || gc.len() != ex.len() {
            return Err(Error::ShapeMismatch("sample levels do not match the exhaustion".into()));
        }
        for ((fl, gl), grid) in fc.iter().zip(gc).zip(ex) {
            if fl.len() != grid.len() || gl.len() != grid.len() {
                return Err(Error::ShapeMismatch(format!(
                    "{} and {} samples on a grid of {} points",
                    fl.len(),
                    gl.len(),
                    grid.len()
                )));
            }
        }
        rho = rho.max(component_metric(fc, gc));
    }
    Ok(rho)
}

/// Orbit-averaged distance between the exact pair `(phi, zeta(., alpha; B))`
/// and its smoothed counterpart.
#[derive(Debug, Clone)]
pub struct Lemma9Config<T> {
    pub spec: MatsumotoSpec<T>,
    pub alpha: T,
    pub coeffs: Vec<Complex<T>>,
    pub shift: RationalShift,
    /// Largest shift index; the average runs over `0..=n_orbit`.
    pub n_orbit: u64,
    pub sigma_star1: T,
    pub phi_region: Region<T>,
    pub zeta_region: Region<T>,
    pub levels: usize,
    pub mesh: T,
    pub eval_budget: AccuracyBudget<T>,
}

impl<T: Real> Lemma9Config<T> {
    fn exact_phi(&self) -> FamilySpec<T> {
        if self.spec == MatsumotoSpec::riemann() {
            FamilySpec::Riemann { partial: false }
        } else {
            FamilySpec::Matsumoto { spec: self.spec.clone(), smoothing: None, partial: false }
        }
    }

    /// Exhaustion grids of both components.
    pub fn grids(&self) -> Result<Vec<Vec<CompactGrid<T>>>> {
        Ok(vec![
            exhaustion(self.phi_region, self.levels, self.mesh)?,
            exhaustion(self.zeta_region, self.levels, self.mesh)?,
        ])
    }
}

struct Tabulator<T: Real> {
    families: Vec<Box<dyn PreparedFamily<T>>>,
    sizes: Vec<Vec<usize>>,
}

impl<T: Real> Tabulator<T> {
    fn new(specs: [FamilySpec<T>; 2], cfg: &Lemma9Config<T>, grids: &[Vec<CompactGrid<T>>], k_end: u64) -> Result<Self> {
        let h = cfg.shift.h::<T>();
        let mut families = Vec::new();
        let mut sizes = Vec::new();
        for (spec, ex) in specs.iter().zip(grids) {
            let points: Vec<Complex<T>> = ex.iter().flat_map(|g| g.points().iter().copied()).collect();
            let fam = spec.build(&cfg.shift)?;
            families.push(fam.prepare(h, &points, cfg.eval_budget.abs_tol, cfg.eval_budget.max_terms, k_end)?);
            sizes.push(ex.iter().map(|g| g.len()).collect());
        }
        Ok(Self { families, sizes })
    }

    /// `[k][component][level][point]` for a block of shifts.
    fn block(&self, k0: u64, count: usize) -> Result<Vec<Vec<Vec<Vec<Complex<T>>>>>> {
        let mut out = vec![Vec::new(); count];
        for (fam, sizes) in self.families.iter().zip(&self.sizes) {
            let v = fam.eval_block(k0, count, None)?;
            let np: usize = sizes.iter().sum();
            for (kk, slot) in out.iter_mut().enumerate() {
                let mut levels = Vec::with_capacity(sizes.len());
                let mut off = kk * np;
                for &n in sizes {
                    levels.push(v.values[off..off + n].to_vec());
                    off += n;
                }
                slot.push(levels);
            }
        }
        Ok(out)
    }
}

/// For each entry of `n_values`, the average of the metric between the exact
/// and smoothed pairs over shifts `0..=n_orbit`. `None` compares the exact
/// pair with itself.
pub fn lemma9_check<T: Real>(cfg: &Lemma9Config<T>, n_values: &[Option<u64>]) -> Result<Vec<(Option<u64>, T)>> {
    let grids = cfg.grids()?;
    let total = cfg.n_orbit + 1;
    let nblocks = total.div_ceil(BLOCK as u64);
    let k_end = nblocks * BLOCK as u64;
    let exact = Tabulator::new([cfg.exact_phi(), FamilySpec::Periodic { alpha: cfg.alpha, coeffs: cfg.coeffs.clone() }], cfg, &grids, k_end)?;
    let mut out = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let approx = match n {
            None => None,
            Some(n) => {
                let smoothing = SmoothingParam::new(n, cfg.sigma_star1)?;
                let specs = [
                    FamilySpec::Matsumoto { spec: cfg.spec.clone(), smoothing: Some(smoothing), partial: false },
                    FamilySpec::SmoothedPeriodic { alpha: cfg.alpha, coeffs: cfg.coeffs.clone(), smoothing },
                ];
                Some(Tabulator::new(specs, cfg, &grids, k_end)?)
            }
        };
        let sums: Vec<T> = (0..nblocks)
            .into_par_iter()
            .map(|b| {
                let k0 = b * BLOCK as u64;
                let count = (total - k0).min(BLOCK as u64) as usize;
                let f = exact.block(k0, count)?;
                let g = match &approx {
                    Some(a) => a.block(k0, count)?,
                    None => f.clone(),
                };
                let mut s = T::zero();
                for (fk, gk) in f.iter().zip(&g) {
                    s += metric_rho(fk, gk, &grids)?;
                }
                Ok(s)
            })
            .collect::<Result<Vec<_>>>()?;
        let avg = sums.into_iter().fold(T::zero(), |a, b| a + b) / T::from_u64_lossy(total);
        out.push((n, avg));
    }
    Ok(out)
}
