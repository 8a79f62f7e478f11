//! Normalized mean square `(1/T) int_0^T |f(sigma0 + i t)|^2 dt`.

use crate::error::{Error, Result};
use crate::numerics::pairwise_sum;
use crate::scalar::Real;
use num_complex::Complex;
use rayon::prelude::*;

/// Composite trapezoid rule with `ceil(T / step)` panels. Samples are
/// evaluated in parallel and combined by a fixed pairwise tree, so the result
/// does not depend on the worker count. Evaluator failures surface as
/// `Domain` errors naming the offending ordinate.
pub fn mean_square<T, F>(evaluator: F, sigma0: T, t_max: T, step: T) -> Result<T>
where
    T: Real,
    F: Fn(Complex<T>) -> Result<Complex<T>> + Sync,
{
    if !(t_max > T::zero()) || !t_max.is_finite() {
        return Err(Error::InvalidInput(format!("T must be positive, got {t_max}")));
    }
    if !(step > T::zero()) || !step.is_finite() {
        return Err(Error::InvalidInput(format!("quadrature step must be positive, got {step}")));
    }
    let panels = (t_max / step).ceil().to_usize().unwrap().max(1);
    let h = t_max / T::from_usize(panels).unwrap();
    let values: Vec<T> = (0..=panels)
        .into_par_iter()
        .map(|i| {
            let t = h * T::from_usize(i).unwrap();
            let v = evaluator(Complex::new(sigma0, t))
                .map_err(|e| Error::Domain(format!("evaluator failed at t = {t}: {e}")))?;
            let w = if i == 0 || i == panels { T::lit(0.5) } else { T::one() };
            Ok(v.norm_sqr() * w)
        })
        .collect::<Result<Vec<T>>>()?;
    Ok(pairwise_sum(&values) * h / t_max)
}
