//! Approximation targets and their admissibility.

use super::grid::CompactGrid;
use crate::error::{Error, Result};
use crate::scalar::Real;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

/// A target function on a compact grid.
///
/// Polynomial coefficients are listed in ascending degree. A tabulated
/// target carries one value per grid point, in grid order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TargetSpec<T> {
    ExpPoly { coeffs: Vec<Complex<T>> },
    Poly { coeffs: Vec<Complex<T>> },
    Tabulated { values: Vec<Complex<T>> },
}

/// Which compact set a target is meant for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    K1,
    K2,
}

fn horner<T: Real>(coeffs: &[Complex<T>], s: Complex<T>) -> Complex<T> {
    coeffs.iter().rev().fold(Complex::new(T::zero(), T::zero()), |acc, &c| acc * s + c)
}

impl<T: Real> TargetSpec<T> {
    pub fn constant(c: Complex<T>) -> Self {
        TargetSpec::Poly { coeffs: vec![c] }
    }

    /// Values at every grid point.
    pub fn values_on(&self, grid: &CompactGrid<T>) -> Result<Vec<Complex<T>>> {
        match self {
            TargetSpec::ExpPoly { coeffs } => Ok(grid.points().iter().map(|&s| horner(coeffs, s).exp()).collect()),
            TargetSpec::Poly { coeffs } => Ok(grid.points().iter().map(|&s| horner(coeffs, s)).collect()),
            TargetSpec::Tabulated { values } => {
                if values.len() != grid.len() {
                    return Err(Error::ShapeMismatch(format!(
                        "tabulated target has {} values, grid has {} points",
                        values.len(),
                        grid.len()
                    )));
                }
                Ok(values.clone())
            }
        }
    }
}

/// Durand-Kerner iteration for the roots of a polynomial in ascending
/// coefficient order. Leading zero coefficients are dropped.
pub fn poly_roots<T: Real>(coeffs: &[Complex<T>]) -> Vec<Complex<T>> {
    let mut c: Vec<Complex<T>> = coeffs.to_vec();
    while c.last().is_some_and(|z| z.norm() == T::zero()) {
        c.pop();
    }
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let lead = c[deg];
    let monic: Vec<Complex<T>> = c.iter().map(|&z| z / lead).collect();
    let bound = T::one() + monic[..deg].iter().map(|z| z.norm()).fold(T::zero(), T::max);
    let seed = Complex::new(T::lit(0.4), T::lit(0.9));
    let mut roots: Vec<Complex<T>> = (0..deg).map(|i| seed.powu(i as u32) * bound).collect();
    for _ in 0..500 {
        let mut moved = T::zero();
        for i in 0..deg {
            let zi = roots[i];
            let mut denom = Complex::new(T::one(), T::zero());
            for (j, &zj) in roots.iter().enumerate() {
                if j != i {
                    denom *= zi - zj;
                }
            }
            let step = horner(&monic, zi) / denom;
            if step.re.is_finite() && step.im.is_finite() {
                roots[i] = zi - step;
                moved = moved.max(step.norm());
            }
        }
        if moved <= T::epsilon() * bound * T::lit(4.0) {
            break;
        }
    }
    roots
}

/// Whether a target qualifies for the given role on the given grid.
///
/// For `K1`, targets must not vanish on the grid's shape: exponentials always
/// qualify, polynomials are rejected when a root lies in the closed shape or
/// the grid minimum of the modulus is zero, tabulated targets need a positive
/// minimum. Every target qualifies for `K2`.
pub fn target_admissible<T: Real>(target: &TargetSpec<T>, grid: &CompactGrid<T>, role: Role) -> bool {
    if role == Role::K2 {
        return true;
    }
    match target {
        TargetSpec::ExpPoly { coeffs } => coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite()),
        TargetSpec::Poly { coeffs } => {
            if coeffs.iter().all(|c| c.norm() == T::zero()) {
                return false;
            }
            if poly_roots(coeffs).into_iter().any(|r| grid.contains(r)) {
                return false;
            }
            grid.points().iter().all(|&s| horner(coeffs, s).norm() > T::zero())
        }
        TargetSpec::Tabulated { values } => {
            values.len() == grid.len() && values.iter().all(|v| v.norm() > T::zero())
        }
    }
}
