//! Small numerical building blocks: deterministic summation, complex powers,
//! a complex log-gamma, and argument reduction in turns.

use crate::scalar::Real;
use num_complex::Complex;
use num_traits::Zero;
use std::ops::Add;

const PAIRWISE_BASE: usize = 16;

/// Pairwise (cascade) summation with a fixed tree, so the result depends only
/// on the slice contents and never on how the slice was produced.
pub fn pairwise_sum<V: Copy + Zero + Add<Output = V>>(xs: &[V]) -> V {
    if xs.len() <= PAIRWISE_BASE {
        return xs.iter().fold(V::zero(), |acc, &x| acc + x);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Kahan-compensated accumulator for complex values.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum<T: Real> {
    sum: Complex<T>,
    comp: Complex<T>,
}

impl<T: Real> KahanSum<T> {
    pub fn new() -> Self {
        Self { sum: Complex::zero(), comp: Complex::zero() }
    }

    pub fn add(&mut self, x: Complex<T>) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> Complex<T> {
        self.sum
    }
}

/// `x^{-s}` for real `x > 0`, computed as `exp(-s ln x)`.
#[inline]
pub fn pow_neg<T: Real>(x: T, s: Complex<T>) -> Complex<T> {
    let l = x.ln();
    Complex::from_polar((-s.re * l).exp(), -s.im * l)
}

/// `(e^z - 1) / z`, accurate near `z = 0`.
pub fn expm1_over_z<T: Real>(z: Complex<T>) -> Complex<T> {
    if z.norm() < T::lit(0.5) {
        // Taylor series sum_{n>=0} z^n / (n+1)!; 24 terms exceed f64 precision for |z| < 1/2.
        let mut term = Complex::new(T::one(), T::zero());
        let mut acc = term;
        for n in 1..24 {
            term = term * z / T::from_usize(n + 1).unwrap();
            acc += term;
        }
        acc
    } else {
        (z.exp() - Complex::new(T::one(), T::zero())) / z
    }
}

/// B_{2k} / (2k (2k-1)) for the Stirling series, k = 1..=8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];

/// Complex log-gamma for `z` off the non-positive integers. The imaginary
/// part is a continuous branch along the shift path, not necessarily the
/// principal one; callers use the real part `ln |Gamma(z)|` or exponentiate.
pub fn ln_gamma<T: Real>(z: Complex<T>) -> Complex<T> {
    let shift_to = T::lit(16.0);
    let mut z = z;
    let mut acc = Complex::zero();
    while z.norm() < shift_to || z.re < T::lit(8.0) {
        acc -= z.ln();
        z += T::one();
    }
    let half = T::lit(0.5);
    let mut r = (z - half) * z.ln() - z + half * (T::two_pi()).ln();
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut p = inv;
    for c in STIRLING {
        r += p * T::lit(c);
        p *= inv2;
    }
    r + acc
}

/// Real log-gamma for `x > 0`.
pub fn ln_gamma_real<T: Real>(x: T) -> T {
    ln_gamma(Complex::new(x, T::zero())).re
}

/// Fractional part of `k * r` in `[0, 1)`, with the product rounding error
/// recovered by a fused multiply-add so the result is accurate to about
/// `ulp(r) * k` rather than `ulp(k * r)`.
#[inline]
pub fn frac_product<T: Real>(k: T, r: T) -> T {
    let p = k * r;
    let e = k.mul_add(r, -p);
    wrap_turns((p - p.floor()) + e)
}

/// Reduces a phase in turns to `[0, 1)`.
#[inline]
pub fn wrap_turns<T: Real>(x: T) -> T {
    let y = x - x.floor();
    if y >= T::one() {
        y - T::one()
    } else {
        y
    }
}

/// Unit complex number `exp(2 pi i x)` for a phase given in turns.
#[inline]
pub fn cis_turns<T: Real>(x: T) -> Complex<T> {
    let a = T::two_pi() * x;
    Complex::new(a.cos(), a.sin())
}

/// Upper bound for the upper incomplete gamma function `Gamma(a, x)`, `x > 0`.
pub fn upper_gamma_bound<T: Real>(a: T, x: T) -> T {
    let base = (a - T::one()) * x.ln() - x;
    if a <= T::one() {
        base.exp()
    } else if x > T::lit(2.0) * (a - T::one()) {
        base.exp() / (T::one() - (a - T::one()) / x)
    } else {
        // Crude fallback: Gamma(a, x) <= Gamma(a).
        ln_gamma_real(a).exp()
    }
}
