use super::RationalShift;
use crate::error::{Error, Result};
use crate::numerics::KahanSum;
use crate::scalar::Real;
use num_complex::Complex;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Finitely supported integer data `(k_p, l_m, l)` of a torus character.
/// Zero entries are dropped on construction.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CharacterIndex {
    #[serde(rename = "k", default, deserialize_with = "int_keys")]
    pub k_p: BTreeMap<u64, i64>,
    #[serde(default, deserialize_with = "int_keys")]
    pub l_m: BTreeMap<u64, i64>,
    #[serde(default)]
    pub l: i64,
}

/// Accepts integer map keys written as strings, as TOML tables require.
fn int_keys<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<u64, i64>, D::Error> {
    #[derive(Deserialize, PartialEq, Eq, PartialOrd, Ord)]
    #[serde(untagged)]
    enum Key {
        Int(u64),
        Text(String),
    }
    let raw: BTreeMap<Key, i64> = BTreeMap::deserialize(d)?;
    raw.into_iter()
        .map(|(k, v)| match k {
            Key::Int(n) => Ok((n, v)),
            Key::Text(t) => t
                .trim()
                .parse()
                .map(|n| (n, v))
                .map_err(|_| serde::de::Error::custom(format!("map key `{t}` is not a nonnegative integer"))),
        })
        .collect()
}

impl CharacterIndex {
    pub fn new(k_p: BTreeMap<u64, i64>, l_m: BTreeMap<u64, i64>, l: i64) -> Self {
        let mut idx = Self { k_p, l_m, l };
        idx.normalize();
        idx
    }

    pub fn normalize(&mut self) {
        self.k_p.retain(|_, v| *v != 0);
        self.l_m.retain(|_, v| *v != 0);
    }
}

/// Lattice condition: `k_p = 0` off `P0`, every `l_m = 0`, and one integer `r`
/// with `k_p = r alpha_p` on all of `P0`. Returns the witness `r`.
pub fn k3_satisfied(idx: &CharacterIndex, shift: &RationalShift) -> (bool, Option<i64>) {
    if idx.l_m.values().any(|&v| v != 0) {
        return (false, None);
    }
    if idx.k_p.iter().any(|(&p, &v)| v != 0 && !shift.in_p0(p)) {
        return (false, None);
    }
    let mut r: Option<i64> = None;
    for (&p, &alpha) in shift.decomposition() {
        let k = idx.k_p.get(&p).copied().unwrap_or(0);
        let alpha = alpha as i64;
        if k % alpha != 0 {
            return (false, None);
        }
        let q = k / alpha;
        match r {
            None => r = Some(q),
            Some(prev) if prev != q => return (false, None),
            _ => {}
        }
    }
    (true, Some(r.unwrap_or(0)))
}

/// `X = sum_{p not in P0} k_p ln p + sum_{p in P0} (k_p + l alpha_p) ln p + sum_m l_m ln(m + alpha)`.
pub fn phase_x<T: Real>(idx: &CharacterIndex, shift: &RationalShift, alpha: T) -> T {
    let mut x = T::zero();
    for (&p, &k) in &idx.k_p {
        if !shift.in_p0(p) {
            x += T::from_i64(k).unwrap() * T::from_u64_lossy(p).ln();
        }
    }
    for (&p, &a) in shift.decomposition() {
        let v = idx.k_p.get(&p).copied().unwrap_or(0) + idx.l * a as i64;
        x += T::from_i64(v).unwrap() * T::from_u64_lossy(p).ln();
    }
    for (&m, &l) in &idx.l_m {
        x += T::from_i64(l).unwrap() * (T::from_u64_lossy(m) + alpha).ln();
    }
    x
}

/// `h X` reduced modulo `2 pi` with the integer part of the `P0` vector
/// removed exactly: `v_p = k_p + l alpha_p` is replaced by `v_p - q alpha_p`,
/// which changes `h X` by `2 pi q`. For lattice-condition indices the result is exactly 0.
pub fn reduced_phase<T: Real>(idx: &CharacterIndex, shift: &RationalShift, alpha: T) -> T {
    let dec = shift.decomposition();
    let v: Vec<(u64, i64, i64)> = dec
        .iter()
        .map(|(&p, &a)| (p, idx.k_p.get(&p).copied().unwrap_or(0) + idx.l * a as i64, a as i64))
        .collect();
    let (_, v0, a0) = v[0];
    let q = v0.div_euclid(a0);
    let mut x = T::zero();
    for &(p, vp, ap) in &v {
        let w = vp - q * ap;
        if w != 0 {
            x += T::from_i64(w).unwrap() * T::from_u64_lossy(p).ln();
        }
    }
    for (&p, &k) in &idx.k_p {
        if !shift.in_p0(p) {
            x += T::from_i64(k).unwrap() * T::from_u64_lossy(p).ln();
        }
    }
    for (&m, &l) in &idx.l_m {
        x += T::from_i64(l).unwrap() * (T::from_u64_lossy(m) + alpha).ln();
    }
    if x == T::zero() {
        return T::zero();
    }
    let theta = shift.h::<T>() * x;
    let tau = T::two_pi();
    theta - tau * (theta / tau).round()
}

/// `|1 - e^{-i theta}|`.
fn gap<T: Real>(theta: T) -> T {
    T::lit(2.0) * (theta * T::lit(0.5)).sin().abs()
}

/// `g_N = (1/(N+1)) sum_{k=0}^N exp(-i k h X)`.
///
/// Uses the closed geometric form when `|1 - e^{-ihX}| > 1e-8` and a
/// compensated direct sum otherwise.
pub fn fourier_g<T: Real>(n: u64, idx: &CharacterIndex, shift: &RationalShift, alpha: T) -> Complex<T> {
    let theta = reduced_phase(idx, shift, alpha);
    let count = T::from_u64_lossy(n + 1);
    if gap(theta) > T::lit(1e-8) {
        let one = Complex::new(T::one(), T::zero());
        let tau = T::two_pi();
        let big = count * theta;
        let big = big - tau * (big / tau).round();
        let num = one - Complex::from_polar(T::one(), -big);
        let den = one - Complex::from_polar(T::one(), -theta);
        num / (den * count)
    } else {
        let mut acc = KahanSum::new();
        for k in 0..=n {
            acc.add(Complex::from_polar(T::one(), -T::from_u64_lossy(k) * theta));
        }
        acc.value() / count
    }
}

/// The decay envelope `2 / ((N + 1) |1 - e^{-ihX}|)`.
pub fn fourier_bound<T: Real>(n: u64, idx: &CharacterIndex, shift: &RationalShift, alpha: T) -> T {
    let theta = reduced_phase(idx, shift, alpha);
    T::lit(2.0) / (T::from_u64_lossy(n + 1) * gap(theta))
}

/// Numeric witness that `exp(-ihX) != 1` for an index off the lattice condition.
pub fn claim2_certificate<T: Real>(idx: &CharacterIndex, shift: &RationalShift, alpha: T) -> Result<bool> {
    if k3_satisfied(idx, shift).0 {
        return Err(Error::PreconditionViolated(
            "index satisfies the lattice condition; exp(-ihX) = 1 there".into(),
        ));
    }
    Ok(gap(reduced_phase(idx, shift, alpha)) > T::lit(1e-9))
}

/// One row of a Fourier convergence table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FourierRow {
    pub n: u64,
    pub re: f64,
    pub im: f64,
    pub bound: f64,
}

pub fn fourier_rows(ns: &[u64], idx: &CharacterIndex, shift: &RationalShift, alpha: f64) -> Vec<FourierRow> {
    ns.iter()
        .map(|&n| {
            let g = fourier_g(n, idx, shift, alpha);
            FourierRow { n, re: g.re, im: g.im, bound: fourier_bound(n, idx, shift, alpha) }
        })
        .collect()
}
