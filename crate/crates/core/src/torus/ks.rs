//! Kolmogorov-Smirnov statistics.

use crate::scalar::Real;

fn sorted<T: Real>(xs: &[T]) -> Vec<T> {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite sample"));
    v
}

/// Two-sample statistic `sup_x |F_a(x) - F_b(x)|`, exact in the presence of ties.
pub fn ks_two_sample<T: Real>(a: &[T], b: &[T]) -> T {
    if a.is_empty() || b.is_empty() {
        return T::zero();
    }
    let (a, b) = (sorted(a), sorted(b));
    let (na, nb) = (T::from_usize(a.len()).unwrap(), T::from_usize(b.len()).unwrap());
    let (mut i, mut j) = (0, 0);
    let mut d = T::zero();
    while i < a.len() && j < b.len() {
        let x = if a[i] <= b[j] { a[i] } else { b[j] };
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        let gap = (T::from_usize(i).unwrap() / na - T::from_usize(j).unwrap() / nb).abs();
        d = d.max(gap);
    }
    d
}

/// One-sample statistic against the uniform law on `[0, 1)`.
pub fn ks_uniform<T: Real>(a: &[T]) -> T {
    if a.is_empty() {
        return T::zero();
    }
    let a = sorted(a);
    let n = T::from_usize(a.len()).unwrap();
    let mut d = T::zero();
    for (i, &x) in a.iter().enumerate() {
        let lo = T::from_usize(i).unwrap() / n;
        let hi = T::from_usize(i + 1).unwrap() / n;
        d = d.max((x - lo).abs()).max((hi - x).abs());
    }
    d
}
