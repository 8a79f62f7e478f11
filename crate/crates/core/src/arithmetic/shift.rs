use crate::error::{Error, Result};
use crate::primes::factorize;
use crate::scalar::Real;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A coprime pair `a > b >= 1` with `h = 2 pi / ln(a/b)` and the exponents
/// `alpha_p` of `a / b = prod p^{alpha_p}` over the primes dividing `ab`.
///
/// The prime set dividing `ab` is called `P0`; the index set of those primes
/// is referred to as `M0` to keep it apart from the non-negative integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ShiftPair", into = "ShiftPair")]
pub struct RationalShift {
    a: u64,
    b: u64,
    decomposition: BTreeMap<u64, i32>,
}

#[derive(Serialize, Deserialize)]
struct ShiftPair {
    a: u64,
    b: u64,
}

impl TryFrom<ShiftPair> for RationalShift {
    type Error = Error;
    fn try_from(p: ShiftPair) -> Result<Self> {
        RationalShift::new(p.a, p.b)
    }
}

impl From<RationalShift> for ShiftPair {
    fn from(s: RationalShift) -> Self {
        ShiftPair { a: s.a, b: s.b }
    }
}

impl RationalShift {
    pub fn new(a: u64, b: u64) -> Result<Self> {
        if b == 0 || a <= b {
            return Err(Error::NotGreater { a, b });
        }
        if a.gcd(&b) != 1 {
            return Err(Error::NotCoprime { a, b });
        }
        let mut decomposition = BTreeMap::new();
        for (p, e) in factorize(a) {
            decomposition.insert(p, e as i32);
        }
        for (p, e) in factorize(b) {
            decomposition.insert(p, -(e as i32));
        }
        Ok(Self { a, b, decomposition })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn decomposition(&self) -> &BTreeMap<u64, i32> {
        &self.decomposition
    }

    /// `alpha_p`, zero off `P0`.
    pub fn alpha_p(&self, p: u64) -> i32 {
        self.decomposition.get(&p).copied().unwrap_or(0)
    }

    /// Primes of `a`.
    pub fn p1(&self) -> Vec<u64> {
        self.decomposition.iter().filter(|(_, &e)| e > 0).map(|(&p, _)| p).collect()
    }

    /// Primes of `b`.
    pub fn p2(&self) -> Vec<u64> {
        self.decomposition.iter().filter(|(_, &e)| e < 0).map(|(&p, _)| p).collect()
    }

    /// All primes dividing `ab`, ascending.
    pub fn p0(&self) -> Vec<u64> {
        self.decomposition.keys().copied().collect()
    }

    pub fn in_p0(&self, p: u64) -> bool {
        self.decomposition.contains_key(&p)
    }

    /// `ln(a / b)`, via `ln_1p` so ratios close to one keep full precision.
    pub fn ln_ratio<T: Real>(&self) -> T {
        let num = T::from_u64_lossy(self.a - self.b);
        let den = T::from_u64_lossy(self.b);
        (num / den).ln_1p()
    }

    pub fn h<T: Real>(&self) -> T {
        T::two_pi() / self.ln_ratio::<T>()
    }

    /// Rebuilds `(a, b)` from the exponents in integer arithmetic.
    pub fn reconstruct(&self) -> Option<(u64, u64)> {
        let mut a = 1u64;
        let mut b = 1u64;
        for (&p, &e) in &self.decomposition {
            let f = p.checked_pow(e.unsigned_abs())?;
            if e > 0 {
                a = a.checked_mul(f)?;
            } else {
                b = b.checked_mul(f)?;
            }
        }
        Some((a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_over_one() {
        let s = RationalShift::new(2, 1).unwrap();
        // 2 pi / ln 2 from a 30-digit evaluation.
        assert!((s.h::<f64>() - 9.064720283654388).abs() < 1e-12);
        assert_eq!(s.p0(), vec![2]);
        assert_eq!(s.alpha_p(2), 1);
        assert!(((std::f64::consts::TAU / s.h::<f64>()).exp() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn six_over_five() {
        let s = RationalShift::new(6, 5).unwrap();
        assert_eq!(s.p1(), vec![2, 3]);
        assert_eq!(s.p2(), vec![5]);
        assert_eq!((s.alpha_p(2), s.alpha_p(3), s.alpha_p(5)), (1, 1, -1));
        assert_eq!(s.reconstruct(), Some((6, 5)));
    }

    #[test]
    fn rejections() {
        assert_eq!(RationalShift::new(4, 2), Err(Error::NotCoprime { a: 4, b: 2 }));
        assert_eq!(RationalShift::new(2, 3), Err(Error::NotGreater { a: 2, b: 3 }));
        assert_eq!(RationalShift::new(3, 3), Err(Error::NotGreater { a: 3, b: 3 }));
        assert_eq!(RationalShift::new(3, 0), Err(Error::NotGreater { a: 3, b: 0 }));
    }

    #[test]
    fn serde_round_trip_validates() {
        let s: RationalShift = serde_json::from_str(r#"{"a":12,"b":5}"#).unwrap();
        assert_eq!(s.decomposition().get(&2), Some(&2));
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"a":12,"b":5}"#);
        assert!(serde_json::from_str::<RationalShift>(r#"{"a":12,"b":4}"#).is_err());
    }
}
