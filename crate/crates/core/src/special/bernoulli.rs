//! Tabulated `B_{2j} / (2j)!` for the Euler-Maclaurin correction terms.

pub const B2J_OVER_FACT: [f64; 22] = [
    8.333_333_333_333_333e-2,
    -1.388_888_888_888_889e-3,
    3.306_878_306_878_307e-5,
    -8.267_195_767_195_768e-7,
    2.087_675_698_786_81e-8,
    -5.284_190_138_687_493e-10,
    1.3382536530684679e-11,
    -3.3896802963225829e-13,
    8.586_062_056_277_845e-15,
    -2.174_868_698_558_062e-16,
    5.5090028283602295e-18,
    -1.3954464685812523e-19,
    3.534_707_039_629_467e-21,
    -8.953_517_427_037_547e-23,
    2.267_952_452_337_683e-24,
    -5.744_790_668_872_202e-26,
    1.455_172_475_614_865e-27,
    -3.6859949406653102e-29,
    9.336_734_257_095_045e-31,
    -2.365_022_415_700_63e-32,
    5.990_671_762_482_134e-34,
    -1.5174548844682903e-35,
];

#[cfg(test)]
mod tests {
    use super::*;

    /// Exact rationals B_2 = 1/6, B_4 = -1/30, ..., B_12 = -691/2730 divided by (2j)!.
    #[test]
    fn leading_entries_match_exact_rationals() {
        let exact = [
            (1.0 / 6.0, 2.0),
            (-1.0 / 30.0, 24.0),
            (1.0 / 42.0, 720.0),
            (-1.0 / 30.0, 40320.0),
            (5.0 / 66.0, 3628800.0),
            (-691.0 / 2730.0, 479001600.0),
        ];
        for (j, (b, f)) in exact.iter().enumerate() {
            let rel = (B2J_OVER_FACT[j] - b / f).abs() / (b / f).abs();
            assert!(rel < 1e-15, "j = {j}: rel {rel}");
        }
    }

    /// Asymptotically B_{2j}/(2j)! ~ (-1)^{j+1} 2 / (2 pi)^{2j}.
    #[test]
    fn tail_ratio_approaches_inverse_four_pi_squared() {
        let r = B2J_OVER_FACT[21] / B2J_OVER_FACT[20];
        let want = -1.0 / (4.0 * std::f64::consts::PI * std::f64::consts::PI);
        assert!((r - want).abs() < 1e-12);
    }
}
