use num_complex::Complex64;
use proptest::prelude::*;
use zetashift::arithmetic::RationalShift;
use zetashift::scanner::{
    best_shift, density_series, scan, scan_with, sup_distance, CompactGrid, FamilySpec, ScanConfig, Shape, TargetSpec,
};
use zetashift::special::{hurwitz_zeta, periodic_hurwitz_zeta, AccuracyBudget, PeriodicSequence};
use zetashift::Error;

const ALPHA: f64 = 0.7548776662466927;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn acc(tol: f64) -> AccuracyBudget<f64> {
    AccuracyBudget::new(tol, 50_000_000).unwrap()
}

fn disk(radius: f64, mesh: f64) -> CompactGrid<f64> {
    CompactGrid::new(Shape::Disk { center: [0.8, 0.0], radius }, mesh, (0.5, 1.0)).unwrap()
}

fn periodic() -> FamilySpec<f64> {
    FamilySpec::Periodic { alpha: ALPHA, coeffs: vec![c(1.0, 0.0), c(2.0, 0.0)] }
}

fn config(n: u64, epsilon: f64, k1: CompactGrid<f64>, k2: CompactGrid<f64>) -> ScanConfig<f64> {
    ScanConfig {
        n,
        shift: RationalShift::new(2, 1).unwrap(),
        epsilon,
        k1,
        k2,
        targets: (TargetSpec::ExpPoly { coeffs: vec![c(0.1, 0.0)] }, TargetSpec::constant(c(1.5, 0.0))),
        phi: FamilySpec::Riemann { partial: false },
        zeta: periodic(),
        eval_budget: acc(epsilon.min(1.0) * 1e-4),
        sigma_star: 0.5,
    }
}

/// Pointwise oracle: the special-function evaluators at every shifted point.
fn oracle_distance(f: impl Fn(Complex64) -> Complex64, k: u64, h: f64, target: Complex64, grid: &CompactGrid<f64>) -> f64 {
    grid.points().iter().map(|&s| (f(s + c(0.0, k as f64 * h)) - target).norm()).fold(0.0, f64::max)
}

#[test]
fn huge_epsilon_hits_every_shift() {
    let r = scan(&config(200, 1e6, disk(0.03, 0.01), disk(0.03, 0.01))).unwrap();
    assert_eq!((r.hits, r.density_num, r.density_den), (201, 201, 201));
    assert_eq!(r.density, 1.0);
    assert!(r.density_series.iter().all(|d| d.density == 1.0));
}

#[test]
fn tabulated_self_targets_hit_at_zero() {
    let shift = RationalShift::new(2, 1).unwrap();
    let (k1, k2) = (disk(0.03, 0.01), disk(0.02, 0.01));
    let tol = 1e-9;
    let table = |spec: &FamilySpec<f64>, grid: &CompactGrid<f64>| {
        let fam = spec.build(&shift).unwrap();
        let prep = fam.prepare(shift.h(), grid.points(), tol, 50_000_000, 1).unwrap();
        TargetSpec::Tabulated { values: prep.eval_block(0, 1, None).unwrap().values }
    };
    let mut cfg = config(0, 1e-6, k1.clone(), k2.clone());
    cfg.eval_budget = acc(tol);
    cfg.targets = (table(&cfg.phi, &k1), table(&cfg.zeta, &k2));
    let r = scan(&cfg).unwrap();
    assert_eq!(r.hits, 1);
    assert_eq!(r.best_k, 0);
    assert!(r.best_distance <= 2.0 * tol);
}

#[test]
fn constant_family_distance_is_exact() {
    let shift = RationalShift::new(2, 1).unwrap();
    let fam = FamilySpec::Constant { value: c(0.25, -1.0) }.build(&shift).unwrap();
    let d = sup_distance(fam.as_ref(), 17, shift.h(), &TargetSpec::constant(c(1.0, 1.0)), &disk(0.03, 0.01), acc(1e-10)).unwrap();
    assert!((d - c(0.75, 2.0).norm()).abs() < 1e-15);
}

#[test]
fn riemann_distance_matches_pointwise_oracle() {
    let shift = RationalShift::new(2, 1).unwrap();
    let grid = disk(0.03, 0.01);
    let fam = FamilySpec::Riemann { partial: false }.build(&shift).unwrap();
    let target = TargetSpec::ExpPoly { coeffs: vec![c(0.0, 0.0)] };
    for k in [0u64, 1, 250] {
        let d = sup_distance(fam.as_ref(), k, shift.h(), &target, &grid, acc(1e-10)).unwrap();
        let want = oracle_distance(|s| hurwitz_zeta(s, 1.0, acc(1e-12)).unwrap().value, k, shift.h(), c(1.0, 0.0), &grid);
        assert!((d - want).abs() < 1e-9, "k = {k}: {d} vs {want}");
    }
}

/// Single-point grids and constant targets: the scan reduces to a search
/// over `k` that is checked by brute force with the special functions.
#[test]
fn single_point_best_shift_matches_brute_force() {
    let s1 = c(0.75, 0.0);
    let s2 = c(0.8, 0.1);
    let k1 = CompactGrid::from_points(vec![s1], (0.5, 1.0)).unwrap();
    let k2 = CompactGrid::from_points(vec![s2], (0.5, 1.0)).unwrap();
    let (c1, c2) = (c(1.2, 0.3), c(0.9, -0.4));
    let mut cfg = config(1000, 0.5, k1, k2);
    cfg.targets = (TargetSpec::constant(c1), TargetSpec::constant(c2));
    cfg.eval_budget = acc(1e-8);
    let (k, d) = best_shift(&cfg).unwrap();

    let h = cfg.shift.h::<f64>();
    let b = PeriodicSequence::new(vec![c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
    let mut best = (f64::INFINITY, 0u64);
    let mut hits = 0;
    for j in 0..=1000u64 {
        let t = c(0.0, j as f64 * h);
        let d1 = (hurwitz_zeta(s1 + t, 1.0, acc(1e-12)).unwrap().value - c1).norm();
        let d2 = (periodic_hurwitz_zeta(s2 + t, ALPHA, &b, acc(1e-12)).unwrap().value - c2).norm();
        let m = d1.max(d2);
        if m < best.0 {
            best = (m, j);
        }
        hits += u64::from(d1 < 0.5 && d2 < 0.5);
    }
    assert_eq!(k, best.1);
    assert!((d - best.0).abs() < 1e-7);
    assert_eq!(scan(&cfg).unwrap().hits, hits);
}

#[test]
fn density_series_matches_separate_runs() {
    let cfg = config(1000, 0.8, disk(0.03, 0.01), disk(0.03, 0.01));
    let series = density_series(&cfg, &[10, 100, 1000]).unwrap();
    for d in &series {
        let mut one = cfg.clone();
        one.n = d.n;
        let r = scan(&one).unwrap();
        assert_eq!(r.hits, d.hits);
        assert_eq!(d.density, d.hits as f64 / (d.n + 1) as f64);
    }
}

#[test]
fn result_is_independent_of_chunking() {
    let cfg = config(700, 0.8, disk(0.03, 0.01), disk(0.03, 0.01));
    let a = scan_with(&cfg, &[100, 700], 1).unwrap();
    let b = scan_with(&cfg, &[100, 700], 3).unwrap();
    let c = scan_with(&cfg, &[100, 700], 64).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn best_distance_never_grows_with_n() {
    let mut prev = f64::INFINITY;
    for n in [10u64, 100, 600] {
        let d = best_shift(&config(n, 0.8, disk(0.03, 0.01), disk(0.03, 0.01))).unwrap().1;
        assert!(d <= prev);
        prev = d;
    }
}

#[test]
fn refining_the_grid_never_lowers_the_distance() {
    let shift = RationalShift::new(2, 1).unwrap();
    let fam = periodic().build(&shift).unwrap();
    let target = TargetSpec::constant(c(1.5, 0.0));
    let coarse = disk(0.03, 0.02);
    let fine = coarse.refined().unwrap();
    assert!(coarse.points().iter().all(|p| fine.points().contains(p)));
    for k in [0u64, 3, 77] {
        let a = sup_distance(fam.as_ref(), k, shift.h(), &target, &coarse, acc(1e-10)).unwrap();
        let b = sup_distance(fam.as_ref(), k, shift.h(), &target, &fine, acc(1e-10)).unwrap();
        assert!(b >= a - 2e-10, "k = {k}: {b} < {a}");
    }
}

/// Removing the factor at 2 multiplies zeta by `1 - 2^{-s}`. With
/// `h = 2 pi / ln 2` that factor does not depend on `k`, so each distance
/// moves by at most `max |zeta(s + ikh) 2^{-s}|` over the grid.
#[test]
fn partial_zeta_moves_distances_by_the_removed_factor() {
    let shift = RationalShift::new(2, 1).unwrap();
    let h = shift.h::<f64>();
    let grid = disk(0.03, 0.01);
    let full = FamilySpec::Riemann { partial: false }.build(&shift).unwrap();
    let part = FamilySpec::Riemann { partial: true }.build(&shift).unwrap();
    let target = TargetSpec::ExpPoly { coeffs: vec![c(0.1, 0.0)] };
    let tol = 1e-9;
    for k in (0..=1000u64).step_by(50) {
        let a = sup_distance(full.as_ref(), k, h, &target, &grid, acc(tol)).unwrap();
        let b = sup_distance(part.as_ref(), k, h, &target, &grid, acc(tol)).unwrap();
        let bound = grid
            .points()
            .iter()
            .map(|&s| {
                let z = s + c(0.0, k as f64 * h);
                (hurwitz_zeta(z, 1.0, acc(1e-12)).unwrap().value * (-z * 2f64.ln()).exp()).norm()
            })
            .fold(0.0, f64::max);
        assert!((a - b).abs() <= bound + 2.0 * tol, "k = {k}");
    }
    let mut cfg = config(1000, 0.8, grid.clone(), grid);
    cfg.phi = FamilySpec::Riemann { partial: true };
    let r = scan(&cfg).unwrap();
    assert!(r.hits <= 1001 && r.density_den == 1001);
}

#[test]
fn inadmissible_target_is_refused() {
    let mut cfg = config(10, 0.8, disk(0.03, 0.01), disk(0.03, 0.01));
    cfg.targets.0 = TargetSpec::Poly { coeffs: vec![c(-0.8, 0.0), c(1.0, 0.0)] };
    assert!(matches!(scan(&cfg), Err(Error::InadmissibleTarget(_))));
}

#[test]
fn epsilon_coupling_is_enforced() {
    let mut cfg = config(10, 0.8, disk(0.03, 0.01), disk(0.03, 0.01));
    cfg.eval_budget = acc(0.1);
    assert!(matches!(scan(&cfg), Err(Error::Config(_))));
    cfg.epsilon = 0.0;
    assert!(matches!(scan(&cfg), Err(Error::Config(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn hits_grow_with_epsilon(e1 in 0.3f64..1.2, de in 0.0f64..0.8) {
        // One budget for both runs, so only epsilon differs.
        let run = |e: f64| {
            let mut cfg = config(300, e, disk(0.03, 0.015), disk(0.03, 0.015));
            cfg.eval_budget = acc(e1 * 1e-4);
            scan(&cfg).unwrap().hits
        };
        prop_assert!(run(e1) <= run(e1 + de));
    }
}
