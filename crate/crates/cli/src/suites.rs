//! Verification suites. Each check records the measured residual next to
//! its tolerance; a failing check is reported, never hidden.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use zetashift::arithmetic::{fourier_bound, fourier_g, k3_satisfied, CharacterIndex, RationalShift};
use zetashift::io::{Lemma9Doc, SpecDoc};
use zetashift::scanner::lemma9_check;
use zetashift::special::{
    hurwitz_zeta, matsumoto_product, mean_square, periodic_hurwitz_zeta, periodic_hurwitz_zeta_direct,
    smoothed_phi_n, AccuracyBudget, MatsumotoSpec, PeriodicSequence, SmoothingParam,
};
use zetashift::torus::{
    birkhoff_average, ks_uniform, orbit_vs_haar, BirkhoffSetup, HaarSampler, OmegaSample, Orbit, OrbitTarget,
    OrbitVsHaar, Truncation,
};
use zetashift::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    /// Passes when `measured <= tolerance`.
    pub fn at_most(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self { name: name.into(), passed: measured <= tolerance, measured, tolerance, detail: String::new() }
    }

    /// Passes when `measured < tolerance`.
    pub fn below(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self { name: name.into(), passed: measured < tolerance, measured, tolerance, detail: String::new() }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

fn budget(tol: f64) -> AccuracyBudget<f64> {
    AccuracyBudget { abs_tol: tol, max_terms: 50_000_000 }
}

fn label(b: &[Complex64]) -> String {
    let parts: Vec<String> = b
        .iter()
        .map(|c| if c.im == 0.0 { format!("{}", c.re) } else { format!("{}{:+}i", c.re, c.im) })
        .collect();
    format!("({})", parts.join(","))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentitiesDoc {
    pub seed: u64,
    pub points: usize,
    pub sigma_range: [f64; 2],
    pub t_max: f64,
    pub alpha: f64,
    pub coeff_sets: Vec<Vec<Complex64>>,
    pub combination_tol: f64,
    pub recurrence_tol: f64,
    pub euler_cutoff: u64,
    pub euler_points: Vec<[f64; 2]>,
    pub euler_tol: f64,
    pub residue_distance: f64,
    pub residue_directions: usize,
    pub residue_tol: f64,
}

/// Combination formula against the direct series, the Hurwitz recurrence,
/// the truncated Euler product against the series, and the residue at 1.
pub fn identities(doc: &IdentitiesDoc) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(doc.seed);
    let points: Vec<Complex64> = (0..doc.points)
        .map(|_| {
            let sigma = rng.gen_range(doc.sigma_range[0]..=doc.sigma_range[1]);
            let t = rng.gen_range(-doc.t_max..=doc.t_max);
            Complex64::new(sigma, t)
        })
        .collect();
    let acc = budget(doc.combination_tol * 1e-2);
    let mut checks = Vec::new();
    for set in &doc.coeff_sets {
        let b = PeriodicSequence::new(set.clone())?;
        let mut worst = 0.0f64;
        for &s in &points {
            let a = periodic_hurwitz_zeta(s, doc.alpha, &b, acc)?.value;
            let d = periodic_hurwitz_zeta_direct(s, doc.alpha, &b, acc)?.value;
            worst = worst.max((a - d).norm());
        }
        checks.push(Check::at_most(format!("combination{}", label(set)), worst, doc.combination_tol));
    }

    let racc = budget(doc.recurrence_tol * 1e-2);
    let mut worst = 0.0f64;
    for &s in &points {
        let z0 = hurwitz_zeta(s, doc.alpha, racc)?.value;
        let z1 = hurwitz_zeta(s, doc.alpha + 1.0, racc)?.value;
        let direct = (-s * doc.alpha.ln()).exp();
        worst = worst.max((z0 - z1 - direct).norm());
    }
    checks.push(Check::at_most("hurwitz_recurrence", worst, doc.recurrence_tol));

    let spec = MatsumotoSpec::<f64>::riemann();
    for &[sigma, t] in &doc.euler_points {
        let s = Complex64::new(sigma, t);
        let product = matsumoto_product(s, &spec, doc.euler_cutoff)?.value;
        let series = hurwitz_zeta(s, 1.0, budget(1e-13))?.value;
        checks.push(Check::at_most(
            format!("euler_product[s={sigma}{t:+}i,cutoff={}]", doc.euler_cutoff),
            (product - series).norm(),
            doc.euler_tol,
        ));
    }

    for set in &doc.coeff_sets {
        checks.push(residue_check(set, doc)?);
    }
    Ok(checks)
}

/// `(s - 1) zeta(s, alpha; B)` on a circle of radius `delta` around 1,
/// Richardson-combined from radii `delta` and `delta/2` to remove the
/// linear term, against `(sum b)/k`.
fn residue_check(set: &[Complex64], doc: &IdentitiesDoc) -> Result<Check> {
    let b = PeriodicSequence::new(set.to_vec())?;
    let want = b.sum() / b.period() as f64;
    let acc = budget(1e-13);
    let f = |z: Complex64| -> Result<Complex64> {
        Ok((z - 1.0) * periodic_hurwitz_zeta(z, doc.alpha, &b, acc)?.value)
    };
    let mut worst = 0.0f64;
    let mut raw = 0.0f64;
    for j in 0..doc.residue_directions {
        let dir = Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / doc.residue_directions as f64);
        let far = f(Complex64::new(1.0, 0.0) + dir * doc.residue_distance)?;
        let near = f(Complex64::new(1.0, 0.0) + dir * (doc.residue_distance * 0.5))?;
        raw = raw.max((far - want).norm());
        worst = worst.max((near * 2.0 - far - want).norm());
    }
    Ok(Check::at_most(format!("residue{}", label(set)), worst, doc.residue_tol)
        .with_detail(format!("unextrapolated deviation at distance {}: {raw:e}", doc.residue_distance)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub shift: RationalShift,
    pub index: CharacterIndex,
}

fn entry_label(e: &CatalogEntry) -> String {
    let k: Vec<String> = e.index.k_p.iter().map(|(p, v)| format!("{p}:{v}")).collect();
    let m: Vec<String> = e.index.l_m.iter().map(|(p, v)| format!("{p}:{v}")).collect();
    format!("a/b={}/{},k={{{}}},l_m={{{}}},l={}", e.shift.a(), e.shift.b(), k.join(" "), m.join(" "), e.index.l)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClaimsDoc {
    pub alpha: f64,
    pub k3: Vec<CatalogEntry>,
    pub k3_ns: Vec<u64>,
    pub k3_tol: f64,
    pub decay: Vec<CatalogEntry>,
    pub decay_ns: Vec<u64>,
    pub decay_slack: f64,
    pub decay_final: f64,
}

/// `g_N = 1` exactly on lattice-condition indices; geometric decay elsewhere.
pub fn claims(doc: &ClaimsDoc) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for e in &doc.k3 {
        if !k3_satisfied(&e.index, &e.shift).0 {
            return Err(Error::Config(format!("catalog entry {} does not satisfy the lattice condition", entry_label(e))));
        }
        let worst = doc
            .k3_ns
            .iter()
            .map(|&n| (fourier_g(n, &e.index, &e.shift, doc.alpha) - 1.0).norm())
            .fold(0.0, f64::max);
        checks.push(Check::at_most(format!("index_mean[{}]", entry_label(e)), worst, doc.k3_tol));
    }
    for e in &doc.decay {
        if k3_satisfied(&e.index, &e.shift).0 {
            return Err(Error::Config(format!("catalog entry {} satisfies the lattice condition", entry_label(e))));
        }
        let excess = doc
            .decay_ns
            .iter()
            .map(|&n| fourier_g(n, &e.index, &e.shift, doc.alpha).norm() - fourier_bound(n, &e.index, &e.shift, doc.alpha))
            .fold(f64::NEG_INFINITY, f64::max);
        checks.push(Check::at_most(format!("decay_envelope[{}]", entry_label(e)), excess, doc.decay_slack));
        let last = *doc.decay_ns.last().ok_or_else(|| Error::Config("decay_ns is empty".into()))?;
        let g = fourier_g(last, &e.index, &e.shift, doc.alpha).norm();
        checks.push(Check::below(format!("decay_small[{},N={last}]", entry_label(e)), g, doc.decay_final));
    }
    Ok(checks)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HaarCheckDoc {
    pub shifts: Vec<RationalShift>,
    pub samples: usize,
    pub truncation: Truncation,
    pub residual_tol: f64,
    pub ks_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitCheckDoc {
    pub shift: RationalShift,
    pub alpha: f64,
    pub truncation: Truncation,
    pub steps: u64,
    pub drift_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BirkhoffCheckDoc {
    pub shifts: Vec<RationalShift>,
    pub alpha: f64,
    pub truncation: Truncation,
    pub n: u64,
    pub samples: usize,
    pub point: [f64; 2],
    pub coeffs: Vec<Complex64>,
    #[serde(default)]
    pub spec: Option<SpecDoc>,
    pub phi_terms: u64,
    pub functionals: Vec<String>,
    pub stderr_factor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KsCheckDoc {
    pub shift: RationalShift,
    pub alpha: f64,
    pub coeffs: Vec<Complex64>,
    pub point: [f64; 2],
    pub n: u64,
    pub n_small: u64,
    pub samples: usize,
    pub truncation: Truncation,
    pub tol: f64,
    /// Optional second parameter run alongside `alpha` for comparison.
    #[serde(default)]
    pub control_alpha: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusSuiteDoc {
    pub seed: u64,
    pub haar: HaarCheckDoc,
    pub orbit: OrbitCheckDoc,
    pub birkhoff: BirkhoffCheckDoc,
    pub ks: KsCheckDoc,
}

/// Subgroup constraint and marginal uniformity of Haar samples. A prime
/// that alone makes up the constrained set is pinned by the constraint and
/// is checked for exactness instead of uniformity.
pub fn haar_checks(doc: &HaarCheckDoc, seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for shift in &doc.shifts {
        let sampler = HaarSampler::new(shift, doc.truncation)?;
        let samples: Vec<OmegaSample<f64>> = sampler.sample_many(seed, doc.samples);
        let tag = format!("{}/{}", shift.a(), shift.b());
        let residual = samples.iter().map(|w| w.constraint_residual(shift)).fold(0.0, f64::max);
        checks.push(Check::at_most(format!("haar_constraint[{tag}]"), residual, doc.residual_tol));
        let p0 = shift.p0();
        let pinned = if p0.len() == 1 { Some(p0[0]) } else { None };
        let mut worst = (0.0f64, String::new());
        let primes = samples[0].primes().to_vec();
        for (i, &p) in primes.iter().enumerate() {
            if Some(p) == pinned {
                let moved = samples.iter().map(|w| (w.omega1(p).unwrap() - 1.0).norm()).fold(0.0, f64::max);
                checks.push(Check::at_most(format!("haar_pinned[{tag},p={p}]"), moved, 0.0));
                continue;
            }
            let turns: Vec<f64> = samples.iter().map(|w| w.turns1()[i]).collect();
            let ks = ks_uniform(&turns);
            if ks > worst.0 {
                worst = (ks, format!("omega1({p})"));
            }
        }
        for m in 0..samples[0].turns2().len() {
            let turns: Vec<f64> = samples.iter().map(|w| w.turns2()[m]).collect();
            let ks = ks_uniform(&turns);
            if ks > worst.0 {
                worst = (ks, format!("omega2({m})"));
            }
        }
        checks.push(Check::below(format!("haar_ks_max[{tag}]"), worst.0, doc.ks_tol).with_detail(format!("worst coordinate {}", worst.1)));
    }
    Ok(checks)
}

/// Constraint residual along the orbit of a Haar sample.
pub fn orbit_checks(doc: &OrbitCheckDoc, seed: u64) -> Result<Vec<Check>> {
    let orbit = Orbit::<f64>::new(&doc.shift, doc.alpha, doc.truncation)?;
    let base = orbit.sampler().sample::<f64>(seed, 0);
    let mut state = orbit.start(base);
    let mut worst = state.current.constraint_residual(&doc.shift);
    for _ in 0..doc.steps {
        state = state.step(&orbit);
        worst = worst.max(state.current.constraint_residual(&doc.shift));
    }
    let tag = format!("{}/{}", doc.shift.a(), doc.shift.b());
    Ok(vec![Check::at_most(format!("orbit_constraint_drift[{tag},steps={}]", doc.steps), worst, doc.drift_tol)])
}

/// Time averages against space averages for every catalog functional.
pub fn birkhoff_checks(doc: &BirkhoffCheckDoc, seed: u64) -> Result<Vec<Check>> {
    let spec = match &doc.spec {
        Some(d) => d.to_spec()?,
        None => MatsumotoSpec::riemann(),
    };
    let mut checks = Vec::new();
    for shift in &doc.shifts {
        let setup = BirkhoffSetup {
            shift: shift.clone(),
            alpha: doc.alpha,
            truncation: doc.truncation,
            point: Complex64::new(doc.point[0], doc.point[1]),
            coeffs: PeriodicSequence::new(doc.coeffs.clone())?,
            spec: spec.clone(),
            phi_terms: doc.phi_terms,
            samples: doc.samples,
            seed,
        };
        for f in &doc.functionals {
            let r = birkhoff_average(f, &setup, doc.n)?;
            let gap = (r.time_avg - r.space_avg).norm();
            let allowed = doc.stderr_factor * r.stderr + r.geometric_bound;
            checks.push(Check::at_most(format!("birkhoff[{}/{},{f}]", shift.a(), shift.b()), gap, allowed).with_detail(format!(
                "time {:.6}{:+.6}i, space {:.6}{:+.6}i, stderr {:.3e}, exact mean {:.6}{:+.6}i, geometric {:.3e}",
                r.time_avg.re, r.time_avg.im, r.space_avg.re, r.space_avg.im, r.stderr, r.space_mean.re, r.space_mean.im, r.geometric_bound
            )));
        }
    }
    Ok(checks)
}

/// Orbit values against Haar values of `Re zeta(s + ikh, alpha; B)`.
pub fn ks_checks(doc: &KsCheckDoc, seed: u64) -> Result<Vec<Check>> {
    let coeffs = PeriodicSequence::new(doc.coeffs.clone())?;
    let ks = |alpha: f64, n: u64| -> Result<f64> {
        let cfg = OrbitVsHaar {
            target: OrbitTarget::Periodic { alpha, coeffs: coeffs.clone() },
            point: Complex64::new(doc.point[0], doc.point[1]),
            shift: doc.shift.clone(),
            n,
            samples: doc.samples,
            smooth: None,
            truncation: doc.truncation,
            seed,
            acc: budget(1e-10),
        };
        Ok(orbit_vs_haar(&cfg)?.ks)
    };
    let large = ks(doc.alpha, doc.n)?;
    let small = ks(doc.alpha, doc.n_small)?;
    let mut checks = vec![
        Check::below(format!("orbit_vs_haar_ks[alpha={},N={}]", doc.alpha, doc.n), large, doc.tol),
        Check {
            name: format!("ks_shrinks[N={}->{}]", doc.n_small, doc.n),
            passed: small > large,
            measured: large - small,
            tolerance: 0.0,
            detail: format!("KS {small:.4} at N={}, {large:.4} at N={}", doc.n_small, doc.n),
        },
    ];
    if let Some(alpha) = doc.control_alpha {
        checks.push(Check::below(format!("orbit_vs_haar_ks[alpha={alpha},N={}]", doc.n), ks(alpha, doc.n)?, doc.tol));
    }
    Ok(checks)
}

pub fn torus(doc: &TorusSuiteDoc) -> Result<Vec<Check>> {
    let mut checks = haar_checks(&doc.haar, doc.seed)?;
    checks.extend(orbit_checks(&doc.orbit, doc.seed)?);
    checks.extend(birkhoff_checks(&doc.birkhoff, doc.seed)?);
    checks.extend(ks_checks(&doc.ks, doc.seed)?);
    Ok(checks)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeanSquareCase {
    pub sigma0: f64,
    pub t_max: f64,
    pub step: f64,
    pub rel_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeanSquareDoc {
    pub tol: f64,
    pub cases: Vec<MeanSquareCase>,
}

/// `(1/T) int_0^T |zeta(sigma0 + it)|^2 dt` against `zeta(2 sigma0)`.
pub fn mean_squares(doc: &MeanSquareDoc) -> Result<Vec<Check>> {
    let acc = budget(doc.tol);
    doc.cases
        .iter()
        .map(|c| {
            let v = mean_square(|s| Ok(hurwitz_zeta(s, 1.0, acc)?.value), c.sigma0, c.t_max, c.step)?;
            let reference = hurwitz_zeta(Complex64::new(2.0 * c.sigma0, 0.0), 1.0, budget(1e-13))?.value.re;
            let rel = (v - reference).abs() / reference;
            Ok(Check::at_most(format!("mean_square[sigma0={},T={}]", c.sigma0, c.t_max), rel, c.rel_tol)
                .with_detail(format!("mean {v:.6}, zeta(2 sigma0) = {reference:.6}")))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhiCheckDoc {
    pub sigma: f64,
    pub t_values: Vec<f64>,
    pub n: u64,
    pub sigma_star1: f64,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmoothingDoc {
    pub lemma9: Lemma9Doc,
    pub phi: PhiCheckDoc,
}

/// Orbit-averaged metric between exact and smoothed pairs, and the pointwise
/// smoothing error of the Riemann instance at one abscissa.
pub fn smoothing(doc: &SmoothingDoc) -> Result<(Vec<Check>, Vec<(u64, f64)>)> {
    let cfg = doc.lemma9.to_config()?;
    let ns: Vec<Option<u64>> = doc.lemma9.n_values.iter().map(|&n| Some(n)).collect();
    let rows = lemma9_check(&cfg, &ns)?;
    let series: Vec<(u64, f64)> = rows.iter().map(|(n, r)| (n.unwrap(), *r)).collect();
    let rise = series.windows(2).map(|w| w[1].1 - w[0].1).fold(f64::NEG_INFINITY, f64::max);
    let listing: Vec<String> = series.iter().map(|(n, r)| format!("n={n}: {r:.6}")).collect();
    let mut checks = vec![Check::below("smoothing_rho_decreasing", rise, 0.0).with_detail(listing.join(", "))];

    let sm = SmoothingParam::new(doc.phi.n, doc.phi.sigma_star1)?;
    let spec = MatsumotoSpec::<f64>::riemann();
    let mut worst = 0.0f64;
    for &t in &doc.phi.t_values {
        let s = Complex64::new(doc.phi.sigma, t);
        let approx = smoothed_phi_n(s, &spec, sm, budget(1e-12))?.value;
        let exact = hurwitz_zeta(s, 1.0, budget(1e-13))?.value;
        worst = worst.max((approx - exact).norm());
    }
    checks.push(Check::at_most(format!("phi_n_error[sigma={},n={}]", doc.phi.sigma, doc.phi.n), worst, doc.phi.tol));
    Ok((checks, series))
}
