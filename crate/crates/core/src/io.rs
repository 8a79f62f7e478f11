//! Structured-text documents for specs, sequences and experiment configs.
//!
//! Documents are TOML, or JSON when the path ends in `.json`. Complex
//! numbers are `[re, im]` pairs throughout.

use crate::arithmetic::RationalShift;
use crate::error::{Error, Result};
use crate::scanner::{CompactGrid, FamilySpec, Lemma9Config, Region, ScanConfig, Shape, TargetSpec};
use crate::special::{AccuracyBudget, MatsumotoSpec, PeriodicSequence, SmoothingParam, SteudingMeta};
use crate::torus::Truncation;
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

/// Parses `text` as JSON when `json` is set, TOML otherwise.
pub fn parse_document<D: DeserializeOwned>(text: &str, json: bool) -> Result<D> {
    if json {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    } else {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }
}

/// Reads and parses a document, returning it with its raw bytes.
pub fn load_document<D: DeserializeOwned>(path: &Path) -> Result<(D, Vec<u8>)> {
    let raw = std::fs::read(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let doc = parse_bytes(path, &raw)?;
    Ok((doc, raw))
}

/// Parses the bytes of a document read from `path`; the extension picks
/// the format.
pub fn parse_bytes<D: DeserializeOwned>(path: &Path, raw: &[u8]) -> Result<D> {
    let text = std::str::from_utf8(raw).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let json = path.extension().is_some_and(|x| x == "json");
    parse_document(text, json).map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn half() -> f64 {
    0.5
}

fn one() -> f64 {
    1.0
}

fn default_mesh() -> f64 {
    0.01
}

fn default_budget() -> AccuracyBudget<f64> {
    AccuracyBudget { abs_tol: 1e-10, max_terms: 50_000_000 }
}

/// A Matsumoto product. `factors[i]` lists the roots `(f, a)` at `primes[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDoc {
    #[serde(default)]
    pub alpha0: f64,
    #[serde(default)]
    pub beta0: f64,
    #[serde(default)]
    pub degree_const: Option<f64>,
    #[serde(default)]
    pub primes: Vec<u64>,
    #[serde(default)]
    pub factors: Vec<Vec<(u32, Complex64)>>,
    /// Roots at every prime not listed in `primes`.
    #[serde(default)]
    pub default_factor: Option<Vec<(u32, Complex64)>>,
    #[serde(default)]
    pub poles: Vec<Complex64>,
    #[serde(default = "half")]
    pub sigma0: f64,
    #[serde(default)]
    pub steuding: Option<SteudingMeta<f64>>,
}

impl SpecDoc {
    pub fn to_spec(&self) -> Result<MatsumotoSpec<f64>> {
        if self.primes.len() != self.factors.len() {
            return Err(Error::Config(format!(
                "{} primes but {} factor lists",
                self.primes.len(),
                self.factors.len()
            )));
        }
        let local_factors: BTreeMap<u64, Vec<(u32, Complex64)>> =
            self.primes.iter().copied().zip(self.factors.iter().cloned()).collect();
        if local_factors.len() != self.primes.len() {
            return Err(Error::Config("a prime is listed twice".into()));
        }
        let g = local_factors.values().chain(self.default_factor.as_ref()).map(Vec::len).max().unwrap_or(0);
        let spec = MatsumotoSpec {
            alpha0: self.alpha0,
            beta0: self.beta0,
            degree_const: self.degree_const.unwrap_or(g.max(1) as f64),
            local_factors,
            default_factor: self.default_factor.clone(),
            declared_poles: self.poles.clone(),
            sigma0: self.sigma0,
            steuding: self.steuding,
        };
        spec.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(spec)
    }

    pub fn from_spec(spec: &MatsumotoSpec<f64>) -> Self {
        Self {
            alpha0: spec.alpha0,
            beta0: spec.beta0,
            degree_const: Some(spec.degree_const),
            primes: spec.local_factors.keys().copied().collect(),
            factors: spec.local_factors.values().cloned().collect(),
            default_factor: spec.default_factor.clone(),
            poles: spec.declared_poles.clone(),
            sigma0: spec.sigma0,
            steuding: spec.steuding,
        }
    }
}

/// Coefficients of a periodic sequence with its Hurwitz parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceDoc {
    pub alpha: f64,
    pub coeffs: Vec<Complex64>,
}

impl SequenceDoc {
    pub fn to_sequence(&self) -> Result<PeriodicSequence<f64>> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::Config(format!("alpha must lie in (0, 1], got {}", self.alpha)));
        }
        PeriodicSequence::new(self.coeffs.clone()).map_err(|e| Error::Config(e.to_string()))
    }
}

/// A function that `eval` and `mean-square` can evaluate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionDoc {
    Riemann,
    Hurwitz { a: f64 },
    Periodic(SequenceDoc),
    Matsumoto(SpecDoc),
}

/// One evaluation result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub s: [f64; 2],
    pub value: [f64; 2],
    pub abs_err_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmoothingDoc {
    pub n: u64,
    #[serde(default = "one")]
    pub sigma_star1: f64,
}

impl SmoothingDoc {
    pub fn to_param(self) -> Result<SmoothingParam<f64>> {
        SmoothingParam::new(self.n, self.sigma_star1).map_err(|e| Error::Config(e.to_string()))
    }
}

/// A function family on shifted grids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilyDoc {
    Riemann {
        #[serde(default)]
        partial: bool,
    },
    Periodic {
        alpha: f64,
        coeffs: Vec<Complex64>,
    },
    Matsumoto {
        spec: SpecDoc,
        #[serde(default)]
        smoothing: Option<SmoothingDoc>,
        #[serde(default)]
        partial: bool,
    },
    SmoothedPeriodic {
        alpha: f64,
        coeffs: Vec<Complex64>,
        smoothing: SmoothingDoc,
    },
    Constant {
        value: Complex64,
    },
}

impl FamilyDoc {
    pub fn to_spec(&self) -> Result<FamilySpec<f64>> {
        Ok(match self {
            FamilyDoc::Riemann { partial } => FamilySpec::Riemann { partial: *partial },
            FamilyDoc::Periodic { alpha, coeffs } => FamilySpec::Periodic { alpha: *alpha, coeffs: coeffs.clone() },
            FamilyDoc::Matsumoto { spec, smoothing, partial } => FamilySpec::Matsumoto {
                spec: spec.to_spec()?,
                smoothing: smoothing.map(SmoothingDoc::to_param).transpose()?,
                partial: *partial,
            },
            FamilyDoc::SmoothedPeriodic { alpha, coeffs, smoothing } => FamilySpec::SmoothedPeriodic {
                alpha: *alpha,
                coeffs: coeffs.clone(),
                smoothing: smoothing.to_param()?,
            },
            FamilyDoc::Constant { value } => FamilySpec::Constant { value: *value },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDoc {
    #[serde(flatten)]
    pub shape: Shape<f64>,
    #[serde(default = "default_mesh")]
    pub mesh: f64,
}

impl GridDoc {
    pub fn to_grid(&self, strip: (f64, f64)) -> Result<CompactGrid<f64>> {
        CompactGrid::new(self.shape, self.mesh, strip)
    }
}

/// A scan experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanDoc {
    pub n: u64,
    pub shift: RationalShift,
    pub epsilon: f64,
    #[serde(default = "half")]
    pub sigma_star: f64,
    pub k1: GridDoc,
    pub k2: GridDoc,
    pub f1: TargetSpec<f64>,
    pub f2: TargetSpec<f64>,
    pub phi: FamilyDoc,
    pub zeta: FamilyDoc,
    pub eval_budget: AccuracyBudget<f64>,
    #[serde(default)]
    pub checkpoints: Option<Vec<u64>>,
}

impl ScanDoc {
    /// Validates the budget coupling before any grid or evaluator is built.
    pub fn to_config(&self) -> Result<ScanConfig<f64>> {
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(Error::Config(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        let b = self.eval_budget;
        if !(b.abs_tol > 0.0) || b.abs_tol > self.epsilon / 10.0 || b.max_terms == 0 {
            return Err(Error::Config(format!(
                "eval_budget.abs_tol = {} must lie in (0, epsilon/10]; max_terms = {} must be positive",
                b.abs_tol, b.max_terms
            )));
        }
        let cfg = ScanConfig {
            n: self.n,
            shift: self.shift.clone(),
            epsilon: self.epsilon,
            k1: self.k1.to_grid((self.sigma_star, 1.0))?,
            k2: self.k2.to_grid((0.5, 1.0))?,
            targets: (self.f1.clone(), self.f2.clone()),
            phi: self.phi.to_spec()?,
            zeta: self.zeta.to_spec()?,
            eval_budget: b,
            sigma_star: self.sigma_star,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// A smoothing-convergence study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lemma9Doc {
    /// The Euler product; omitted means the Riemann instance.
    #[serde(default)]
    pub spec: Option<SpecDoc>,
    pub alpha: f64,
    pub coeffs: Vec<Complex64>,
    pub shift: RationalShift,
    pub n_orbit: u64,
    #[serde(default = "one")]
    pub sigma_star1: f64,
    pub phi_region: Region<f64>,
    pub zeta_region: Region<f64>,
    pub levels: usize,
    pub mesh: f64,
    pub eval_budget: AccuracyBudget<f64>,
    pub n_values: Vec<u64>,
}

impl Lemma9Doc {
    pub fn to_config(&self) -> Result<Lemma9Config<f64>> {
        let spec = match &self.spec {
            Some(d) => d.to_spec()?,
            None => MatsumotoSpec::riemann(),
        };
        Ok(Lemma9Config {
            spec,
            alpha: self.alpha,
            coeffs: self.coeffs.clone(),
            shift: self.shift.clone(),
            n_orbit: self.n_orbit,
            sigma_star1: self.sigma_star1,
            phi_region: self.phi_region,
            zeta_region: self.zeta_region,
            levels: self.levels,
            mesh: self.mesh,
            eval_budget: self.eval_budget,
        })
    }
}

/// A torus experiment: Haar sampling, orbit drift, Birkhoff averages and
/// the orbit-versus-Haar comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusDoc {
    pub shift: RationalShift,
    pub alpha: f64,
    pub truncation: Truncation,
    /// Orbit length: shifts `0..=n`.
    pub n: u64,
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    /// Evaluation point `[sigma, t]`.
    pub point: [f64; 2],
    pub coeffs: Vec<Complex64>,
    #[serde(default)]
    pub spec: Option<SpecDoc>,
    #[serde(default = "default_phi_terms")]
    pub phi_terms: u64,
    #[serde(default)]
    pub functionals: Vec<String>,
    /// Optional smoothing for points with `sigma <= 1`.
    #[serde(default)]
    pub smoothing: Option<SmoothingDoc>,
    #[serde(default = "default_budget")]
    pub eval_budget: AccuracyBudget<f64>,
}

fn default_phi_terms() -> u64 {
    100
}
