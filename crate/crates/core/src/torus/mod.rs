//! The constrained torus attached to a rational shift: Haar sampling,
//! randomized zeta values, the ergodic orbit and its Birkhoff averages.
//!
//! Phases are stored in turns (`omega = exp(2 pi i theta)`). The infinite
//! tori are truncated to primes `<= prime_cutoff` and `m <= m_cutoff`.

mod birkhoff;
mod ks;
mod omega;
mod randomized;

pub use birkhoff::{
    birkhoff_average, orbit_vs_haar, BirkhoffResult, BirkhoffSetup, Functional, KsReport,
    OrbitTarget, OrbitVsHaar,
};
pub use ks::{ks_two_sample, ks_uniform};
pub use omega::{sample_haar, HaarSampler, Orbit, OmegaSample, OrbitState, Truncation};
pub use randomized::{
    randomized_periodic_smoothed, randomized_periodic_truncated, randomized_periodic_zeta,
    randomized_phi, randomized_phi_smoothed, twisted_sum,
};
