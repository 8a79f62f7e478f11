//! Numerical laboratory for discrete vertical shifts of zeta-functions:
//! periodic Hurwitz and polynomial Euler-product evaluators, the arithmetic
//! of rational shifts `exp(2 pi / h) = a / b`, Haar sampling and ergodic
//! orbits on the associated torus, and a deterministic shift scanner.
//!
//! Kernels are generic over [`Real`] (`f32`, `f64`); the aliases below fix
//! the double-precision instantiation used by the command-line front end.

// Negated comparisons are deliberate: they reject NaN inputs.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arithmetic;
pub mod error;
pub mod io;
pub mod numerics;
pub mod primes;
pub mod scanner;
pub mod scalar;
pub mod special;
pub mod torus;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Complex64 = num_complex::Complex<f64>;
pub type Evaluation64 = special::Evaluation<f64>;
pub type AccuracyBudget64 = special::AccuracyBudget<f64>;
pub type MatsumotoSpec64 = special::MatsumotoSpec<f64>;
pub type PeriodicSequence64 = special::PeriodicSequence<f64>;
pub type CompactGrid64 = scanner::CompactGrid<f64>;
pub type ScanConfig64 = scanner::ScanConfig<f64>;
pub type ScanResult64 = scanner::ScanResult<f64>;
pub type TargetSpec64 = scanner::TargetSpec<f64>;
pub type OmegaSample64 = torus::OmegaSample<f64>;
