//! Exact arithmetic of a rational shift `exp(2 pi / h) = a / b` and of torus
//! characters.

mod character;
mod shift;

pub use character::{
    claim2_certificate, fourier_bound, fourier_g, fourier_rows, k3_satisfied, phase_x,
    reduced_phase, CharacterIndex, FourierRow,
};
pub use shift::RationalShift;
