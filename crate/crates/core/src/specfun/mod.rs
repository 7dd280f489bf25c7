//! Special functions: log-Gamma, generalized binomials, the two Hurwitz zeta
//! variants and integer-order Bessel functions of the first kind.
//!
//! Everything here is a pure function of its arguments.

mod bessel;
mod gamma;
mod tables;
mod zeta;

pub use bessel::bessel_j;
pub(crate) use bessel::hankel_coeffs;
pub use gamma::{cos_pi, gamma, gen_binomial, ln_gamma, recip_gamma, sin_pi, GammaRatio, LogGamma};
pub use zeta::{hurwitz_zeta, ZetaVariant};
