//! Fractional Laplacian matrices on cubic lattices.
//!
//! The fractional Laplacian of order `alpha` on a periodic or infinite cubic
//! lattice is the matrix power `-mu * omega_sq * L^(alpha/2)` of the
//! nearest-neighbour generator `L = 2n - A`. This crate builds its elements
//! through several independent routes (closed Gamma form, periodization,
//! Bloch spectral sums, Fourier quadrature, a Bessel-product integral),
//! evaluates the Riesz kernels reached in the continuum limit, and evolves
//! scalar fields under the resulting generator.
//!
//! All numerics are generic over [`Real`]; `f64` aliases for the main types
//! live at the crate root.

// `!(x > 0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chain1d;
pub mod continuum;
pub mod dynamics;
mod error;
pub mod lattice_nd;
pub mod quad;
mod scalar;
pub mod specfun;
pub mod spectral;
pub mod toeplitz;

pub use error::{Error, Result};
pub use scalar::{compensated_sum, CompensatedSum, Real};

pub use chain1d::{ChainConfig, ChainSize};
pub use continuum::{ContinuumConfig, KernelRoute, KernelSamples, Period};
pub use dynamics::{FieldState, SiteConfig};
pub use lattice_nd::{LatticeConfig, LatticeExtent, MultiIndex};
pub use specfun::ZetaVariant;
pub use toeplitz::{Convention, Definiteness, SymToeplitz};

/// Double-precision chain configuration.
pub type ChainConfig64 = ChainConfig<f64>;
/// Single-precision chain configuration.
pub type ChainConfig32 = ChainConfig<f32>;
/// Double-precision n-dimensional lattice configuration.
pub type LatticeConfig64 = LatticeConfig<f64>;
/// Single-precision n-dimensional lattice configuration.
pub type LatticeConfig32 = LatticeConfig<f32>;
/// Double-precision continuum configuration.
pub type ContinuumConfig64 = ContinuumConfig<f64>;
/// Single-precision continuum configuration.
pub type ContinuumConfig32 = ContinuumConfig<f32>;
/// Double-precision Toeplitz storage.
pub type SymToeplitz64 = SymToeplitz<f64>;
/// Single-precision Toeplitz storage.
pub type SymToeplitz32 = SymToeplitz<f32>;
/// Double-precision field state.
pub type FieldState64 = FieldState<f64>;
/// Single-precision field state.
pub type FieldState32 = FieldState<f32>;
