//! Scalar fields driven by the fractional Laplacian as a generator.
//!
//! Everything here is diagonal in the Bloch basis, so evolution is exact:
//! a forward FFT, a multiplier per mode, an inverse FFT.

use num_complex::Complex;

use crate::chain1d::ChainConfig;
use crate::error::{Error, Result};
use crate::lattice_nd::LatticeConfig;
use crate::scalar::{CompensatedSum, Real};
use crate::spectral::{apply_symbol, fft_nd, generator_spectrum, spectral_power, Direction};
use crate::toeplitz::Convention;

/// Lattice a field lives on.
#[derive(Debug, Clone, PartialEq)]
pub enum SiteConfig<T> {
    Chain(ChainConfig<T>),
    Lattice(LatticeConfig<T>),
}

impl<T: Real> SiteConfig<T> {
    /// Axis lengths of a finite lattice.
    pub fn dims(&self) -> Result<Vec<usize>> {
        match self {
            SiteConfig::Chain(c) => {
                c.validate()?;
                c.size.finite().map(|n| vec![n]).ok_or_else(|| Error::domain("field needs a finite chain"))
            }
            SiteConfig::Lattice(c) => {
                c.sites()?;
                Ok(c.extent.dims().ok_or_else(|| Error::domain("field needs a finite lattice"))?.to_vec())
            }
        }
    }

    pub fn sites(&self) -> Result<usize> {
        Ok(self.dims()?.iter().product())
    }

    pub fn alpha(&self) -> T {
        match self {
            SiteConfig::Chain(c) => c.alpha,
            SiteConfig::Lattice(c) => c.alpha,
        }
    }

    pub fn omega_sq(&self) -> T {
        match self {
            SiteConfig::Chain(c) => c.omega_sq,
            SiteConfig::Lattice(c) => c.omega_sq,
        }
    }

    pub fn mass(&self) -> T {
        match self {
            SiteConfig::Chain(c) => c.mass,
            SiteConfig::Lattice(c) => c.mass,
        }
    }

    /// `lambda_l^(alpha/2)` over all Bloch modes, row-major.
    fn powered_spectrum(&self) -> Result<Vec<T>> {
        let dims = self.dims()?;
        let alpha = self.alpha();
        Ok(generator_spectrum::<T>(&dims).into_iter().map(|l| spectral_power(l, alpha)).collect())
    }
}

impl<T> From<ChainConfig<T>> for SiteConfig<T> {
    fn from(c: ChainConfig<T>) -> Self {
        SiteConfig::Chain(c)
    }
}

impl<T> From<LatticeConfig<T>> for SiteConfig<T> {
    fn from(c: LatticeConfig<T>) -> Self {
        SiteConfig::Lattice(c)
    }
}

/// Field values over the sites of a finite lattice, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState<T> {
    pub values: Vec<Complex<T>>,
    /// Seconds.
    pub time: T,
    pub config: SiteConfig<T>,
}

impl<T: Real> FieldState<T> {
    pub fn new(config: impl Into<SiteConfig<T>>, values: Vec<Complex<T>>) -> Result<Self> {
        let config = config.into();
        let n = config.sites()?;
        if values.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: values.len() });
        }
        Ok(Self { values, time: T::zero(), config })
    }

    pub fn from_real(config: impl Into<SiteConfig<T>>, values: &[T]) -> Result<Self> {
        Self::new(config, values.iter().map(|&v| Complex::new(v, T::zero())).collect())
    }

    /// Unit mass at the origin.
    pub fn delta(config: impl Into<SiteConfig<T>>) -> Result<Self> {
        let config = config.into();
        let mut values = vec![Complex::new(T::zero(), T::zero()); config.sites()?];
        values[0] = Complex::new(T::one(), T::zero());
        Self::new(config, values)
    }

    /// Bloch mode `exp(i kappa_l . p)` with `kappa_l,j = 2 pi l_j / N_j`.
    pub fn bloch(config: impl Into<SiteConfig<T>>, mode: &[usize]) -> Result<Self> {
        let config = config.into();
        let dims = config.dims()?;
        if mode.len() != dims.len() {
            return Err(Error::DimensionMismatch { expected: dims.len(), got: mode.len() });
        }
        let total: usize = dims.iter().product();
        let mut idx = vec![0usize; dims.len()];
        let values = (0..total)
            .map(|flat| {
                crate::spectral::unflatten(flat, &dims, &mut idx);
                // phase in turns, reduced exactly before scaling by 2 pi
                let turns = idx
                    .iter()
                    .zip(mode)
                    .zip(&dims)
                    .fold(T::zero(), |acc, ((&p, &l), &n)| acc + T::idx((p * l) % n) / T::idx(n));
                let turns = turns - turns.floor();
                let (s, c) = (T::TAU() * turns).sin_cos();
                Complex::new(c, s)
            })
            .collect();
        Self::new(config, values)
    }

    /// `sum_p u_p`.
    pub fn total(&self) -> Complex<T> {
        let re: CompensatedSum<T> = self.values.iter().map(|v| v.re).collect();
        let im: CompensatedSum<T> = self.values.iter().map(|v| v.im).collect();
        Complex::new(re.value(), im.value())
    }

    pub fn max_norm(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.norm()))
    }
}

/// Fractional Laplacian (or characteristic matrix) applied to the field.
pub fn apply_laplacian<T: Real>(state: &FieldState<T>, convention: Convention) -> Result<Vec<Complex<T>>> {
    let dims = state.config.dims()?;
    let n: usize = dims.iter().product();
    if state.values.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: state.values.len() });
    }
    let scale = convention.scale(state.config.mass()) * state.config.omega_sq();
    let symbol: Vec<T> = state.config.powered_spectrum()?.into_iter().map(|s| scale * s).collect();
    Ok(apply_symbol(&state.values, &dims, &symbol))
}

/// Exact solution of `du/dt = c (Delta/mu) u` after a further time `t`.
///
/// Mode `l` decays by `exp(-c omega_sq lambda_l^(alpha/2) t)`. `t = 0`
/// returns an identical copy.
pub fn evolve_diffusion<T: Real>(state: &FieldState<T>, t: T, diffusivity: T) -> Result<FieldState<T>> {
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(Error::domain(format!("evolution time must be non-negative, got {t}")));
    }
    if !(diffusivity > T::zero()) || !diffusivity.is_finite() {
        return Err(Error::domain(format!("diffusivity must be positive, got {diffusivity}")));
    }
    let dims = state.config.dims()?;
    if t == T::zero() {
        return Ok(state.clone());
    }
    let rate = diffusivity * state.config.omega_sq() * t;
    let symbol: Vec<T> = state.config.powered_spectrum()?.into_iter().map(|s| (-rate * s).exp()).collect();
    Ok(FieldState {
        values: apply_symbol(&state.values, &dims, &symbol),
        time: state.time + t,
        config: state.config.clone(),
    })
}

/// Elastic energy `(mu/2) sum_pq conj(u_q) f_pq u_p` evaluated per Bloch mode.
pub fn elastic_energy<T: Real>(state: &FieldState<T>) -> Result<T> {
    let dims = state.config.dims()?;
    let mut buf = state.values.clone();
    fft_nd(&mut buf, &dims, Direction::Forward);
    let acc: CompensatedSum<T> =
        buf.iter().zip(state.config.powered_spectrum()?).map(|(c, s)| c.norm_sqr() * s).collect();
    let n = T::idx(buf.len());
    Ok(state.config.mass() / T::lit(2.0) * state.config.omega_sq() * acc.value() / n)
}

/// Normal mode frequencies `omega lambda_l^(alpha/4)`, ascending.
pub fn normal_mode_frequencies<T: Real>(config: &SiteConfig<T>) -> Result<Vec<T>> {
    let dims = config.dims()?;
    let omega = config.omega_sq().sqrt();
    let quarter = config.alpha() / T::lit(2.0);
    let mut w: Vec<T> =
        generator_spectrum::<T>(&dims).into_iter().map(|l| omega * spectral_power(l, quarter)).collect();
    w.sort_by(|a, b| a.partial_cmp(b).expect("finite frequencies"));
    Ok(w)
}
