//! Fractional Laplacian on the cyclic and the infinite one-dimensional chain.
//!
//! Elements are those of the characteristic matrix `f = omega_sq * L^(alpha/2)`
//! with `L` the nearest-neighbour generator; the Laplacian is `-mass * f`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::quad::{graded_breakpoints, Adaptive};
use crate::scalar::{CompensatedSum, Real};
use crate::specfun::{gamma, gen_binomial, hurwitz_zeta, sin_pi, GammaRatio, ZetaVariant};
use crate::spectral::{axis_generator_spectrum, fft_nd, spectral_power, Direction, PhaseTable};
use crate::toeplitz::{Convention, SymToeplitz};

/// Largest lattice for which spectral sums are evaluated term by term.
pub const DIRECT_SPECTRAL_LIMIT: usize = 4096;

/// Number of sites of a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainSize {
    Finite(usize),
    Infinite,
}

impl ChainSize {
    pub fn finite(self) -> Option<usize> {
        match self {
            ChainSize::Finite(n) => Some(n),
            ChainSize::Infinite => None,
        }
    }
}

/// Parameters of a one-dimensional chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainConfig<T> {
    pub size: ChainSize,
    /// Order of the fractional Laplacian.
    pub alpha: T,
    /// Frequency constant, sec^-2.
    pub omega_sq: T,
    /// Lattice constant `h`, cm.
    pub lattice_const: T,
    /// Site mass `mu`, g.
    pub mass: T,
}

impl<T: Real> ChainConfig<T> {
    /// Chain with unit frequency constant, spacing and mass.
    pub fn new(size: ChainSize, alpha: T) -> Result<Self> {
        let cfg = Self { size, alpha, omega_sq: T::one(), lattice_const: T::one(), mass: T::one() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_omega_sq(mut self, omega_sq: T) -> Result<Self> {
        self.omega_sq = omega_sq;
        self.validate()?;
        Ok(self)
    }

    pub fn with_lattice_const(mut self, h: T) -> Result<Self> {
        self.lattice_const = h;
        self.validate()?;
        Ok(self)
    }

    pub fn with_mass(mut self, mass: T) -> Result<Self> {
        self.mass = mass;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > T::zero()) || !self.alpha.is_finite() {
            return Err(Error::domain(format!("alpha must be positive, got {}", self.alpha)));
        }
        for (name, v) in [("omega_sq", self.omega_sq), ("lattice_const", self.lattice_const), ("mass", self.mass)] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        if let ChainSize::Finite(n) = self.size {
            if n < 3 {
                return Err(Error::domain(format!("a ring needs at least 3 sites, got {n}")));
            }
        }
        Ok(())
    }

    fn sites(&self) -> Result<usize> {
        self.size.finite().ok_or_else(|| Error::domain("operation requires a finite chain"))
    }

    /// `alpha / 2` when it is a non-negative integer.
    pub fn integer_half_order(&self) -> Option<i64> {
        half_order(self.alpha)
    }
}

fn half_order<T: Real>(alpha: T) -> Option<i64> {
    let half = alpha / T::lit(2.0);
    if half.is_integer() {
        half.to_i64()
    } else {
        None
    }
}

#[inline]
fn parity<T: Real>(p: i64) -> T {
    if p.rem_euclid(2) == 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// Infinite-chain element `f_|p|` in closed Gamma form.
pub fn infinite_element<T: Real>(cfg: &ChainConfig<T>, p: i64) -> Result<T> {
    cfg.validate()?;
    Ok(cfg.omega_sq * unit_element(cfg.alpha, p)?)
}

fn unit_element<T: Real>(alpha: T, p: i64) -> Result<T> {
    Ok(parity::<T>(p) * gen_binomial(alpha, T::int(p))?)
}

/// Infinite-chain element from the Fourier integral over the Brillouin zone.
///
/// `f_p = (omega_sq / pi) int_0^pi cos(p k) (2 sin(k/2))^alpha dk`. For
/// `p != 0` the integral is first integrated by parts `floor(alpha/2)` times
/// (twice per step) so that the oscillatory cancellation does not eat the
/// digits of the small far-field elements.
pub fn infinite_element_quadrature<T: Real>(cfg: &ChainConfig<T>, p: i64) -> Result<T> {
    cfg.validate()?;
    let p = p.unsigned_abs();
    let alpha = cfg.alpha;
    // terms c * s^beta of the integrand, s = 2 sin(k/2)
    let mut terms = vec![(T::one(), alpha)];
    let mut factor = T::one();
    if p > 0 {
        let steps = (alpha / T::lit(2.0)).floor().to_usize().unwrap_or(0);
        let pf = T::from_u64(p).unwrap();
        for _ in 0..steps {
            terms = second_derivative(&terms);
            factor = -factor / (pf * pf);
        }
    }
    let g = |k: T| {
        let s = T::lit(2.0) * (k / T::lit(2.0)).sin();
        let pk = T::from_u64(p).unwrap() * k;
        terms.iter().fold(T::zero(), |acc, &(c, b)| acc + c * s.powf(b)) * pk.cos()
    };
    let scale = terms.iter().fold(T::zero(), |acc, &(c, b)| acc + c.abs() * T::lit(2.0).powf(b));
    let width = T::PI() / T::from_u64(4 * p.max(1)).unwrap();
    let bps = graded_breakpoints(T::zero(), T::PI(), 48, width.min(T::lit(0.25)));
    let q = Adaptive::new(20, 40);
    let tol = scale * T::lit(1e-15);
    let v = q.integrate_partition(&g, &bps, tol)?;
    Ok(cfg.omega_sq * factor * v / T::PI())
}

/// Second derivative of `sum c s^b`, `s = 2 sin(k/2)`:
/// `(s^b)'' = b(b-1) s^(b-2) - (b^2/4) s^b`.
fn second_derivative<T: Real>(terms: &[(T, T)]) -> Vec<(T, T)> {
    let mut out: Vec<(T, T)> = Vec::new();
    let mut push = |c: T, b: T| {
        if c == T::zero() {
            return;
        }
        match out.iter_mut().find(|(_, bb)| *bb == b) {
            Some(slot) => slot.0 = slot.0 + c,
            None => out.push((c, b)),
        }
    };
    for &(c, b) in terms {
        push(c * b * (b - T::one()), b - T::lit(2.0));
        push(-c * b * b / T::lit(4.0), b);
    }
    out
}

/// Far-field power law `-omega_sq Gamma(alpha+1) sin(alpha pi/2) / (pi |p|^(alpha+1))`.
pub fn asymptotic_element<T: Real>(cfg: &ChainConfig<T>, p: i64) -> Result<T> {
    cfg.validate()?;
    if p == 0 {
        return Err(Error::domain("the power-law asymptote is undefined at p = 0"));
    }
    if cfg.integer_half_order().is_some() {
        return Err(Error::domain("the power-law asymptote vanishes for integer alpha/2"));
    }
    let alpha = cfg.alpha;
    let pa = T::int(p.abs());
    Ok(-cfg.omega_sq * far_field_constant(alpha)? * pa.powf(-alpha - T::one()))
}

/// `Gamma(alpha+1) sin(alpha pi/2) / pi`.
pub(crate) fn far_field_constant<T: Real>(alpha: T) -> Result<T> {
    Ok(gamma(alpha + T::one())? * sin_pi(alpha / T::lit(2.0)) / T::PI())
}

/// Finite-ring element as the sum of infinite-chain elements over all
/// images `p + sN`.
///
/// Images with `|m|` below the Gamma-ratio switch point are summed term by
/// term. Beyond it each element is `-K m^(-1-alpha) sum_k c_k m^-k` and
/// the image sums close into Hurwitz zeta values, one per expansion term.
pub fn finite_element_periodized<T: Real>(cfg: &ChainConfig<T>, p: i64) -> Result<T> {
    cfg.validate()?;
    let n = cfg.sites()?;
    let ni = n as i64;
    if p < 0 || p >= ni {
        return Err(Error::domain(format!("element index {p} outside 0..{n}")));
    }
    // f_p and f_{N-p} share one image set; summing it once keeps the row symmetric
    let p = p.min(ni - p);
    let alpha = cfg.alpha;
    if let Some(m) = cfg.integer_half_order() {
        let mut acc = CompensatedSum::new();
        let s_lo = (-m - p).div_euclid(ni) - 1;
        let s_hi = (m - p).div_euclid(ni) + 1;
        for s in s_lo..=s_hi {
            let q = p + s * ni;
            if q.abs() <= m {
                acc.add(unit_element(alpha, q)?);
            }
        }
        return Ok(cfg.omega_sq * acc.value());
    }

    let half = alpha / T::lit(2.0);
    let ratio = GammaRatio::new(-half, T::one() + half);
    let x_min = ratio.x_min().ceil().to_i64().unwrap_or(i64::MAX);
    let mut acc = CompensatedSum::new();
    // images p + sN, s >= 0
    let mut s_plus = 0i64;
    while p + s_plus * ni < x_min {
        acc.add(unit_element(alpha, p + s_plus * ni)?);
        s_plus += 1;
    }
    // images p - sN, s >= 1
    let mut s_minus = 1i64;
    while s_minus * ni - p < x_min {
        acc.add(unit_element(alpha, p - s_minus * ni)?);
        s_minus += 1;
    }
    let beta = alpha + T::one();
    let nf = T::idx(n);
    let shift = T::int(p) / nf;
    let k_const = far_field_constant(alpha)?;
    let mut tail = CompensatedSum::new();
    for (k, &c) in ratio.coeffs().iter().enumerate() {
        if c == T::zero() {
            continue;
        }
        let order = beta + T::idx(k);
        let z = hurwitz_zeta(ZetaVariant::Standard, order, T::int(s_plus) + shift)?
            + hurwitz_zeta(ZetaVariant::Standard, order, T::int(s_minus) - shift)?;
        tail.add(c * nf.powf(-order) * z);
    }
    acc.add(-k_const * tail.value());
    Ok(cfg.omega_sq * acc.value())
}

/// Finite-ring element from the Bloch spectral sum
/// `(omega_sq/N) sum_l cos(k_l p) (4 sin^2(k_l/2))^(alpha/2)`.
pub fn finite_element_spectral<T: Real>(cfg: &ChainConfig<T>, p: i64) -> Result<T> {
    cfg.validate()?;
    let n = cfg.sites()?;
    if n > DIRECT_SPECTRAL_LIMIT {
        let row = spectral_row(cfg)?;
        return Ok(row[p.rem_euclid(n as i64) as usize]);
    }
    let phase = PhaseTable::<T>::new(n);
    let lambda = axis_generator_spectrum::<T>(n);
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for (l, &lam) in lambda.iter().enumerate() {
        let w = spectral_power(lam, cfg.alpha);
        let lp = l as i64 * p;
        re.add(phase.cos_at(lp) * w);
        im.add(phase.sin_at(lp) * w);
    }
    let nf = T::idx(n);
    let scale = re.value().abs().max(T::one());
    debug_assert!(
        im.value().abs() / nf <= T::lit(1e-12) * scale,
        "imaginary residual {} of the spectral sum",
        im.value()
    );
    Ok(cfg.omega_sq * re.value() / nf)
}

/// Whole first row by the spectral route; FFT above the direct limit.
pub fn spectral_row<T: Real>(cfg: &ChainConfig<T>) -> Result<Vec<T>> {
    cfg.validate()?;
    let n = cfg.sites()?;
    if n <= DIRECT_SPECTRAL_LIMIT {
        return (0..n as i64).map(|p| finite_element_spectral(cfg, p)).collect();
    }
    let lambda = axis_generator_spectrum::<T>(n);
    let mut buf: Vec<Complex<T>> =
        lambda.iter().map(|&l| Complex::new(spectral_power(l, cfg.alpha), T::zero())).collect();
    fft_nd(&mut buf, &[n], Direction::Inverse);
    let nf = T::idx(n);
    Ok(buf.into_iter().map(|c| cfg.omega_sq * c.re / nf).collect())
}

/// First row by periodization.
pub fn periodized_row<T: Real>(cfg: &ChainConfig<T>) -> Result<Vec<T>> {
    let n = cfg.sites()?;
    (0..n as i64).map(|p| finite_element_periodized(cfg, p)).collect()
}

/// Dispersion `omega^2(k) = omega_sq (4 sin^2(k/2))^(alpha/2)`.
pub fn dispersion<T: Real>(cfg: &ChainConfig<T>, kappa: T) -> T {
    let s = (T::lit(2.0) * (kappa / T::lit(2.0)).sin()).abs();
    if s == T::zero() {
        T::zero()
    } else {
        cfg.omega_sq * s.powf(cfg.alpha)
    }
}

/// Truncated Laurent series `f_0 + 2 sum_{p=1..P} f_p cos(p k)` with unit frequency constant.
pub fn laurent_partial_sum<T: Real>(alpha: T, kappa: T, terms: usize) -> Result<T> {
    let mut acc = CompensatedSum::new();
    acc.add(unit_element(alpha, 0)?);
    for p in 1..=terms {
        let f = unit_element(alpha, p as i64)?;
        acc.add(T::lit(2.0) * f * (T::idx(p) * kappa).cos());
    }
    Ok(acc.value())
}

/// Assembles the ring matrix from periodized elements.
pub fn assemble_matrix<T: Real>(cfg: &ChainConfig<T>, convention: Convention) -> Result<SymToeplitz<T>> {
    let row = periodized_row(cfg)?;
    finish_assembly(cfg, row, convention)
}

/// Assembles the ring matrix from the spectral route.
pub fn assemble_matrix_spectral<T: Real>(cfg: &ChainConfig<T>, convention: Convention) -> Result<SymToeplitz<T>> {
    let row = spectral_row(cfg)?;
    finish_assembly(cfg, row, convention)
}

fn finish_assembly<T: Real>(cfg: &ChainConfig<T>, row: Vec<T>, convention: Convention) -> Result<SymToeplitz<T>> {
    let n = row.len();
    let scale = convention.scale(cfg.mass);
    let row = row.into_iter().map(|f| scale * f).collect();
    SymToeplitz::new(vec![n], row, convention.definiteness())
}

/// Elastic potential `(mu/2) sum_pq conj(u_q) f_|p-q| u_p` of a ring field.
pub fn elastic_potential<T: Real>(cfg: &ChainConfig<T>, u: &[Complex<T>]) -> Result<T> {
    let n = cfg.sites()?;
    if u.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: u.len() });
    }
    let half_mass = cfg.mass / T::lit(2.0);
    if n > DIRECT_SPECTRAL_LIMIT {
        let mut buf = u.to_vec();
        fft_nd(&mut buf, &[n], Direction::Forward);
        let lambda = axis_generator_spectrum::<T>(n);
        let acc: CompensatedSum<T> =
            buf.iter().zip(&lambda).map(|(c, &l)| c.norm_sqr() * spectral_power(l, cfg.alpha)).collect();
        return Ok(half_mass * cfg.omega_sq * acc.value() / T::idx(n));
    }
    let row = periodized_row(cfg)?;
    let mut acc = CompensatedSum::new();
    for (p, up) in u.iter().enumerate() {
        for (q, uq) in u.iter().enumerate() {
            let f = row[(p + n - q) % n];
            acc.add(f * (uq.conj() * up).re);
        }
    }
    Ok(half_mass * acc.value())
}
