//! Fractional Laplacian on n-dimensional cubic lattices.
//!
//! The generator is `L_n = 2n - A_n` with `A_n` the nearest-neighbour
//! adjacency; its Bloch eigenvalues are `lambda(k) = 4 sum_j sin^2(k_j/2)`.

mod bessel_route;

use std::cell::RefCell;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::quad::{graded_breakpoints, Adaptive};
use crate::scalar::{CompensatedSum, Real};
use crate::specfun::gamma;
use crate::spectral::{fft_nd, generator_spectrum, spectral_power, strides, unflatten, Direction, PhaseTable};
use crate::toeplitz::{Convention, SymToeplitz};

pub use bessel_route::{bessel_integral_element, bessel_integral_element_with, BesselElement, BesselOptions};

/// Default upper bound on the number of sites of a finite lattice.
pub const DEFAULT_SITE_CAP: usize = 1 << 24;

/// Largest lattice whose spectral sums are evaluated term by term.
pub const DIRECT_SPECTRAL_LIMIT: usize = 4096;

/// Highest dimension served by the Brillouin-zone quadrature.
pub const MAX_QUADRATURE_DIM: usize = 3;

/// Per-axis sizes of a periodic lattice, or the dimension of an infinite one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LatticeExtent {
    Finite(Vec<usize>),
    Infinite(usize),
}

impl LatticeExtent {
    pub fn dim(&self) -> usize {
        match self {
            LatticeExtent::Finite(d) => d.len(),
            LatticeExtent::Infinite(n) => *n,
        }
    }

    /// Per-axis sizes, or `None` for the infinite lattice.
    pub fn dims(&self) -> Option<&[usize]> {
        match self {
            LatticeExtent::Finite(d) => Some(d),
            LatticeExtent::Infinite(_) => None,
        }
    }
}

/// Parameters of an n-dimensional cubic lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeConfig<T> {
    pub extent: LatticeExtent,
    pub alpha: T,
    /// Frequency constant, sec^-2.
    pub omega_sq: T,
    pub mass: T,
    /// Largest finite lattice accepted by the spectral routines.
    pub site_cap: usize,
}

impl<T: Real> LatticeConfig<T> {
    pub fn new(extent: LatticeExtent, alpha: T) -> Result<Self> {
        let cfg = Self { extent, alpha, omega_sq: T::one(), mass: T::one(), site_cap: DEFAULT_SITE_CAP };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn finite(dims: &[usize], alpha: T) -> Result<Self> {
        Self::new(LatticeExtent::Finite(dims.to_vec()), alpha)
    }

    pub fn infinite(n: usize, alpha: T) -> Result<Self> {
        Self::new(LatticeExtent::Infinite(n), alpha)
    }

    pub fn with_omega_sq(mut self, omega_sq: T) -> Result<Self> {
        self.omega_sq = omega_sq;
        self.validate()?;
        Ok(self)
    }

    pub fn with_mass(mut self, mass: T) -> Result<Self> {
        self.mass = mass;
        self.validate()?;
        Ok(self)
    }

    pub fn with_site_cap(mut self, cap: usize) -> Self {
        self.site_cap = cap;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > T::zero()) || !self.alpha.is_finite() {
            return Err(Error::domain(format!("alpha must be positive, got {}", self.alpha)));
        }
        for (name, v) in [("omega_sq", self.omega_sq), ("mass", self.mass)] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        match &self.extent {
            LatticeExtent::Infinite(0) => Err(Error::domain("lattice dimension must be at least 1")),
            LatticeExtent::Finite(d) if d.is_empty() => Err(Error::domain("lattice dimension must be at least 1")),
            LatticeExtent::Finite(d) if d.iter().any(|&n| n < 3) => {
                Err(Error::domain(format!("every axis needs at least 3 sites, got {d:?}")))
            }
            _ => Ok(()),
        }
    }

    pub fn dim(&self) -> usize {
        self.extent.dim()
    }

    /// Site count of a finite lattice, checked against the cap.
    pub fn sites(&self) -> Result<usize> {
        let dims = self.extent.dims().ok_or_else(|| Error::domain("operation requires a finite lattice"))?;
        let total = dims.iter().try_fold(1usize, |acc, &n| acc.checked_mul(n)).unwrap_or(usize::MAX);
        if total > self.site_cap {
            return Err(Error::ResourceLimit { sites: total, cap: self.site_cap });
        }
        Ok(total)
    }
}

/// Lattice site offset `(p_1, ..., p_n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<i64>);

impl MultiIndex {
    pub fn new(components: Vec<i64>) -> Self {
        Self(components)
    }

    pub fn components(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `sum_j |p_j|`
    pub fn l1(&self) -> u64 {
        self.0.iter().map(|p| p.unsigned_abs()).sum()
    }

    pub fn norm<T: Real>(&self) -> T {
        self.0.iter().fold(T::zero(), |acc, &p| acc + T::int(p) * T::int(p)).sqrt()
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.0.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: self.0.len() });
        }
        Ok(())
    }
}

impl From<Vec<i64>> for MultiIndex {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl<const N: usize> From<[i64; N]> for MultiIndex {
    fn from(v: [i64; N]) -> Self {
        Self(v.to_vec())
    }
}

/// Generator eigenvalue `2n - 2 sum_j cos k_j = 4 sum_j sin^2(k_j/2)`.
pub fn generator_eigenvalue<T: Real>(cfg: &LatticeConfig<T>, kappa: &[T]) -> Result<T> {
    if kappa.len() != cfg.dim() {
        return Err(Error::DimensionMismatch { expected: cfg.dim(), got: kappa.len() });
    }
    Ok(eigenvalue(kappa))
}

fn eigenvalue<T: Real>(kappa: &[T]) -> T {
    kappa.iter().fold(T::zero(), |acc, &k| {
        let s = (k / T::lit(2.0)).sin();
        acc + T::lit(4.0) * s * s
    })
}

/// Circular frequency `omega = sqrt(omega_sq) lambda^(alpha/4)`.
pub fn dispersion_nd<T: Real>(cfg: &LatticeConfig<T>, kappa: &[T]) -> Result<T> {
    let lambda = generator_eigenvalue(cfg, kappa)?;
    Ok(cfg.omega_sq.sqrt() * spectral_power(lambda, cfg.alpha / T::lit(2.0)))
}

/// Frequency divided by the largest local (`alpha = 2`) frequency `(4n)^(1/2)`.
pub fn dispersion_nd_normalized<T: Real>(cfg: &LatticeConfig<T>, kappa: &[T]) -> Result<T> {
    let lambda = generator_eigenvalue(cfg, kappa)?;
    let top = (T::lit(4.0) * T::idx(cfg.dim())).sqrt();
    Ok(spectral_power(lambda, cfg.alpha / T::lit(2.0)) / top)
}

/// Straight cuts through the Brillouin zone, named by their Miller plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Section {
    /// `k = (t, 0, ..., 0)`, the cut with the `(0 1 0)` plane.
    Axis,
    /// `k = (t, t, 0, ..., 0)`, the cut with the `(1 1 0)` plane.
    Diagonal,
}

impl Section {
    pub fn miller(self) -> &'static str {
        match self {
            Section::Axis => "010",
            Section::Diagonal => "110",
        }
    }

    /// Number of axes excited along the cut.
    fn active_axes(self) -> usize {
        match self {
            Section::Axis => 1,
            Section::Diagonal => 2,
        }
    }

    /// Wave vector at parameter `t` in a lattice of dimension `n`.
    pub fn point<T: Real>(self, n: usize, t: T) -> Result<Vec<T>> {
        let active = self.active_axes();
        if n < active {
            return Err(Error::domain(format!("section {} needs dimension >= {active}", self.miller())));
        }
        let mut k = vec![T::zero(); n];
        for slot in k.iter_mut().take(active) {
            *slot = t;
        }
        Ok(k)
    }

    /// Local (`alpha = 2`) frequency at the zone-boundary end of the cut.
    pub fn normalizer<T: Real>(self) -> T {
        (T::lit(4.0) * T::idx(self.active_axes())).sqrt()
    }

    /// Normalized frequency at which all sheets of different order cross.
    ///
    /// Every `lambda^(alpha/4)` equals one at `lambda = 1`, so the crossing
    /// sits at the reciprocal of the normalizer.
    pub fn crossing_frequency<T: Real>(self) -> T {
        self.normalizer::<T>().recip()
    }
}

/// One sample of a dispersion cross-section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionSample<T> {
    pub t: T,
    /// `omega_alpha / omega_2` at the end of the cut.
    pub normalized: T,
}

/// Normalized dispersion along a cut, `samples` points on `[0, pi]`.
pub fn cross_section<T: Real>(
    cfg: &LatticeConfig<T>,
    section: Section,
    samples: usize,
) -> Result<Vec<SectionSample<T>>> {
    if samples < 2 {
        return Err(Error::domain("a cross-section needs at least two samples"));
    }
    let n = cfg.dim();
    let norm = section.normalizer::<T>();
    (0..samples)
        .map(|i| {
            let t = if i + 1 == samples { T::PI() } else { T::PI() * T::idx(i) / T::idx(samples - 1) };
            let k = section.point(n, t)?;
            let lambda = eigenvalue(&k);
            Ok(SectionSample { t, normalized: spectral_power(lambda, cfg.alpha / T::lit(2.0)) / norm })
        })
        .collect()
}

/// Finite-lattice element by the Bloch sum
/// `(omega_sq/N) sum_l cos(k_l . p) lambda_l^(alpha/2)`.
pub fn finite_element_spectral_nd<T: Real>(cfg: &LatticeConfig<T>, p: &MultiIndex) -> Result<T> {
    cfg.validate()?;
    p.check(cfg.dim())?;
    let total = cfg.sites()?;
    let dims = cfg.extent.dims().expect("finite after sites()");
    if total > DIRECT_SPECTRAL_LIMIT {
        let row = spectral_block_row(cfg)?;
        let st = strides(dims);
        let flat: usize =
            p.components().iter().zip(dims).zip(&st).map(|((&c, &n), &s)| c.rem_euclid(n as i64) as usize * s).sum();
        return Ok(row[flat]);
    }
    let tables: Vec<PhaseTable<T>> = dims.iter().map(|&n| PhaseTable::new(n)).collect();
    let lambda = generator_spectrum::<T>(dims);
    let mut idx = vec![0usize; dims.len()];
    let mut re = CompensatedSum::new();
    for (flat, &lam) in lambda.iter().enumerate() {
        unflatten(flat, dims, &mut idx);
        let mut phase = Complex::new(T::one(), T::zero());
        for ((&l, &pj), tab) in idx.iter().zip(p.components()).zip(&tables) {
            let lp = l as i64 * pj;
            phase = phase * Complex::new(tab.cos_at(lp), tab.sin_at(lp));
        }
        re.add(phase.re * spectral_power(lam, cfg.alpha));
    }
    Ok(cfg.omega_sq * re.value() / T::idx(total))
}

/// Whole first block-row by the spectral route, row-major over the offset.
pub fn spectral_block_row<T: Real>(cfg: &LatticeConfig<T>) -> Result<Vec<T>> {
    cfg.validate()?;
    let total = cfg.sites()?;
    let dims = cfg.extent.dims().expect("finite after sites()").to_vec();
    if total <= DIRECT_SPECTRAL_LIMIT {
        let mut idx = vec![0usize; dims.len()];
        return (0..total)
            .map(|flat| {
                unflatten(flat, &dims, &mut idx);
                let p = MultiIndex(idx.iter().map(|&i| i as i64).collect());
                finite_element_spectral_nd(cfg, &p)
            })
            .collect();
    }
    let lambda = generator_spectrum::<T>(&dims);
    let mut buf: Vec<Complex<T>> =
        lambda.into_iter().map(|l| Complex::new(spectral_power(l, cfg.alpha), T::zero())).collect();
    fft_nd(&mut buf, &dims, Direction::Inverse);
    let scale = cfg.omega_sq / T::idx(total);
    Ok(buf.into_iter().map(|c| c.re * scale).collect())
}

/// Assembles the block-Toeplitz lattice matrix from the spectral route.
pub fn assemble_block_row<T: Real>(cfg: &LatticeConfig<T>, convention: Convention) -> Result<SymToeplitz<T>> {
    let row = spectral_block_row(cfg)?;
    let dims = cfg.extent.dims().expect("finite after spectral_block_row").to_vec();
    let scale = convention.scale(cfg.mass);
    SymToeplitz::new(dims, row.into_iter().map(|f| scale * f).collect(), convention.definiteness())
}

/// Infinite-lattice element as a Brillouin-zone integral,
/// `(omega_sq/pi^n) int_[0,pi]^n prod_j cos(k_j p_j) lambda(k)^(alpha/2) dk`,
/// by nested adaptive Gauss-Legendre quadrature. Relative target `1e-8`.
pub fn infinite_element_nd<T: Real>(cfg: &LatticeConfig<T>, p: &MultiIndex) -> Result<T> {
    cfg.validate()?;
    let n = match cfg.extent {
        LatticeExtent::Infinite(n) => n,
        LatticeExtent::Finite(_) => return Err(Error::domain("quadrature route requires an infinite lattice")),
    };
    p.check(n)?;
    if n > MAX_QUADRATURE_DIM {
        return Err(Error::domain(format!(
            "Brillouin-zone quadrature is limited to n <= {MAX_QUADRATURE_DIM}, got {n}"
        )));
    }
    let smooth = (cfg.alpha / T::lit(2.0)).is_integer();
    let top = (T::lit(4.0) * T::idx(n)).powf(cfg.alpha / T::lit(2.0));
    let nested = NestedZone {
        alpha: cfg.alpha,
        orders: p.components().iter().map(|c| T::from_u64(c.unsigned_abs()).unwrap()).collect(),
        rule: Adaptive::new(20, 40),
        levels: if smooth { 0 } else { 24 },
        abs_tol: top * T::lit(1e-12),
        failure: RefCell::new(None),
    };
    let v = nested.integrate(&[]);
    if let Some(e) = nested.failure.into_inner() {
        return Err(e);
    }
    Ok(cfg.omega_sq * v / T::PI().powi(n as i32))
}

struct NestedZone<T> {
    alpha: T,
    orders: Vec<T>,
    rule: Adaptive<T>,
    levels: usize,
    abs_tol: T,
    failure: RefCell<Option<Error>>,
}

impl<T: Real> NestedZone<T> {
    /// Integral over the axes after `prefix`, with the leading wave-vector
    /// components fixed to `prefix`.
    fn integrate(&self, prefix: &[T]) -> T {
        let axis = prefix.len();
        let n = self.orders.len();
        let width = T::PI() / (T::lit(4.0) * self.orders[axis].max(T::one()));
        let bps = graded_breakpoints(T::zero(), T::PI(), self.levels, width.min(T::lit(0.5)));
        let f = |k: T| {
            let mut pt = prefix.to_vec();
            pt.push(k);
            let w = (self.orders[axis] * k).cos();
            if axis + 1 == n {
                w * spectral_power(eigenvalue(&pt), self.alpha)
            } else {
                w * self.integrate(&pt)
            }
        };
        match self.rule.integrate_partition(&f, &bps, self.abs_tol) {
            Ok(v) => v,
            Err(e) => {
                self.failure.borrow_mut().get_or_insert(e);
                T::zero()
            }
        }
    }
}

/// Riesz normalization `C_{n,alpha} = 2^(alpha-1) alpha Gamma((alpha+n)/2) / (pi^(n/2) Gamma(1-alpha/2))`.
pub fn riesz_constant<T: Real>(n: usize, alpha: T) -> Result<T> {
    if !(alpha > T::zero() && alpha < T::lit(2.0)) {
        return Err(Error::domain(format!("Riesz constant needs 0 < alpha < 2, got {alpha}")));
    }
    if n == 0 {
        return Err(Error::domain("dimension must be at least 1"));
    }
    let nf = T::idx(n);
    let two = T::lit(2.0);
    Ok(two.powf(alpha - T::one()) * alpha * gamma((alpha + nf) / two)?
        / (T::PI().powf(nf / two) * gamma(T::one() - alpha / two)?))
}

/// Far-field law `-omega_sq C_{n,alpha} |p|^(-n-alpha)`.
pub fn asymptotic_element_nd<T: Real>(cfg: &LatticeConfig<T>, p: &MultiIndex) -> Result<T> {
    cfg.validate()?;
    p.check(cfg.dim())?;
    if p.0.iter().all(|&c| c == 0) {
        return Err(Error::domain("the power-law asymptote is undefined at p = 0"));
    }
    let n = cfg.dim();
    let c = riesz_constant(n, cfg.alpha)?;
    Ok(-cfg.omega_sq * c * p.norm::<T>().powf(-(T::idx(n) + cfg.alpha)))
}
