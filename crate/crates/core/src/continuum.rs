//! Riesz kernels reached in the continuum limit of the chain.
//!
//! With `omega_sq(h) = A h^-alpha` and `mu(h) = rho0 h` the lattice
//! Laplacian tends to `rho0 A` times a convolution with the Riesz kernel
//! `K(x) = Gamma(alpha+1) sin(alpha pi/2) / (pi |x|^(alpha+1))`, or its
//! periodic image sum on a string of length `L`.

use crate::chain1d::{far_field_constant, infinite_element, ChainConfig, ChainSize};
use crate::error::{Error, Result};
use crate::scalar::{CompensatedSum, Real};
use crate::specfun::{hurwitz_zeta, ZetaVariant};

/// Length of the continuum string.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Period<T> {
    /// Periodic string of length `L`, cm.
    Finite(T),
    Infinite,
}

/// Material constants of the continuum limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuumConfig<T> {
    pub period: Period<T>,
    pub alpha: T,
    /// `A_alpha`, sec^-2 cm^alpha.
    pub a_const: T,
    /// Linear mass density `rho0`, g/cm.
    pub rho0: T,
}

impl<T: Real> ContinuumConfig<T> {
    /// Unit `A` and `rho0`.
    pub fn new(period: Period<T>, alpha: T) -> Result<Self> {
        let cfg = Self { period, alpha, a_const: T::one(), rho0: T::one() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_a_const(mut self, a: T) -> Result<Self> {
        self.a_const = a;
        self.validate()?;
        Ok(self)
    }

    pub fn with_rho0(mut self, rho0: T) -> Result<Self> {
        self.rho0 = rho0;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let mut checks = vec![("alpha", self.alpha), ("a_const", self.a_const), ("rho0", self.rho0)];
        if let Period::Finite(l) = self.period {
            checks.push(("period", l));
        }
        for (name, v) in checks {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// How kernel values were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelRoute {
    /// Truncated image sum with an integral tail.
    DirectSum,
    /// Hurwitz zeta closed form.
    HurwitzZeta,
    /// Kernel of the unbounded line.
    InfiniteSpace,
}

impl KernelRoute {
    pub fn name(self) -> &'static str {
        match self {
            KernelRoute::DirectSum => "direct",
            KernelRoute::HurwitzZeta => "zeta",
            KernelRoute::InfiniteSpace => "infinite",
        }
    }
}

impl std::str::FromStr for KernelRoute {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(KernelRoute::DirectSum),
            "zeta" => Ok(KernelRoute::HurwitzZeta),
            "infinite" => Ok(KernelRoute::InfiniteSpace),
            _ => Err(Error::domain(format!("unknown kernel route '{s}'"))),
        }
    }
}

/// Tabulated kernel values.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSamples<T> {
    pub abscissae: Vec<T>,
    pub values: Vec<T>,
    pub config: ContinuumConfig<T>,
    pub route: KernelRoute,
}

impl<T: Real> KernelSamples<T> {
    /// Evaluates the kernel on `abscissae`; `terms` is used by the direct sum only.
    pub fn tabulate(config: ContinuumConfig<T>, route: KernelRoute, abscissae: Vec<T>, terms: usize) -> Result<Self> {
        config.validate()?;
        let values = abscissae
            .iter()
            .map(|&x| match route {
                KernelRoute::InfiniteSpace => riesz_kernel_infinite(config.alpha, x),
                KernelRoute::HurwitzZeta => periodic_kernel_zeta(&config, x),
                KernelRoute::DirectSum => periodic_kernel_direct(&config, x, terms).map(|b| b.value),
            })
            .collect::<Result<Vec<T>>>()?;
        Ok(Self { abscissae, values, config, route })
    }
}

fn check_order<T: Real>(alpha: T) -> Result<()> {
    if !(alpha > T::zero()) || !alpha.is_finite() {
        return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
    }
    if (alpha / T::lit(2.0)).is_integer() {
        return Err(Error::domain("the Riesz kernel vanishes off the origin for integer alpha/2"));
    }
    Ok(())
}

/// `Gamma(alpha+1) sin(alpha pi/2) / (pi |x|^(alpha+1))`.
pub fn riesz_kernel_infinite<T: Real>(alpha: T, x: T) -> Result<T> {
    check_order(alpha)?;
    if x == T::zero() {
        return Err(Error::Singularity(0.0));
    }
    Ok(far_field_constant(alpha)? * x.abs().powf(-alpha - T::one()))
}

/// Kernel value with an upper bound on its truncation error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounded<T> {
    pub value: T,
    pub bound: T,
}

/// `xi` in `(0, L)` with `x = xi mod L`.
fn reduce<T: Real>(x: T, l: T) -> Result<T> {
    let xi = x - l * (x / l).floor();
    if xi <= T::zero() || xi >= l || (x / l).is_integer() {
        return Err(Error::Singularity(x.as_f64()));
    }
    Ok(xi)
}

fn period_of<T: Real>(cfg: &ContinuumConfig<T>) -> Option<T> {
    match cfg.period {
        Period::Finite(l) => Some(l),
        Period::Infinite => None,
    }
}

/// Periodic kernel as the image sum over `|n| <= terms`.
///
/// The omitted images `n > terms` on either side are replaced by the
/// midpoint integral of `(nL + c)^-beta` from `terms + 1/2` plus its first
/// Euler-Maclaurin correction; the bound is the size of that correction,
/// which exceeds the remaining error. An infinite period returns the
/// unbounded-line kernel with zero bound.
pub fn periodic_kernel_direct<T: Real>(cfg: &ContinuumConfig<T>, x: T, terms: usize) -> Result<Bounded<T>> {
    cfg.validate()?;
    check_order(cfg.alpha)?;
    let Some(l) = period_of(cfg) else {
        return Ok(Bounded { value: riesz_kernel_infinite(cfg.alpha, x)?, bound: T::zero() });
    };
    let xi = reduce(x, l)?;
    let beta = cfg.alpha + T::one();
    let mut acc = CompensatedSum::new();
    // small images last
    for n in (1..=terms).rev() {
        let nl = T::idx(n) * l;
        acc.add((nl - xi).powf(-beta));
        acc.add((nl + xi).powf(-beta));
    }
    acc.add(xi.powf(-beta));
    let mid = T::idx(terms) + T::lit(0.5);
    let mut bound = T::zero();
    for c in [-xi, xi] {
        let y = mid * l + c;
        acc.add(y.powf(T::one() - beta) / (l * (beta - T::one())));
        // f'(t)/24 with f(t) = (tL + c)^-beta
        let corr = -beta * l * y.powf(-beta - T::one()) / T::lit(24.0);
        acc.add(corr);
        bound = bound + corr.abs();
    }
    let k = far_field_constant(cfg.alpha)?;
    Ok(Bounded { value: k * acc.value(), bound: k.abs() * bound })
}

/// Periodic kernel in Hurwitz zeta form,
/// `K / L^beta (-xi^-beta + z(beta, xi) + z(beta, -xi))` with `xi = x/L`
/// reduced to `(0, 1)` and `z` the absolute-value Hurwitz series.
pub fn periodic_kernel_zeta<T: Real>(cfg: &ContinuumConfig<T>, x: T) -> Result<T> {
    cfg.validate()?;
    check_order(cfg.alpha)?;
    let Some(l) = period_of(cfg) else {
        return riesz_kernel_infinite(cfg.alpha, x);
    };
    let xi = reduce(x, l)? / l;
    let beta = cfg.alpha + T::one();
    let z_plus = hurwitz_zeta(ZetaVariant::AbsoluteValue, beta, xi)?;
    let z_minus = hurwitz_zeta(ZetaVariant::AbsoluteValue, beta, -xi)?;
    let bracket = z_plus + z_minus - xi.powf(-beta);
    Ok(far_field_constant(cfg.alpha)? * bracket / l.powf(beta))
}

/// Lattice constants `(A h^-alpha, rho0 h)` at spacing `h`.
pub fn scaling<T: Real>(h: T, alpha: T, cfg: &ContinuumConfig<T>) -> Result<(T, T)> {
    if !(h > T::zero()) || !h.is_finite() {
        return Err(Error::domain(format!("lattice spacing must be positive, got {h}")));
    }
    Ok((cfg.a_const * h.powf(-alpha), cfg.rho0 * h))
}

/// One spacing of a continuum-limit sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitStep<T> {
    pub h: T,
    /// Lattice site nearest to `x / h`.
    pub site: i64,
    /// True when `x / h` was not an integer.
    pub rounded: bool,
    pub omega_sq: T,
    pub mass: T,
    /// `-rho0 A h^(-alpha-1) f_site` with `f` the unit-frequency element.
    pub estimate: T,
    /// `rho0 A K(x)`.
    pub target: T,
    /// `|estimate / target - 1|`.
    pub deviation: T,
}

/// Outcome of [`continuum_limit_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct LimitReport<T> {
    pub alpha: T,
    pub x: T,
    pub steps: Vec<LimitStep<T>>,
    /// Deviations strictly decrease along the sweep.
    pub monotone: bool,
    /// Some step evaluated the lattice at a rounded site.
    pub jitter: bool,
}

impl<T: Real> LimitReport<T> {
    pub fn final_deviation(&self) -> T {
        self.steps.last().map_or(T::nan(), |s| s.deviation)
    }
}

/// Compares scaled lattice Laplacian elements with the continuum kernel at
/// `x` along a decreasing sequence of spacings.
///
/// Off-diagonal Laplacian elements `-mu omega_sq f_p` are positive for
/// `0 < alpha < 2`; divided by `h^2` (site weight times the spacing of the
/// integration variable) they tend to `rho0 A K(x)`. A non-monotone sweep is
/// reported through [`LimitReport::monotone`] rather than as an error.
pub fn continuum_limit_check<T: Real>(
    alpha: T,
    x: T,
    h_sequence: &[T],
    cfg: &ContinuumConfig<T>,
) -> Result<LimitReport<T>> {
    cfg.validate()?;
    if !(alpha > T::zero() && alpha < T::lit(2.0)) {
        return Err(Error::domain(format!("continuum limit needs 0 < alpha < 2, got {alpha}")));
    }
    if alpha != cfg.alpha {
        return Err(Error::domain("alpha disagrees with the continuum configuration"));
    }
    if x == T::zero() || !x.is_finite() {
        return Err(Error::Singularity(x.as_f64()));
    }
    if h_sequence.is_empty() {
        return Err(Error::domain("empty spacing sequence"));
    }
    if h_sequence.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::domain("spacings must strictly decrease"));
    }
    let target = cfg.rho0 * cfg.a_const * riesz_kernel_infinite(alpha, x)?;
    let unit = ChainConfig::new(ChainSize::Infinite, alpha)?;
    let mut steps = Vec::with_capacity(h_sequence.len());
    for &h in h_sequence {
        let (omega_sq, mass) = scaling(h, alpha, cfg)?;
        let ratio = x.abs() / h;
        let site = ratio.round().to_i64().ok_or_else(|| Error::domain("x / h out of range"))?;
        if site == 0 {
            return Err(Error::domain(format!("spacing {h} exceeds twice |x|")));
        }
        let f = infinite_element(&unit, site)?;
        // -mu omega_sq f / h^2
        let estimate = -mass * omega_sq * f / (h * h);
        steps.push(LimitStep {
            h,
            site,
            rounded: !ratio.is_integer(),
            omega_sq,
            mass,
            estimate,
            target,
            deviation: (estimate / target - T::one()).abs(),
        });
    }
    let monotone = steps.windows(2).all(|w| w[1].deviation < w[0].deviation);
    let jitter = steps.iter().any(|s| s.rounded);
    Ok(LimitReport { alpha, x, steps, monotone, jitter })
}
