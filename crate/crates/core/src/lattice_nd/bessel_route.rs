//! Infinite-lattice elements from the Bessel-product integral.
//!
//! With `nu = alpha/2` and the regularized kernel
//! `D_eps(x) = Gamma(nu+1)/pi * Re[(eps + i x)^-(nu+1)]`,
//! the matrix `L^nu exp(-eps L)` has elements
//!
//! `V_eps(p) = int_0^inf D_eps(x) G_p(x) dx`,
//! `G_p(x) = (-i)^P prod_j J_|p_j|(2x) [exp(2inx) + (-1)^P exp(-2inx)]`,
//!
//! where `P = sum_j |p_j|`. Since `D_eps` integrates to zero, `G_p(0)` is
//! subtracted to tame the `x^-(nu+1)` growth as `eps -> 0`. The integral is
//! split at `cutoff`; beyond it the Bessel factors and the kernel are
//! replaced by their large-argument expansions and every resulting
//! `x^-mu exp(i w x)` term is integrated in closed form. Two values of
//! `eps` are combined by Richardson extrapolation.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::quad::{Adaptive, GaussLegendre};
use crate::scalar::{CompensatedSum, Real};
use crate::specfun::{bessel_j, gamma, hankel_coeffs};

use super::{infinite_element_nd, LatticeConfig, LatticeExtent, MultiIndex};

const HANKEL_TERMS: usize = 8;
const KERNEL_TERMS: usize = 4;

/// Regularization and truncation parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselOptions<T> {
    pub epsilon: T,
    pub cutoff: T,
    /// Combine `eps` and `eps/2` linearly to cancel the `O(eps)` error.
    pub richardson: bool,
    /// Relative tolerance against the Brillouin-zone quadrature; `None` skips the check.
    pub cross_check: Option<T>,
}

impl<T: Real> Default for BesselOptions<T> {
    fn default() -> Self {
        Self { epsilon: T::lit(1e-3), cutoff: T::lit(1e3), richardson: true, cross_check: None }
    }
}

/// Detailed result of the Bessel route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselElement<T> {
    /// Extrapolated (or plain, without Richardson) element.
    pub value: T,
    /// `V_eps` at the requested epsilon.
    pub coarse: T,
    /// `V_{eps/2}` when Richardson extrapolation ran.
    pub fine: Option<T>,
    /// Magnitude of the discarded imaginary part.
    pub imag_residual: T,
    /// Closed-form contribution beyond the cutoff.
    pub tail: T,
}

/// Element by the Bessel route with the given `epsilon` and `cutoff`.
pub fn bessel_integral_element<T: Real>(cfg: &LatticeConfig<T>, p: &MultiIndex, epsilon: T, cutoff: T) -> Result<T> {
    let opts = BesselOptions { epsilon, cutoff, ..BesselOptions::default() };
    Ok(bessel_integral_element_with(cfg, p, &opts)?.value)
}

/// Element by the Bessel route with full diagnostics.
pub fn bessel_integral_element_with<T: Real>(
    cfg: &LatticeConfig<T>,
    p: &MultiIndex,
    opts: &BesselOptions<T>,
) -> Result<BesselElement<T>> {
    cfg.validate()?;
    let n = match cfg.extent {
        LatticeExtent::Infinite(n) => n,
        LatticeExtent::Finite(_) => return Err(Error::domain("Bessel route requires an infinite lattice")),
    };
    p.check(n)?;
    if n > super::MAX_QUADRATURE_DIM {
        return Err(Error::domain(format!("Bessel route is limited to n <= {}", super::MAX_QUADRATURE_DIM)));
    }
    if !(cfg.alpha < T::lit(4.0)) {
        return Err(Error::domain(format!("Bessel route needs alpha < 4, got {}", cfg.alpha)));
    }
    if !(opts.epsilon > T::zero()) || !(opts.cutoff > T::zero()) {
        return Err(Error::domain("epsilon and cutoff must be positive"));
    }
    let orders: Vec<u32> = p
        .components()
        .iter()
        .map(|c| u32::try_from(c.unsigned_abs()).map_err(|_| Error::domain("lattice offset too large")))
        .collect::<Result<_>>()?;

    let route = Route::new(cfg.alpha / T::lit(2.0), orders)?;
    let coarse = route.regularized(opts.epsilon, opts.cutoff)?;
    let (value, fine, imag, tail) = if opts.richardson {
        let fine = route.regularized(opts.epsilon / T::lit(2.0), opts.cutoff)?;
        let v = T::lit(2.0) * fine.value - coarse.value;
        (v, Some(fine.value * cfg.omega_sq), fine.imag.abs().max(coarse.imag.abs()), fine.tail)
    } else {
        (coarse.value, None, coarse.imag.abs(), coarse.tail)
    };
    let out = BesselElement {
        value: value * cfg.omega_sq,
        coarse: coarse.value * cfg.omega_sq,
        fine,
        imag_residual: imag * cfg.omega_sq,
        tail: tail * cfg.omega_sq,
    };
    let scale = out.value.abs().max(cfg.omega_sq * T::lit(1e-6));
    if out.imag_residual > T::lit(1e-9) * scale {
        return Err(Error::ToleranceNotMet {
            residual: out.imag_residual.as_f64(),
            bound: (T::lit(1e-9) * scale).as_f64(),
        });
    }
    if let Some(tol) = opts.cross_check {
        let reference = infinite_element_nd(cfg, p)?;
        let residual = (out.value - reference).abs();
        let bound = tol * reference.abs().max(cfg.omega_sq * T::lit(1e-12));
        if residual > bound {
            return Err(Error::ToleranceNotMet { residual: residual.as_f64(), bound: bound.as_f64() });
        }
    }
    Ok(out)
}

struct Regularized<T> {
    value: T,
    imag: T,
    tail: T,
}

/// `coef * x^-power * exp(i freq x)`
#[derive(Debug, Clone, Copy)]
struct Term<T> {
    coef: Complex<T>,
    power: T,
    freq: T,
}

struct Route<T> {
    nu: T,
    orders: Vec<u32>,
    /// `Gamma(nu+1)/pi`
    prefactor: T,
    total_order: u32,
}

impl<T: Real> Route<T> {
    fn new(nu: T, orders: Vec<u32>) -> Result<Self> {
        let prefactor = gamma(nu + T::one())? / T::PI();
        let total_order = orders.iter().sum();
        Ok(Self { nu, orders, prefactor, total_order })
    }

    fn dim(&self) -> T {
        T::idx(self.orders.len())
    }

    fn kernel(&self, eps: T, x: T) -> T {
        let s = self.nu + T::one();
        let r2 = eps * eps + x * x;
        self.prefactor * r2.powf(-s / T::lit(2.0)) * (s * x.atan2(eps)).cos()
    }

    /// `(-i)^P`
    fn phase(&self) -> Complex<T> {
        match self.total_order % 4 {
            0 => Complex::new(T::one(), T::zero()),
            1 => Complex::new(T::zero(), -T::one()),
            2 => Complex::new(-T::one(), T::zero()),
            _ => Complex::new(T::zero(), T::one()),
        }
    }

    fn odd(&self) -> bool {
        self.total_order % 2 == 1
    }

    fn g(&self, x: T) -> Complex<T> {
        let prod = self.orders.iter().fold(T::one(), |acc, &m| acc * bessel_j(m, T::lit(2.0) * x));
        let w = T::lit(2.0) * self.dim() * x;
        let bracket = if self.odd() {
            Complex::new(T::zero(), T::lit(2.0) * w.sin())
        } else {
            Complex::new(T::lit(2.0) * w.cos(), T::zero())
        };
        self.phase() * bracket * prod
    }

    fn g0(&self) -> T {
        if self.total_order == 0 {
            T::lit(2.0)
        } else {
            T::zero()
        }
    }

    fn regularized(&self, eps: T, cutoff: T) -> Result<Regularized<T>> {
        let bps = self.breakpoints(eps, cutoff);
        let g0 = self.g0();
        let re = |x: T| self.kernel(eps, x) * (self.g(x).re - g0);
        let im = |x: T| self.kernel(eps, x) * self.g(x).im;
        let q = Adaptive::new(20, 30);
        let body = q.integrate_partition(&re, &bps, T::lit(1e-12))?;
        let rule = GaussLegendre::new(20);
        let body_im: CompensatedSum<T> = bps.windows(2).map(|w| rule.integrate(&im, w[0], w[1])).collect();

        let max_order = self.orders.iter().copied().max().unwrap_or(0);
        let hankel_ok = T::lit(2.0) * cutoff >= T::lit(50.0) + T::from_u32(max_order * max_order).unwrap();
        let (tail_re, tail_im) = if hankel_ok {
            let t = self.oscillatory_tail(eps, cutoff);
            (t.re + self.constant_tail(eps, cutoff), t.im)
        } else {
            (T::zero(), T::zero())
        };
        Ok(Regularized { value: body + tail_re, imag: body_im.value() + tail_im, tail: tail_re })
    }

    /// Graded toward zero on the scale of `eps`, then a fixed fraction of the
    /// oscillation period of `G` up to the cutoff.
    fn breakpoints(&self, eps: T, cutoff: T) -> Vec<T> {
        let mut bps = vec![T::zero()];
        let first = cutoff.min(T::one());
        let mut x = eps / T::lit(1024.0);
        while x < first {
            bps.push(x);
            x = x * T::lit(2.0);
        }
        bps.push(first);
        let width = T::FRAC_PI_4() / self.dim();
        let pieces = ((cutoff - first) / width).ceil().to_usize().unwrap_or(0);
        for k in 1..=pieces {
            let v = first + (cutoff - first) * T::idx(k) / T::idx(pieces);
            bps.push(v);
        }
        bps
    }

    /// `-g0 * 2 int_X^inf D_eps`, exact: `int_X^inf (eps + i x)^-(nu+1) dx = (eps + iX)^-nu / (i nu)`.
    fn constant_tail(&self, eps: T, cutoff: T) -> T {
        let g0 = self.g0();
        if g0 == T::zero() {
            return T::zero();
        }
        let z = Complex::new(eps, cutoff).powf(-self.nu) / Complex::new(T::zero(), self.nu);
        -g0 * self.prefactor * z.re
    }

    /// Large-argument expansion of `D_eps G` integrated from `cutoff` to infinity.
    fn oscillatory_tail(&self, eps: T, cutoff: T) -> Complex<T> {
        let two = T::lit(2.0);
        let half = T::lit(0.5);
        // J_m(2x) = (pi x)^-1/2 / 2 * [e^{i chi} A(x) + c.c.], chi = 2x - m pi/2 - pi/4
        let mut terms = vec![Term { coef: Complex::new(T::one(), T::zero()), power: T::zero(), freq: T::zero() }];
        let norm = T::PI().sqrt().recip() / two;
        for &m in &self.orders {
            let a = hankel_coeffs::<T>(m, HANKEL_TERMS);
            let shift = -(T::from_u32(m).unwrap() * T::FRAC_PI_2() + T::FRAC_PI_4());
            let base = Complex::from_polar(norm, shift);
            let mut factors = Vec::with_capacity(2 * HANKEL_TERMS);
            let mut ik = Complex::new(T::one(), T::zero());
            for (k, &ak) in a.iter().enumerate() {
                let c = base * ik * (ak * two.powi(-(k as i32)));
                let power = half + T::idx(k);
                factors.push(Term { coef: c, power, freq: two });
                factors.push(Term { coef: c.conj(), power, freq: -two });
                ik = ik * Complex::new(T::zero(), T::one());
            }
            let mut next = Vec::with_capacity(terms.len() * factors.len());
            let limit = T::idx(self.orders.len()) * half + T::idx(HANKEL_TERMS);
            for t in &terms {
                for f in &factors {
                    let power = t.power + f.power;
                    if power <= limit {
                        next.push(Term { coef: t.coef * f.coef, power, freq: t.freq + f.freq });
                    }
                }
            }
            terms = next;
        }
        // phase and the two plane-wave factors
        let w = two * self.dim();
        let sign = if self.odd() { -T::one() } else { T::one() };
        let phase = self.phase();
        let mut g_terms = Vec::with_capacity(2 * terms.len());
        for t in &terms {
            g_terms.push(Term { coef: t.coef * phase, power: t.power, freq: t.freq + w });
            g_terms.push(Term { coef: t.coef * phase * sign, power: t.power, freq: t.freq - w });
        }
        // D_eps = prefactor Re[(i x)^-s (1 + eps/(i x))^-s], s = nu + 1, expanded in eps/x
        let s = self.nu + T::one();
        let mut kernel = Vec::with_capacity(2 * KERNEL_TERMS);
        let mut binom = T::one();
        for j in 0..KERNEL_TERMS {
            let i_pow = Complex::from_polar(T::one(), -T::FRAC_PI_2() * (s + T::idx(j)));
            let c = i_pow * (self.prefactor * half * binom * eps.powi(j as i32));
            kernel.push(Term { coef: c, power: s + T::idx(j), freq: T::zero() });
            kernel.push(Term { coef: c.conj(), power: s + T::idx(j), freq: T::zero() });
            binom = binom * (-s - T::idx(j)) / T::idx(j + 1);
        }
        let mut re = CompensatedSum::new();
        let mut im = CompensatedSum::new();
        for g in &g_terms {
            for k in &kernel {
                let v = g.coef * k.coef * power_exp_tail(g.power + k.power, g.freq, cutoff);
                re.add(v.re);
                im.add(v.im);
            }
        }
        Complex::new(re.value(), im.value())
    }
}

/// `int_X^inf x^-mu exp(i w x) dx` for `mu > 1`, asymptotic in `1/(w X)`.
fn power_exp_tail<T: Real>(mu: T, w: T, x: T) -> Complex<T> {
    if w.abs() < T::lit(1e-12) {
        return Complex::new(x.powf(T::one() - mu) / (mu - T::one()), T::zero());
    }
    let iwx = Complex::new(T::zero(), w * x);
    let mut term = Complex::new(T::one(), T::zero());
    let mut sum = term;
    for j in 0..30 {
        term = term * (mu + T::idx(j)) / iwx;
        sum = sum + term;
        if term.norm() < T::epsilon() * sum.norm() {
            break;
        }
    }
    let lead = Complex::from_polar(x.powf(-mu), w * x) / Complex::new(T::zero(), w);
    -lead * sum
}
