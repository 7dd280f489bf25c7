use crate::error::{Error, Result};
use crate::scalar::Real;

use super::tables::{
    bernoulli, EULER_GAMMA, LANCZOS_COEFFS, LANCZOS_G_SHIFT, LANCZOS_SERIES_0, LANCZOS_SQRT_2PI, ZETA_INT,
};

/// `ln|Gamma(x)|` together with the sign of `Gamma(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogGamma<T> {
    pub ln_abs: T,
    pub sign: T,
}

impl<T: Real> LogGamma<T> {
    /// Reconstructs `Gamma(x)` (may overflow to infinity).
    pub fn value(&self) -> T {
        self.sign * self.ln_abs.exp()
    }
}

/// `sin(pi x)`, exact zero at the integers.
pub fn sin_pi<T: Real>(x: T) -> T {
    let two = T::lit(2.0);
    let mut r = x - two * (x / two).round();
    // r in [-1, 1]; fold onto [-1/2, 1/2]
    let half = T::lit(0.5);
    if r > half {
        r = T::one() - r;
    } else if r < -half {
        r = -T::one() - r;
    }
    (T::PI() * r).sin()
}

/// `cos(pi x)`, exact zero at the half-integers.
pub fn cos_pi<T: Real>(x: T) -> T {
    sin_pi(x + T::lit(0.5))
}

fn is_nonpositive_integer<T: Real>(x: T) -> bool {
    x <= T::zero() && x.is_integer()
}

/// `ln Gamma(1 + z)` for small `|z|` from its Taylor series.
fn ln_gamma_1p_series<T: Real>(z: T) -> T {
    let mut sum = -T::lit(EULER_GAMMA) * z;
    let mut zk = -z;
    for (i, zeta) in ZETA_INT.iter().enumerate() {
        let k = i + 2;
        zk = zk * (-z);
        // (-1)^k z^k = (-z)^k
        let term = T::lit(*zeta) * zk / T::idx(k);
        sum = sum + term;
        if term.abs() <= T::epsilon() * T::lit(1e-3) * sum.abs().max(T::min_positive_value()) {
            break;
        }
    }
    sum
}

fn ln_gamma_positive<T: Real>(x: T) -> T {
    let quarter = T::lit(0.25);
    let one = T::one();
    let two = T::lit(2.0);
    if (x - one).abs() < quarter {
        return ln_gamma_1p_series(x - one);
    }
    if (x - two).abs() < quarter {
        let z = x - two;
        return z.ln_1p() + ln_gamma_1p_series(z);
    }
    let mut y = x;
    let tmp = x + T::lit(LANCZOS_G_SHIFT);
    let tmp = (x + T::lit(0.5)) * tmp.ln() - tmp;
    let mut ser = T::lit(LANCZOS_SERIES_0);
    for c in LANCZOS_COEFFS {
        y = y + one;
        ser = ser + T::lit(c) / y;
    }
    tmp + (T::lit(LANCZOS_SQRT_2PI) * ser / x).ln()
}

/// `ln|Gamma(x)|` and the sign of `Gamma(x)`.
///
/// Uses a Lanczos series for `x >= 1/2`, Taylor series around the zeros
/// at 1 and 2, and the reflection formula below 1/2.
pub fn ln_gamma<T: Real>(x: T) -> Result<LogGamma<T>> {
    if x.is_nan() {
        return Err(Error::domain("ln_gamma of NaN"));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x.as_f64()));
    }
    if x >= T::lit(0.5) {
        return Ok(LogGamma { ln_abs: ln_gamma_positive(x), sign: T::one() });
    }
    // Gamma(x) Gamma(1 - x) = pi / sin(pi x)
    let s = sin_pi(x);
    let ln_abs = T::PI().ln() - s.abs().ln() - ln_gamma_positive(T::one() - x);
    Ok(LogGamma { ln_abs, sign: s.signum() })
}

/// `Gamma(x)`; errors at the poles.
pub fn gamma<T: Real>(x: T) -> Result<T> {
    ln_gamma(x).map(|g| g.value())
}

/// `1 / Gamma(x)`, entire: exactly zero at the poles.
pub fn recip_gamma<T: Real>(x: T) -> T {
    match ln_gamma(x) {
        Ok(g) => g.sign * (-g.ln_abs).exp(),
        Err(_) => T::zero(),
    }
}

/// Bernoulli polynomial `B_n(t)`.
pub(crate) fn bernoulli_poly<T: Real>(n: usize, t: T) -> T {
    // sum_k C(n,k) B_k t^(n-k), Horner in t
    let mut binom = T::one();
    let mut coeffs = Vec::with_capacity(n + 1);
    for k in 0..=n {
        coeffs.push(binom * T::lit(bernoulli(k)));
        binom = binom * T::idx(n - k) / T::idx(k + 1);
    }
    // coeffs[k] multiplies t^(n-k)
    coeffs.iter().fold(T::zero(), |acc, &c| acc * t + c)
}

/// Large-argument expansion of the Gamma ratio `Gamma(x + a) / Gamma(x + b)`.
///
/// For `x >= x_min` the ratio is `x^(a-b) * sum_k c_k x^-k`, with the
/// coefficients obtained by exponentiating the difference of the two
/// Stirling series. Below `x_min` the log-Gamma route is used.
#[derive(Debug, Clone)]
pub struct GammaRatio<T> {
    a: T,
    b: T,
    coeffs: Vec<T>,
    x_min: T,
}

const GAMMA_RATIO_TERMS: usize = 24;

impl<T: Real> GammaRatio<T> {
    pub fn new(a: T, b: T) -> Self {
        let k_max = GAMMA_RATIO_TERMS;
        // d_k = (-1)^(k+1) [B_{k+1}(a) - B_{k+1}(b)] / (k (k+1))
        let mut d = vec![T::zero(); k_max + 1];
        for (k, dk) in d.iter_mut().enumerate().skip(1) {
            let sign = if k % 2 == 1 { T::one() } else { -T::one() };
            let diff = bernoulli_poly(k + 1, a) - bernoulli_poly(k + 1, b);
            *dk = sign * diff / T::idx(k * (k + 1));
        }
        // exp of a power series: c_k = (1/k) sum_j j d_j c_{k-j}
        let mut c = vec![T::zero(); k_max + 1];
        c[0] = T::one();
        for k in 1..=k_max {
            let mut acc = T::zero();
            for j in 1..=k {
                acc = acc + T::idx(j) * d[j] * c[k - j];
            }
            c[k] = acc / T::idx(k);
        }
        let spread = a.abs() + b.abs() + T::one();
        let x_min = T::lit(40.0).max(T::lit(6.0) * spread);
        Self { a, b, coeffs: c, x_min }
    }

    /// Exponent `a - b` of the leading power.
    pub fn leading_power(&self) -> T {
        self.a - self.b
    }

    /// Coefficients `c_k` of the large-`x` expansion.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Smallest argument at which the expansion is used.
    pub fn x_min(&self) -> T {
        self.x_min
    }

    /// Evaluates the expansion at `x` regardless of `x_min`.
    pub fn eval_series(&self, x: T) -> T {
        let y = x.recip();
        let s = self.coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * y + c);
        x.powf(self.a - self.b) * s
    }

    /// `Gamma(x + a) / Gamma(x + b)`.
    pub fn eval(&self, x: T) -> Result<T> {
        if x >= self.x_min {
            return Ok(self.eval_series(x));
        }
        let num = ln_gamma(x + self.a)?;
        match ln_gamma(x + self.b) {
            Ok(den) => Ok(num.sign * den.sign * (num.ln_abs - den.ln_abs).exp()),
            Err(Error::Pole(_)) => Ok(T::zero()),
            Err(e) => Err(e),
        }
    }
}

/// Threshold on `|k| - alpha/2` beyond which [`gen_binomial`] switches to
/// the reflected Gamma-ratio form.
const REFLECT_THRESHOLD: f64 = 24.0;

/// Generalized binomial `Gamma(alpha+1) / (Gamma(alpha/2-k+1) Gamma(alpha/2+k+1))`.
///
/// Vanishes exactly when either denominator Gamma sits on a pole, which for
/// integer `alpha/2` happens at every integer `|k| > alpha/2`.
pub fn gen_binomial<T: Real>(alpha: T, k: T) -> Result<T> {
    if !(alpha > T::zero()) {
        return Err(Error::domain(format!("gen_binomial requires alpha > 0, got {}", alpha)));
    }
    let half = alpha / T::lit(2.0);
    let k = k.abs();
    let one = T::one();
    let lo = half - k + one;
    let hi = half + k + one;
    if is_nonpositive_integer(lo) || is_nonpositive_integer(hi) {
        return Ok(T::zero());
    }
    if let Some(exact) = exact_central_binomial(alpha, k) {
        return Ok(exact);
    }
    let num = ln_gamma(alpha + one)?;
    if k - half > T::lit(REFLECT_THRESHOLD) {
        // 1/Gamma(half-k+1) = Gamma(k-half) sin(pi (half-k+1)) / pi
        let ratio = GammaRatio::new(-half, half + one).eval(k)?;
        return Ok(num.value() * sin_pi(lo) / T::PI() * ratio);
    }
    let lo_g = ln_gamma(lo)?;
    let hi_g = ln_gamma(hi)?;
    let sign = num.sign * lo_g.sign * hi_g.sign;
    Ok(sign * (num.ln_abs - lo_g.ln_abs - hi_g.ln_abs).exp())
}

/// `C(alpha, alpha/2 - k)` in integer arithmetic for even integer `alpha <= 66`.
fn exact_central_binomial<T: Real>(alpha: T, k: T) -> Option<T> {
    if !alpha.is_integer() || !k.is_integer() || alpha > T::lit(66.0) {
        return None;
    }
    let n = alpha.to_u64()?;
    if n % 2 != 0 {
        return None;
    }
    let r = (n / 2).checked_sub(k.to_u64()?)?;
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    T::from_u128(acc)
}
