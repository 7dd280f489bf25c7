use crate::error::{Error, Result};
use crate::scalar::{CompensatedSum, Real};

use super::tables::BERNOULLI_EVEN;

/// Which of the two Hurwitz series is summed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZetaVariant {
    /// `sum_{n>=0} (x+n)^-beta`, real branch, `x > 0`.
    Standard,
    /// `sum_{n>=0} |x+n|^-beta`, any real `x` off the non-positive integers.
    AbsoluteValue,
}

/// Euler-Maclaurin correction terms used past the switch point.
const EM_TERMS: usize = 10;
/// Upper bound on the number of directly summed terms.
const MAX_DIRECT_TERMS: usize = 10_000;

fn switch_point<T: Real>(beta: T) -> usize {
    let by_order = (T::lit(10.0) / (beta - T::one())).ceil().to_usize().unwrap_or(MAX_DIRECT_TERMS);
    let by_size = beta.ceil().to_usize().unwrap_or(MAX_DIRECT_TERMS);
    20usize.max(by_order.min(MAX_DIRECT_TERMS)).max(by_size)
}

/// `sum_{n>=0} (x+n)^-beta` for `x > 0`, `beta > 1`.
///
/// The first `M = max(20, ceil(10/(beta-1)), ceil(beta))` terms are summed
/// directly; the remainder is the Euler-Maclaurin tail with ten Bernoulli
/// corrections. With `x + M >= max(20, beta)` the first omitted correction is
/// below `1e-14` of the tail.
fn standard<T: Real>(beta: T, x: T) -> T {
    let m = switch_point(beta);
    let mut acc = CompensatedSum::new();
    for n in 0..m {
        acc.add((x + T::idx(n)).powf(-beta));
    }
    let a = x + T::idx(m);
    let a_pow = a.powf(-beta);
    acc.add(a * a_pow / (beta - T::one()));
    acc.add(a_pow / T::lit(2.0));
    // B_{2j}/(2j)! * (beta)_{2j-1} * a^{-beta-2j+1}
    let mut rising = beta; // (beta)_1
    let mut fact = T::lit(2.0); // (2j)!
    let mut a_term = a_pow / a;
    let a_inv2 = (a * a).recip();
    for (j, &b2j) in BERNOULLI_EVEN.iter().enumerate().skip(1).take(EM_TERMS) {
        let term = T::lit(b2j) / fact * rising * a_term;
        acc.add(term);
        let jj = T::idx(2 * j);
        rising = rising * (beta + jj - T::one()) * (beta + jj);
        fact = fact * (jj + T::one()) * (jj + T::lit(2.0));
        a_term = a_term * a_inv2;
    }
    acc.value()
}

/// Hurwitz zeta function in one of the two real variants.
pub fn hurwitz_zeta<T: Real>(variant: ZetaVariant, beta: T, x: T) -> Result<T> {
    if !(beta > T::one()) {
        return Err(Error::domain(format!("Hurwitz zeta diverges for beta = {} <= 1", beta)));
    }
    if !x.is_finite() {
        return Err(Error::domain("Hurwitz zeta argument must be finite"));
    }
    if x > T::zero() {
        return Ok(standard(beta, x));
    }
    match variant {
        ZetaVariant::Standard => Err(Error::domain(format!("standard Hurwitz zeta requires x > 0, got {}", x))),
        ZetaVariant::AbsoluteValue => {
            if x.is_integer() {
                return Err(Error::Singularity(x.as_f64()));
            }
            let shift = (-x).ceil();
            let n0 = shift.to_usize().unwrap_or(0);
            let mut acc = CompensatedSum::new();
            for n in 0..n0 {
                acc.add((x + T::idx(n)).abs().powf(-beta));
            }
            acc.add(standard(beta, x + shift));
            Ok(acc.value())
        }
    }
}
