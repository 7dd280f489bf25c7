use crate::scalar::{CompensatedSum, Real};

/// Hankel expansion coefficients `a_k(m) = prod_{j<=k} (4m^2 - (2j-1)^2) / (k! 8^k)`.
pub(crate) fn hankel_coeffs<T: Real>(order: u32, count: usize) -> Vec<T> {
    let mu = T::lit(4.0) * T::from_u32(order * order).unwrap();
    let mut out = Vec::with_capacity(count);
    let mut a = T::one();
    out.push(a);
    for k in 1..count {
        let odd = T::idx(2 * k - 1);
        a = a * (mu - odd * odd) / (T::idx(k) * T::lit(8.0));
        out.push(a);
    }
    out
}

fn use_asymptotic<T: Real>(order: u32, x: T) -> bool {
    x >= T::lit(50.0) + T::from_u32(order * order).unwrap()
}

/// Hankel asymptotic expansion of `J_m(x)` for large positive `x`.
fn bessel_j_asymptotic<T: Real>(order: u32, x: T) -> T {
    let mu = T::lit(4.0) * T::from_u32(order * order).unwrap();
    let eight_x = T::lit(8.0) * x;
    // P = sum (-1)^k a_{2k} / x^{2k}, Q = sum (-1)^k a_{2k+1} / x^{2k+1}
    let mut p = T::one();
    let mut q = T::zero();
    let mut term = T::one();
    let mut last = T::infinity();
    for k in 1..80usize {
        let odd = T::idx(2 * k - 1);
        term = term * (mu - odd * odd) / (T::idx(k) * eight_x);
        if term.abs() > last {
            break;
        }
        last = term.abs();
        match k % 4 {
            1 => q = q + term,
            2 => p = p - term,
            3 => q = q - term,
            _ => p = p + term,
        }
        if term.abs() < T::epsilon() * T::lit(1e-2) {
            break;
        }
    }
    // chi = x - m pi/2 - pi/4; expand cos/sin of the shift exactly
    let phase = T::from_u32(2 * order + 1).unwrap() * T::FRAC_PI_4();
    let (sx, cx) = x.sin_cos();
    let (sp, cp) = phase.sin_cos();
    let cos_chi = cx * cp + sx * sp;
    let sin_chi = sx * cp - cx * sp;
    (T::lit(2.0) / (T::PI() * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

/// Trapezoid rule on `J_m(x) = (1/2pi) int_0^{2pi} cos(m t - x sin t) dt`.
///
/// The integrand is periodic and entire, so the `M`-point rule is exact up to
/// aliased orders `J_{m +- kM}(x)`, negligible once `M > 2(m + |x|) + 64`.
fn bessel_j_trapezoid<T: Real>(order: u32, x: T) -> T {
    let m = 2 * (order as usize + x.abs().ceil().to_usize().unwrap_or(0)) + 64;
    let step = T::TAU() / T::idx(m);
    let ord = T::from_u32(order).unwrap();
    let mut acc = CompensatedSum::new();
    for k in 0..m {
        let t = step * T::idx(k);
        acc.add((ord * t - x * t.sin()).cos());
    }
    acc.value() / T::idx(m)
}

/// Bessel function of the first kind `J_order(x)` for integer `order >= 0`.
pub fn bessel_j<T: Real>(order: u32, x: T) -> T {
    if x == T::zero() {
        return if order == 0 { T::one() } else { T::zero() };
    }
    let sign = if x < T::zero() && order % 2 == 1 { -T::one() } else { T::one() };
    let ax = x.abs();
    let v = if use_asymptotic(order, ax) { bessel_j_asymptotic(order, ax) } else { bessel_j_trapezoid(order, ax) };
    sign * v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_j(0, 0.0f64), 1.0);
        assert_eq!(bessel_j(1, 0.0f64), 0.0);
        assert_eq!(bessel_j(5, 0.0f64), 0.0);
    }

    #[test]
    fn power_series_agreement_small_x() {
        // J_m(x) = sum_k (-1)^k (x/2)^{2k+m} / (k! (k+m)!)
        for m in 0..6u32 {
            for x in [0.1f64, 1.0, 3.0, 7.5] {
                let mut s = 0.0;
                let mut term = (x / 2.0).powi(m as i32) / (1..=m).map(f64::from).product::<f64>();
                for k in 0..60 {
                    s += term;
                    let kf = f64::from(k);
                    term *= -(x / 2.0).powi(2) / ((kf + 1.0) * (kf + 1.0 + f64::from(m)));
                }
                assert!((bessel_j(m, x) - s).abs() < 1e-13, "m={m} x={x}");
            }
        }
    }

    #[test]
    fn asymptotic_and_trapezoid_overlap() {
        for m in 0..5u32 {
            for x in [60.0f64, 80.0, 120.0] {
                let a = bessel_j_asymptotic(m, x);
                let t = bessel_j_trapezoid(m, x);
                assert!((a - t).abs() < 1e-14, "m={m} x={x}: {a} vs {t}");
            }
        }
    }

    #[test]
    fn parity() {
        for m in 0..4u32 {
            let s = if m % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(bessel_j(m, -2.5f64), s * bessel_j(m, 2.5f64));
        }
    }
}
