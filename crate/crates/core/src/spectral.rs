//! Bloch-basis helpers: exact phase tables, per-axis generator spectra and
//! separable n-dimensional FFTs over row-major site arrays.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::scalar::Real;

/// `cos(2 pi k / n)` and `sin(2 pi k / n)` for `k = 0..n`, built from the
/// first half turn so that symmetric entries agree bit for bit.
#[derive(Debug, Clone)]
pub struct PhaseTable<T> {
    cos: Vec<T>,
    sin: Vec<T>,
}

impl<T: Real> PhaseTable<T> {
    pub fn new(n: usize) -> Self {
        let mut cos = vec![T::zero(); n];
        let mut sin = vec![T::zero(); n];
        let nf = T::idx(n);
        for k in 0..n {
            // reduce to the nearest of k, n-k for symmetric rounding
            let (kk, s) = if 2 * k <= n { (k, T::one()) } else { (n - k, -T::one()) };
            let theta = T::TAU() * T::idx(kk) / nf;
            let (sv, cv) = theta.sin_cos();
            cos[k] = cv;
            sin[k] = s * sv;
        }
        // exact zeros and unit values where they are known
        if n.is_multiple_of(4) {
            cos[n / 4] = T::zero();
            cos[3 * n / 4] = T::zero();
            sin[n / 4] = T::one();
            sin[3 * n / 4] = -T::one();
        }
        if n.is_multiple_of(2) && n > 0 {
            sin[n / 2] = T::zero();
            cos[n / 2] = -T::one();
        }
        Self { cos, sin }
    }

    pub fn len(&self) -> usize {
        self.cos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cos.is_empty()
    }

    /// `cos(2 pi l p / n)` for arbitrary integer `l * p`.
    #[inline]
    pub fn cos_at(&self, lp: i64) -> T {
        self.cos[lp.rem_euclid(self.cos.len() as i64) as usize]
    }

    #[inline]
    pub fn sin_at(&self, lp: i64) -> T {
        self.sin[lp.rem_euclid(self.sin.len() as i64) as usize]
    }
}

/// Generator eigenvalues `4 sin^2(pi l / n)` along one periodic axis.
pub fn axis_generator_spectrum<T: Real>(n: usize) -> Vec<T> {
    (0..n)
        .map(|l| {
            let ll = l.min(n - l);
            if 4 * ll == n {
                return T::lit(2.0);
            }
            let s = T::lit(2.0) * (T::PI() * T::idx(ll) / T::idx(n)).sin();
            s * s
        })
        .collect()
}

/// `lambda^(alpha/2)` with exact zero at `lambda = 0`.
#[inline]
pub fn spectral_power<T: Real>(lambda: T, alpha: T) -> T {
    if lambda <= T::zero() {
        T::zero()
    } else if alpha == T::lit(2.0) {
        lambda
    } else if alpha == T::one() {
        lambda.sqrt()
    } else {
        lambda.powf(alpha / T::lit(2.0))
    }
}

/// Row-major strides for `dims`.
pub fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for j in (0..dims.len().saturating_sub(1)).rev() {
        s[j] = s[j + 1] * dims[j + 1];
    }
    s
}

/// Decodes a flat row-major index into per-axis indices.
pub fn unflatten(mut flat: usize, dims: &[usize], out: &mut [usize]) {
    for j in (0..dims.len()).rev() {
        out[j] = flat % dims[j];
        flat /= dims[j];
    }
}

/// Full generator spectrum `lambda_l = sum_j 4 sin^2(pi l_j / N_j)` in row-major order.
pub fn generator_spectrum<T: Real>(dims: &[usize]) -> Vec<T> {
    let axes: Vec<Vec<T>> = dims.iter().map(|&n| axis_generator_spectrum(n)).collect();
    let total: usize = dims.iter().product();
    let mut idx = vec![0usize; dims.len()];
    (0..total)
        .map(|flat| {
            unflatten(flat, dims, &mut idx);
            idx.iter().zip(&axes).fold(T::zero(), |acc, (&l, ax)| acc + ax[l])
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `X_l = sum_p x_p exp(-i k_l p)`
    Forward,
    /// `x_p = sum_l X_l exp(+i k_l p)`, unnormalized
    Inverse,
}

/// In-place separable FFT over a row-major array with the given `dims`.
pub fn fft_nd<T: Real>(data: &mut [Complex<T>], dims: &[usize], direction: Direction) {
    let total: usize = dims.iter().product();
    assert_eq!(data.len(), total, "buffer length must match the lattice size");
    let st = strides(dims);
    let mut planner = FftPlanner::<T>::new();
    for (axis, &n) in dims.iter().enumerate() {
        if n <= 1 {
            continue;
        }
        let fft = match direction {
            Direction::Forward => planner.plan_fft_forward(n),
            Direction::Inverse => planner.plan_fft_inverse(n),
        };
        let stride = st[axis];
        let mut line = vec![Complex::new(T::zero(), T::zero()); n];
        let block = stride * n;
        for outer in (0..total).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for (k, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + k * stride];
                }
                fft.process(&mut line);
                for (k, v) in line.iter().enumerate() {
                    data[base + k * stride] = *v;
                }
            }
        }
    }
}

/// Applies a diagonal Bloch-basis multiplier: `u -> F^-1 diag(m) F u`.
pub fn apply_symbol<T: Real>(values: &[Complex<T>], dims: &[usize], symbol: &[T]) -> Vec<Complex<T>> {
    let mut buf = values.to_vec();
    fft_nd(&mut buf, dims, Direction::Forward);
    for (b, &m) in buf.iter_mut().zip(symbol) {
        *b = *b * m;
    }
    fft_nd(&mut buf, dims, Direction::Inverse);
    let inv_n = T::idx(values.len()).recip();
    for b in &mut buf {
        *b = *b * inv_n;
    }
    buf
}
