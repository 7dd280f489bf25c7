//! Gauss-Legendre quadrature with adaptive bisection.

use crate::error::{Error, Result};
use crate::scalar::{CompensatedSum, Real};

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Builds the `n`-point rule by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0f64; n];
        let mut weights = vec![0.0f64; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0f64, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                let pn = if n == 1 { x } else { p1 };
                let pnm1 = if n == 1 { 1.0 } else { p0 };
                dp = nf * (x * pn - pnm1) / (x * x - 1.0);
                let dx = pn / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes: nodes.into_iter().map(T::lit).collect(), weights: weights.into_iter().map(T::lit).collect() }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: T, b: T) -> impl Iterator<Item = (T, T)> + '_ {
        let half = (b - a) / T::lit(2.0);
        let mid = (a + b) / T::lit(2.0);
        self.nodes.iter().zip(&self.weights).map(move |(&x, &w)| (mid + half * x, half * w))
    }

    /// Fixed-rule integral of `f` over `[a, b]`.
    pub fn integrate<F: Fn(T) -> T + ?Sized>(&self, f: &F, a: T, b: T) -> T {
        let mut acc = CompensatedSum::new();
        for (x, w) in self.mapped(a, b) {
            acc.add(w * f(x));
        }
        acc.value()
    }
}

/// Adaptive bisection driver around a fixed Gauss-Legendre rule.
///
/// A panel is accepted when the rule on the panel and on its two halves
/// agree to the panel's share of the absolute tolerance.
#[derive(Debug, Clone)]
pub struct Adaptive<T> {
    rule: GaussLegendre<T>,
    max_depth: usize,
}

impl<T: Real> Adaptive<T> {
    pub fn new(points: usize, max_depth: usize) -> Self {
        Self { rule: GaussLegendre::new(points), max_depth }
    }

    pub fn rule(&self) -> &GaussLegendre<T> {
        &self.rule
    }

    /// Integrates `f` over `[a, b]` to absolute tolerance `abs_tol`.
    pub fn integrate<F: Fn(T) -> T + ?Sized>(&self, f: &F, a: T, b: T, abs_tol: T) -> Result<T> {
        self.integrate_partition(f, &[a, b], abs_tol)
    }

    /// Integrates over consecutive `breakpoints`, sharing the tolerance in
    /// proportion to panel width.
    pub fn integrate_partition<F: Fn(T) -> T + ?Sized>(&self, f: &F, breakpoints: &[T], abs_tol: T) -> Result<T> {
        if breakpoints.len() < 2 {
            return Ok(T::zero());
        }
        let total = (breakpoints[breakpoints.len() - 1] - breakpoints[0]).abs();
        if total == T::zero() {
            return Ok(T::zero());
        }
        let density = abs_tol / total;
        // integrable endpoint singularities never meet a width-proportional share
        let floor = abs_tol / T::idx(4 * self.max_depth.max(1));
        let mut acc = CompensatedSum::new();
        for w in breakpoints.windows(2) {
            let whole = self.rule.integrate(f, w[0], w[1]);
            acc.add(self.refine(f, w[0], w[1], whole, density, floor, self.max_depth)?);
        }
        Ok(acc.value())
    }

    #[allow(clippy::too_many_arguments)]
    fn refine<F: Fn(T) -> T + ?Sized>(
        &self,
        f: &F,
        a: T,
        b: T,
        whole: T,
        density: T,
        floor_abs: T,
        depth: usize,
    ) -> Result<T> {
        let m = (a + b) / T::lit(2.0);
        let left = self.rule.integrate(f, a, m);
        let right = self.rule.integrate(f, m, b);
        let both = left + right;
        let err = (both - whole).abs();
        let allowed = density * (b - a).abs();
        let floor = T::lit(64.0) * T::epsilon() * (left.abs() + right.abs());
        if err <= allowed || err <= floor || err <= floor_abs || m == a || m == b {
            return Ok(both);
        }
        if depth == 0 {
            return Err(Error::QuadratureNonConvergence(format!(
                "panel [{}, {}] error {:e} above {:e} at maximum depth",
                a.as_f64(),
                b.as_f64(),
                err.as_f64(),
                allowed.as_f64()
            )));
        }
        let l = self.refine(f, a, m, left, density, floor_abs, depth - 1)?;
        let r = self.refine(f, m, b, right, density, floor_abs, depth - 1)?;
        Ok(l + r)
    }
}

/// Breakpoints on `[a, b]` graded geometrically toward `a` (ratio 1/2,
/// `levels` levels) with every panel at most `max_width` wide.
pub fn graded_breakpoints<T: Real>(a: T, b: T, levels: usize, max_width: T) -> Vec<T> {
    let mut coarse = Vec::with_capacity(levels + 2);
    coarse.push(a);
    let width = b - a;
    for k in (1..=levels).rev() {
        coarse.push(a + width * T::lit(0.5).powi(k as i32));
    }
    coarse.push(b);
    subdivide(&coarse, max_width)
}

/// Uniform breakpoints on `[a, b]` with panels at most `max_width` wide.
pub fn uniform_breakpoints<T: Real>(a: T, b: T, max_width: T) -> Vec<T> {
    subdivide(&[a, b], max_width)
}

fn subdivide<T: Real>(coarse: &[T], max_width: T) -> Vec<T> {
    let mut out = vec![coarse[0]];
    for w in coarse.windows(2) {
        let span = w[1] - w[0];
        let pieces = (span / max_width).ceil().to_usize().unwrap_or(1).max(1);
        for j in 1..pieces {
            out.push(w[0] + span * T::idx(j) / T::idx(pieces));
        }
        out.push(w[1]);
    }
    out
}
