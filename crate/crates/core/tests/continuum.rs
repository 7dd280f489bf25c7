use std::f64::consts::PI;

use fraclat::continuum::{
    continuum_limit_check, periodic_kernel_direct, periodic_kernel_zeta, riesz_kernel_infinite, scaling,
};
use fraclat::{ContinuumConfig, Error, KernelRoute, KernelSamples, Period};
use proptest::prelude::*;

fn periodic(l: f64, alpha: f64) -> ContinuumConfig<f64> {
    ContinuumConfig::new(Period::Finite(l), alpha).unwrap()
}

/// Image sum over `|n| <= m`, smallest terms first, closed with the
/// midpoint-rule integral of each half tail. Independent of the library's
/// tail handling by its choice of `m` and the missing correction term.
fn image_sum_oracle(alpha: f64, l: f64, x: f64, m: i64) -> f64 {
    let beta = alpha + 1.0;
    let mut s = 0.0;
    for n in (1..=m).rev() {
        s += ((n as f64) * l - x).abs().powf(-beta);
        s += ((n as f64) * l + x).abs().powf(-beta);
    }
    s += x.abs().powf(-beta);
    let t = (m as f64 + 0.5) * l;
    s += ((t - x).powf(1.0 - beta) + (t + x).powf(1.0 - beta)) / (l * (beta - 1.0));
    let k = libm_gamma(alpha + 1.0) * (alpha * PI / 2.0).sin() / PI;
    k * s
}

/// Gamma via Lanczos (g = 7, n = 9); ~1e-15 relative on the range used here.
fn libm_gamma(x: f64) -> f64 {
    const G: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    let x = x - 1.0;
    let mut a = G[0];
    let t = x + 7.5;
    for (i, g) in G.iter().enumerate().skip(1) {
        a += g / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

#[test]
fn infinite_kernel_examples() {
    assert!((riesz_kernel_infinite(1.0, 1.0).unwrap() * PI - 1.0).abs() < 1e-15);
    // K(2)/K(1) = 2^(-alpha-1) = 1/4 at alpha = 1
    assert!((riesz_kernel_infinite(1.0, 2.0).unwrap() * 4.0 * PI - 1.0).abs() < 1e-15);
    for alpha in [0.3, 0.9, 1.6, 2.5] {
        let a = riesz_kernel_infinite(alpha, 1.7).unwrap();
        assert_eq!(a, riesz_kernel_infinite(alpha, -1.7).unwrap());
        let r = riesz_kernel_infinite(alpha, 3.4).unwrap() / a;
        assert!((r - 2f64.powf(-alpha - 1.0)).abs() < 1e-14);
    }
    assert!(matches!(riesz_kernel_infinite(1.0, 0.0), Err(Error::Singularity(_))));
    assert!(matches!(riesz_kernel_infinite(2.0, 1.0), Err(Error::Domain(_))));
    assert!(matches!(riesz_kernel_infinite(4.0, 1.0), Err(Error::Domain(_))));
}

#[test]
fn zeta_form_matches_image_sum_oracle() {
    for alpha in [0.25, 0.5, 1.0, 1.5, 1.75] {
        for i in 1..=9 {
            let xi = i as f64 / 10.0;
            for l in [1.0, 2.0 * PI] {
                let z = periodic_kernel_zeta(&periodic(l, alpha), xi * l).unwrap();
                let o = image_sum_oracle(alpha, l, xi * l, 40_000);
                assert!((z - o).abs() <= 1e-10 * o, "alpha={alpha} xi={xi} L={l}: {z} vs {o}");
            }
        }
    }
}

#[test]
fn documented_agreements() {
    let cases = [(0.5, 1.0, 0.3), (1.5, 2.0 * PI, 1.0)];
    for (alpha, l, x) in cases {
        let cfg = periodic(l, alpha);
        let z = periodic_kernel_zeta(&cfg, x).unwrap();
        let d = periodic_kernel_direct(&cfg, x, 2000).unwrap();
        assert!((z - d.value).abs() <= 1e-8 * z);
        assert!((z - d.value).abs() <= d.bound);
    }
}

#[test]
fn direct_bound_is_honest() {
    for alpha in [0.25, 1.0, 1.75] {
        let cfg = periodic(1.0, alpha);
        let exact = periodic_kernel_zeta(&cfg, 0.37).unwrap();
        for terms in [1usize, 4, 16, 64] {
            let d = periodic_kernel_direct(&cfg, 0.37, terms).unwrap();
            assert!((d.value - exact).abs() <= d.bound, "alpha={alpha} terms={terms}");
        }
    }
}

#[test]
fn periodicity_and_reflection() {
    let cfg = periodic(2.5, 0.7);
    let k = periodic_kernel_zeta(&cfg, 0.4).unwrap();
    for x in [2.9, -2.1, 0.4 + 25.0] {
        assert!((periodic_kernel_zeta(&cfg, x).unwrap() - k).abs() < 1e-12 * k);
    }
    assert!((periodic_kernel_zeta(&cfg, 2.1).unwrap() - k).abs() < 1e-12 * k);
    let d0 = periodic_kernel_direct(&cfg, 0.4, 100).unwrap().value;
    let d1 = periodic_kernel_direct(&cfg, 2.1, 100).unwrap().value;
    assert!((d0 - d1).abs() < 1e-12 * d0);
    for x in [0.0, 2.5, -5.0] {
        assert!(matches!(periodic_kernel_zeta(&cfg, x), Err(Error::Singularity(_))));
        assert!(matches!(periodic_kernel_direct(&cfg, x, 10), Err(Error::Singularity(_))));
    }
}

#[test]
fn long_string_recovers_infinite_kernel() {
    for alpha in [0.5, 1.0, 1.5] {
        let k_inf = riesz_kernel_infinite(alpha, 1.0).unwrap();
        let mut prev = f64::INFINITY;
        for l in [10.0, 100.0, 1000.0, 10_000.0] {
            let k = periodic_kernel_zeta(&periodic(l, alpha), 1.0).unwrap();
            let gap = k - k_inf;
            // n = +-1 images dominate, each about K (L - 1)^-beta
            let images =
                riesz_kernel_infinite(alpha, l - 1.0).unwrap() + riesz_kernel_infinite(alpha, l + 1.0).unwrap();
            assert!(gap > 0.0 && gap < prev);
            assert!(gap >= images * (1.0 - 1e-6) && gap <= 3.0 * images, "alpha={alpha} L={l}");
            prev = gap;
        }
    }
    let inf = ContinuumConfig::new(Period::Infinite, 1.0).unwrap();
    assert_eq!(periodic_kernel_zeta(&inf, 2.0).unwrap(), riesz_kernel_infinite(1.0, 2.0).unwrap());
}

#[test]
fn scaling_relations() {
    let cfg = periodic(3.0, 1.3).with_a_const(2.0).unwrap().with_rho0(0.5).unwrap();
    assert_eq!(scaling(1.0, 1.3, &cfg).unwrap(), (2.0, 0.5));
    for h in [0.5, 0.1, 0.003] {
        let (w, m) = scaling(h, 1.3, &cfg).unwrap();
        let (w2, _) = scaling(h / 2.0, 1.3, &cfg).unwrap();
        assert!((w2 / w - 2f64.powf(1.3)).abs() < 1e-13);
        assert!((m * (3.0 / h) - 1.5).abs() < 1e-14);
    }
    assert!(scaling(0.0, 1.0, &cfg).is_err());
}

#[test]
fn continuum_limit_alpha_one() {
    let cfg =
        ContinuumConfig::new(Period::Infinite, 1.0f64).unwrap().with_a_const(2.0).unwrap().with_rho0(3.0).unwrap();
    let hs = [1.0 / 16.0, 1.0 / 64.0, 1.0 / 256.0];
    let r = continuum_limit_check(1.0, 1.0, &hs, &cfg).unwrap();
    assert!(r.monotone && !r.jitter);
    // closed form: deviation = (h/2x)^2 / (1 - (h/2x)^2)
    for s in &r.steps {
        let q = (s.h / 2.0).powi(2);
        assert!((s.deviation - q / (1.0 - q)).abs() < 1e-12);
        assert!((s.target - 6.0 / PI).abs() < 1e-14);
    }
    assert!(r.final_deviation() < 0.02);
}

#[test]
fn continuum_limit_other_orders() {
    for alpha in [0.5, 1.5] {
        let cfg = ContinuumConfig::new(Period::Infinite, alpha).unwrap();
        let r = continuum_limit_check(alpha, 1.0, &[1.0 / 16.0, 1.0 / 64.0, 1.0 / 256.0], &cfg).unwrap();
        assert!(r.monotone, "alpha={alpha}");
        assert!(r.final_deviation() < 0.02);
    }
    // rounding of x/h is flagged
    let cfg = ContinuumConfig::new(Period::Infinite, 1.0).unwrap();
    let r = continuum_limit_check(1.0, 0.3, &[0.07, 0.01], &cfg).unwrap();
    assert!(r.jitter && r.steps[0].rounded && r.steps[0].site == 4);
}

#[test]
fn continuum_limit_errors() {
    let cfg2 = ContinuumConfig::new(Period::Infinite, 2.0).unwrap();
    assert!(matches!(continuum_limit_check(2.0, 1.0, &[0.1], &cfg2), Err(Error::Domain(_))));
    let cfg = ContinuumConfig::new(Period::Infinite, 1.0f64).unwrap();
    assert!(matches!(continuum_limit_check(1.0, 0.0, &[0.1], &cfg), Err(Error::Singularity(_))));
    assert!(continuum_limit_check(1.0, 1.0, &[0.1, 0.2], &cfg).is_err());
    assert!(continuum_limit_check(0.5, 1.0, &[0.1], &cfg).is_err());
    assert!(ContinuumConfig::new(Period::Finite(1.0), 1.0).unwrap().with_rho0(0.0).is_err());
}

#[test]
fn tabulation() {
    let cfg = periodic(1.0, 0.8);
    let xs = vec![0.1, 0.25, 0.5];
    let t = KernelSamples::tabulate(cfg, KernelRoute::HurwitzZeta, xs.clone(), 0).unwrap();
    let d = KernelSamples::tabulate(cfg, KernelRoute::DirectSum, xs.clone(), 500).unwrap();
    for (a, b) in t.values.iter().zip(&d.values) {
        assert!((a - b).abs() < 1e-8 * a);
    }
    assert!(KernelSamples::tabulate(cfg, KernelRoute::HurwitzZeta, vec![0.5, 1.0], 0).is_err());
    assert_eq!("zeta".parse::<KernelRoute>().unwrap(), KernelRoute::HurwitzZeta);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn positive_and_decreasing_on_half_period(alpha in 0.05f64..1.95, l in 0.5f64..20.0, a in 0.001f64..0.5, b in 0.001f64..0.5) {
        let cfg = periodic(l, alpha);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assume!(hi - lo > 1e-3);
        let k_lo = periodic_kernel_zeta(&cfg, lo * l).unwrap();
        let k_hi = periodic_kernel_zeta(&cfg, hi * l).unwrap();
        prop_assert!(k_hi > 0.0);
        prop_assert!(k_lo > k_hi);
    }

    #[test]
    fn zeta_and_direct_agree(alpha in 0.2f64..1.9, xi in 0.01f64..0.99) {
        let cfg = periodic(1.0, alpha);
        let z = periodic_kernel_zeta(&cfg, xi).unwrap();
        let d = periodic_kernel_direct(&cfg, xi, 3000).unwrap();
        prop_assert!((z - d.value).abs() <= 1e-8 * z);
    }
}
