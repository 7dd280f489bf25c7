use std::f64::consts::PI;

use fraclat::chain1d::{asymptotic_element, finite_element_spectral, infinite_element};
use fraclat::lattice_nd::{
    assemble_block_row, asymptotic_element_nd, bessel_integral_element, bessel_integral_element_with, cross_section,
    dispersion_nd, dispersion_nd_normalized, finite_element_spectral_nd, generator_eigenvalue, infinite_element_nd,
    riesz_constant, spectral_block_row, BesselOptions, Section,
};
use fraclat::specfun::gamma;
use fraclat::{ChainConfig, ChainSize, Convention, Error, LatticeConfig, MultiIndex};
use proptest::prelude::*;

fn zone(n: usize, alpha: f64) -> LatticeConfig<f64> {
    LatticeConfig::infinite(n, alpha).unwrap()
}

fn torus(dims: &[usize], alpha: f64) -> LatticeConfig<f64> {
    LatticeConfig::finite(dims, alpha).unwrap()
}

#[test]
fn dispersion_examples() {
    let c = zone(2, 2.0);
    assert_eq!(dispersion_nd(&c, &[PI, PI]).unwrap(), 2f64.powf(1.5));
    assert_eq!(dispersion_nd_normalized(&c, &[PI, PI]).unwrap(), 1.0);
    for alpha in [0.3, 1.0, 2.7] {
        assert_eq!(dispersion_nd(&zone(2, alpha), &[0.0, 0.0]).unwrap(), 0.0);
    }
    let c = zone(3, 1.0).with_omega_sq(4.0).unwrap();
    // sqrt(omega_sq) * 4^(1/4)
    assert!((dispersion_nd(&c, &[PI, 0.0, 0.0]).unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-14);
    assert!(matches!(generator_eigenvalue(&c, &[0.0]), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn one_dimensional_reduction() {
    for alpha in [0.5, 1.3, 2.0, 3.1] {
        let chain = ChainConfig::new(ChainSize::Finite(12), alpha).unwrap();
        let lat = torus(&[12], alpha);
        for p in 0..12i64 {
            let a = finite_element_spectral(&chain, p).unwrap();
            let b = finite_element_spectral_nd(&lat, &MultiIndex::from([p])).unwrap();
            assert!((a - b).abs() < 1e-14);
        }
        let q = infinite_element_nd(&zone(1, alpha), &MultiIndex::from([3])).unwrap();
        let e = infinite_element(&ChainConfig::new(ChainSize::Infinite, alpha).unwrap(), 3).unwrap();
        assert!((q - e).abs() <= 1e-8 * e.abs().max(1e-3), "alpha={alpha}: {q} vs {e}");
    }
}

#[test]
fn local_two_dimensional_elements() {
    let c = torus(&[8, 8], 2.0).with_omega_sq(1.5).unwrap();
    let at = |p: [i64; 2]| finite_element_spectral_nd(&c, &p.into()).unwrap();
    assert!((at([0, 0]) - 6.0).abs() < 1e-14);
    assert!((at([1, 0]) + 1.5).abs() < 1e-14);
    assert!(at([1, 1]).abs() < 1e-14);
    let q = infinite_element_nd(&zone(2, 2.0), &MultiIndex::from([0, 0])).unwrap();
    assert!((q - 4.0).abs() < 1e-12);
}

#[test]
fn finite_lattice_approaches_zone_integral() {
    // periodization adds the far-field images sum_{s != 0} C |p + 64 s|^-3
    let p = [2i64, 1];
    let fin = finite_element_spectral_nd(&torus(&[64, 64], 1.0), &p.into()).unwrap();
    let inf = infinite_element_nd(&zone(2, 1.0), &p.into()).unwrap();
    let c = riesz_constant(2, 1.0).unwrap();
    let mut images = 0.0;
    for s0 in -300i64..=300 {
        for s1 in -300i64..=300 {
            if (s0, s1) != (0, 0) {
                let d0 = (p[0] + 64 * s0) as f64;
                let d1 = (p[1] + 64 * s1) as f64;
                images += c * (d0 * d0 + d1 * d1).powf(-1.5);
            }
        }
    }
    // lattice sum truncated at |s| = 300 misses about 2 pi C / (64^3 300)
    let diff = inf - fin;
    assert!((diff - images).abs() <= 0.05 * images, "{diff} vs {images}");
}

#[test]
fn zone_integral_sums_to_zero() {
    // f_0 = -sum_{p != 0} f_p; remainder beyond P bounded by the far-field law
    let alpha = 1.5;
    let cfg = zone(1, alpha);
    let p_max = 200i64;
    let mut s = infinite_element_nd(&cfg, &MultiIndex::from([0])).unwrap();
    for p in 1..=p_max {
        s += 2.0 * infinite_element_nd(&cfg, &MultiIndex::from([p])).unwrap();
    }
    let k = gamma(alpha + 1.0).unwrap() * (alpha * PI / 2.0).sin() / PI;
    let bound = 2.0 * k / alpha * (p_max as f64).powf(-alpha) * 1.05;
    assert!(s > 0.0 && s <= bound, "{s} vs {bound}");
}

#[test]
fn quadrature_is_limited_to_three_dimensions() {
    let r = infinite_element_nd(&zone(4, 1.0), &MultiIndex::from([0, 0, 0, 0]));
    assert!(matches!(r, Err(Error::Domain(_))));
    let r = infinite_element_nd(&torus(&[4, 4], 1.0), &MultiIndex::from([0, 0]));
    assert!(matches!(r, Err(Error::Domain(_))));
}

#[test]
fn three_dimensional_local_case() {
    let c = zone(3, 2.0);
    let q = infinite_element_nd(&c, &MultiIndex::from([1, 0, 0])).unwrap();
    assert!((q + 1.0).abs() < 1e-10);
    let q = infinite_element_nd(&c, &MultiIndex::from([0, 0, 0])).unwrap();
    assert!((q - 6.0).abs() < 1e-10);
}

#[test]
fn bessel_route_examples() {
    let v = bessel_integral_element(&zone(1, 2.0), &MultiIndex::from([1]), 1e-3, 1e3).unwrap();
    assert!((v + 1.0).abs() < 1e-3);
    let v = bessel_integral_element(&zone(1, 1.0), &MultiIndex::from([0]), 1e-3, 1e3).unwrap();
    assert!((v - 4.0 / PI).abs() < 1e-3 * 4.0 / PI);
    let a = bessel_integral_element(&zone(2, 0.5), &MultiIndex::from([3, -2]), 1e-3, 1e3).unwrap();
    let b = bessel_integral_element(&zone(2, 0.5), &MultiIndex::from([-3, 2]), 1e-3, 1e3).unwrap();
    assert_eq!(a, b);
}

#[test]
fn bessel_route_agrees_with_closed_form() {
    for alpha in [0.5, 1.0, 1.5, 2.5, 3.5] {
        let chain = ChainConfig::new(ChainSize::Infinite, alpha).unwrap();
        for p in 0..=4i64 {
            let b = bessel_integral_element(&zone(1, alpha), &MultiIndex::from([p]), 1e-3, 1e3).unwrap();
            let e = infinite_element(&chain, p).unwrap();
            assert!((b - e).abs() <= 1e-4 * e.abs(), "alpha={alpha} p={p}: {b} vs {e}");
        }
    }
}

#[test]
fn bessel_route_cross_check_and_errors() {
    let opts = BesselOptions { cross_check: Some(1e-3), ..BesselOptions::default() };
    let r = bessel_integral_element_with(&zone(2, 1.0), &MultiIndex::from([2, 1]), &opts).unwrap();
    assert!(r.fine.is_some());
    assert!(r.imag_residual < 1e-12);
    // an unreachable tolerance surfaces as a tolerance failure
    let strict = BesselOptions { cross_check: Some(1e-12), ..BesselOptions::default() };
    let r = bessel_integral_element_with(&zone(2, 1.0), &MultiIndex::from([2, 1]), &strict);
    assert!(matches!(r, Err(Error::ToleranceNotMet { .. })));
    assert!(matches!(bessel_integral_element(&zone(1, 4.0), &MultiIndex::from([0]), 1e-3, 1e3), Err(Error::Domain(_))));
    assert!(matches!(bessel_integral_element(&zone(1, 1.0), &MultiIndex::from([0]), 0.0, 1e3), Err(Error::Domain(_))));
}

#[test]
fn bessel_without_richardson_is_first_order() {
    let opts = BesselOptions { richardson: false, ..BesselOptions::default() };
    let r = bessel_integral_element_with(&zone(1, 1.0), &MultiIndex::from([0]), &opts).unwrap();
    let e = 4.0 / PI;
    // e^{-eps L} shifts the element by about -eps [L^{3/2}]_0
    assert!((r.value - e).abs() < 1e-2 && (r.value - e).abs() > 1e-4);
}

#[test]
fn riesz_constant_values() {
    assert!((riesz_constant(1, 1.0).unwrap() - 1.0 / PI).abs() < 1e-15);
    assert!((riesz_constant(2, 1.0).unwrap() - 0.5 / PI).abs() < 1e-15);
    for i in 0..20 {
        let alpha = 0.05 + 1.9 * (i as f64) / 19.0;
        let c = riesz_constant(1, alpha).unwrap();
        let k = gamma(alpha + 1.0).unwrap() * (alpha * PI / 2.0).sin() / PI;
        assert!((c - k).abs() < 1e-13 * k, "alpha={alpha}");
    }
    assert!(riesz_constant(3, 1.999_999).unwrap() < 1e-5);
    for bad in [0.0, 2.0, 2.5, -1.0] {
        assert!(matches!(riesz_constant(2, bad), Err(Error::Domain(_))));
    }
}

#[test]
fn asymptotic_nd() {
    for alpha in [0.4, 1.0, 1.7] {
        let chain = ChainConfig::new(ChainSize::Infinite, alpha).unwrap();
        let a = asymptotic_element_nd(&zone(1, alpha), &MultiIndex::from([9])).unwrap();
        let b = asymptotic_element(&chain, 9).unwrap();
        assert!((a - b).abs() < 1e-13 * b.abs());
    }
    let c = zone(2, 1.0);
    let a = asymptotic_element_nd(&c, &MultiIndex::from([3, 4])).unwrap();
    let b = asymptotic_element_nd(&c, &MultiIndex::from([5, 0])).unwrap();
    assert!((a - b).abs() < 1e-15);
    assert!(matches!(asymptotic_element_nd(&zone(2, 2.0), &MultiIndex::from([5, 0])), Err(Error::Domain(_))));
}

#[test]
fn block_row_sums_and_symmetry() {
    for alpha in [0.5, 1.0, 1.5, 3.0] {
        let m = assemble_block_row(&torus(&[32, 32], alpha), Convention::Laplacian).unwrap();
        assert!(m.row_sum().abs() <= 1e-12);
        assert!(m.symmetry_defect() <= 1e-14);
        let row = spectral_block_row(&torus(&[6, 5, 4], alpha)).unwrap();
        assert!(row.iter().sum::<f64>().abs() <= 1e-10);
    }
}

#[test]
fn large_lattice_uses_fast_transform() {
    // 80 x 80 is past the direct limit; compare a handful of entries to the direct sum
    let cfg = torus(&[80, 80], 0.9);
    let row = spectral_block_row(&cfg).unwrap();
    for p in [[0i64, 0], [1, 0], [3, 7], [40, 40], [79, 1]] {
        let mut direct = 0.0;
        for l0 in 0..80 {
            for l1 in 0..80 {
                let k0 = 2.0 * PI * l0 as f64 / 80.0;
                let k1 = 2.0 * PI * l1 as f64 / 80.0;
                let lam = 4.0 * ((k0 / 2.0).sin().powi(2) + (k1 / 2.0).sin().powi(2));
                direct += (k0 * p[0] as f64 + k1 * p[1] as f64).cos() * lam.powf(0.45);
            }
        }
        direct /= 6400.0;
        let got = row[(p[0] * 80 + p[1]) as usize];
        assert!((got - direct).abs() < 1e-12, "{p:?}: {got} vs {direct}");
        assert_eq!(finite_element_spectral_nd(&cfg, &p.into()).unwrap(), got);
    }
}

#[test]
fn site_cap_is_reported() {
    let cfg = torus(&[300, 300], 1.0).with_site_cap(50_000);
    assert!(matches!(
        finite_element_spectral_nd(&cfg, &MultiIndex::from([0, 0])),
        Err(Error::ResourceLimit { sites: 90_000, cap: 50_000 })
    ));
}

#[test]
fn figure_sections() {
    let alphas = [0.5, 1.0, 1.5, 2.0];
    let sections: Vec<Vec<f64>> = alphas
        .iter()
        .map(|&a| cross_section(&zone(2, a), Section::Diagonal, 65).unwrap().iter().map(|s| s.normalized).collect())
        .collect();
    for s in &sections {
        assert_eq!(s[0], 0.0);
        assert!(s.windows(2).all(|w| w[1] > w[0]));
    }
    assert_eq!(*sections[3].last().unwrap(), 1.0);
    // lambda > 1 beyond the crossing: larger alpha lies above
    let t_cross = 2.0 * (0.5f64.sqrt() / 2.0).asin();
    for i in 0..65 {
        let t = PI * i as f64 / 64.0;
        if t > t_cross + 1e-9 {
            assert!(sections.windows(2).all(|w| w[1][i] > w[0][i]));
        }
    }
    let axis = cross_section(&zone(2, 2.0), Section::Axis, 9).unwrap();
    assert_eq!(axis.last().unwrap().normalized, 1.0);
    assert!((Section::Diagonal.crossing_frequency::<f64>() - 0.35355339059327373).abs() < 1e-16);
    assert!(cross_section(&zone(1, 1.0), Section::Diagonal, 9).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cubic_symmetry(alpha in 0.1f64..3.9, n in 3usize..9, a in -8i64..8, b in -8i64..8) {
        let cfg = torus(&[n, n], alpha);
        let at = |p: [i64; 2]| finite_element_spectral_nd(&cfg, &p.into()).unwrap();
        let v = at([a, b]);
        for w in [at([-a, b]), at([a, -b]), at([b, a]), at([-b, -a])] {
            prop_assert!((v - w).abs() <= 1e-13 * v.abs().max(1.0));
        }
    }

    #[test]
    fn spectrum_bounds(alpha in 0.1f64..4.0, k in proptest::collection::vec(-PI..PI, 3)) {
        let lam = generator_eigenvalue(&zone(3, alpha), &k).unwrap();
        prop_assert!((0.0..=12.0).contains(&lam));
        let w = dispersion_nd(&zone(3, alpha), &k).unwrap();
        prop_assert!(w <= 12f64.powf(alpha / 4.0) * (1.0 + 1e-15));
    }
}
