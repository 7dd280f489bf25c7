use std::f64::consts::PI;

use fraclat::chain1d::{
    asymptotic_element, infinite_element, infinite_element_quadrature, periodized_row, spectral_row,
};
use fraclat::continuum::{continuum_limit_check, periodic_kernel_direct, periodic_kernel_zeta, riesz_kernel_infinite};
use fraclat::dynamics::evolve_diffusion;
use fraclat::lattice_nd::{
    asymptotic_element_nd, bessel_integral_element_with, cross_section, dispersion_nd_normalized, infinite_element_nd,
    spectral_block_row, BesselOptions, Section,
};
use fraclat::{
    ChainConfig, ChainSize, ContinuumConfig, Convention, FieldState, LatticeConfig, LatticeExtent, MultiIndex, Period,
    SiteConfig,
};
use num_complex::Complex;
use serde_json::{json, Value};

use crate::args::{
    ConventionArg, DispersionArgs, EvolveArgs, Extent, KernelArgs, KernelRouteArg, LatticeArgs, LimitArgs, MatrixArgs,
    PeriodArg, Route, SectionArg,
};
use crate::error::CliError;
use crate::output::{fmt_num, write_csv, write_json, Manifest};

fn params<T: serde::Serialize>(a: &T) -> Value {
    serde_json::to_value(a).unwrap_or(Value::Null)
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

/// Axis lengths after broadcasting a single value over `n` axes.
fn finite_dims(l: &LatticeArgs) -> Result<Option<Vec<usize>>, CliError> {
    if l.n == 0 {
        return Err(invalid("--n must be at least 1"));
    }
    match &l.sites {
        Extent::Infinite => Ok(None),
        Extent::Finite(d) if d.len() == 1 => Ok(Some(vec![d[0]; l.n])),
        Extent::Finite(d) if d.len() == l.n => Ok(Some(d.clone())),
        Extent::Finite(d) => Err(invalid(format!("--N lists {} axes but --n is {}", d.len(), l.n))),
    }
}

fn lattice_config(l: &LatticeArgs) -> Result<LatticeConfig<f64>, CliError> {
    let extent = match finite_dims(l)? {
        Some(d) => LatticeExtent::Finite(d),
        None => LatticeExtent::Infinite(l.n),
    };
    let cfg =
        LatticeConfig::new(extent, l.alpha)?.with_omega_sq(l.omega_sq)?.with_mass(l.mass)?.with_site_cap(l.site_cap);
    if let LatticeExtent::Finite(_) = cfg.extent {
        cfg.sites()?;
    }
    Ok(cfg)
}

fn chain_config(l: &LatticeArgs) -> Result<ChainConfig<f64>, CliError> {
    let size = match finite_dims(l)? {
        Some(d) => ChainSize::Finite(d[0]),
        None => ChainSize::Infinite,
    };
    Ok(ChainConfig::new(size, l.alpha)?.with_omega_sq(l.omega_sq)?.with_mass(l.mass)?)
}

/// Offsets with `max >= p_1 >= ... >= p_n >= 0`; cubic symmetry gives the rest.
fn wedge(n: usize, max: i64) -> Vec<Vec<i64>> {
    fn rec(prefix: &mut Vec<i64>, n: usize, bound: i64, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for v in 0..=bound {
            prefix.push(v);
            rec(prefix, n, v, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), n, max, &mut out);
    out.sort_by_key(|p| p.iter().map(|v| v * v).sum::<i64>());
    out
}

fn route_name(r: Route) -> &'static str {
    match r {
        Route::Closed => "closed",
        Route::Periodized => "periodized",
        Route::Spectral => "spectral",
        Route::Quadrature => "quadrature",
        Route::Bessel => "bessel",
        Route::Asymptotic => "asymptotic",
    }
}

/// Characteristic-convention elements: the full first row of a finite
/// lattice, or one value per offset of an infinite one.
fn elements(a: &MatrixArgs, route: Route, offsets: &[Vec<i64>]) -> Result<Vec<f64>, CliError> {
    let l = &a.lattice;
    let finite = finite_dims(l)?.is_some();
    let needs_finite = matches!(route, Route::Periodized | Route::Spectral);
    if finite != needs_finite {
        let kind = if needs_finite { "a finite" } else { "an infinite" };
        return Err(invalid(format!("route {} needs {kind} lattice", route_name(route))));
    }
    if l.n > 1 && matches!(route, Route::Periodized | Route::Closed) {
        return Err(invalid(format!("route {} is one-dimensional", route_name(route))));
    }
    if finite {
        let lat = lattice_config(l)?;
        return Ok(match (route, l.n) {
            (Route::Periodized, _) => periodized_row(&chain_config(l)?)?,
            (_, 1) => spectral_row(&chain_config(l)?)?,
            _ => spectral_block_row(&lat)?,
        });
    }
    let lat = lattice_config(l)?;
    let chain = chain_config(l)?;
    let opts = BesselOptions { epsilon: a.epsilon, cutoff: a.cutoff, ..BesselOptions::default() };
    offsets
        .iter()
        .map(|p| {
            let mi = MultiIndex::new(p.clone());
            let v = match route {
                Route::Closed => infinite_element(&chain, p[0])?,
                Route::Quadrature if l.n == 1 => infinite_element_quadrature(&chain, p[0])?,
                Route::Quadrature => infinite_element_nd(&lat, &mi)?,
                Route::Bessel => bessel_integral_element_with(&lat, &mi, &opts)?.value,
                Route::Asymptotic if p.iter().all(|&v| v == 0) => f64::NAN,
                Route::Asymptotic if l.n == 1 => asymptotic_element(&chain, p[0])?,
                Route::Asymptotic => asymptotic_element_nd(&lat, &mi)?,
                Route::Periodized | Route::Spectral => unreachable!("finite routes handled above"),
            };
            Ok(v)
        })
        .collect()
}

pub fn matrix(a: &MatrixArgs) -> Result<(), CliError> {
    let l = &a.lattice;
    let dims = finite_dims(l)?;
    let route = a.route.unwrap_or(match (&dims, l.n) {
        (Some(_), 1) => Route::Periodized,
        (Some(_), _) => Route::Spectral,
        (None, 1) => Route::Closed,
        (None, _) => Route::Quadrature,
    });
    let offsets = match dims {
        Some(_) => Vec::new(),
        None => wedge(l.n, a.max_offset.map_or(if l.n == 1 { 16 } else { 2 }, i64::from)),
    };
    let convention = match a.convention {
        ConventionArg::Characteristic => Convention::Characteristic,
        ConventionArg::Laplacian => Convention::Laplacian,
    };
    let scale = convention.scale(l.mass);
    let values: Vec<f64> = elements(a, route, &offsets)?.into_iter().map(|v| scale * v).collect();

    let mut m = Manifest::new("matrix", params(a));
    let mut failure = None;
    if let Some(check) = a.cross_check {
        let other: Vec<f64> = elements(a, check, &offsets)?.into_iter().map(|v| scale * v).collect();
        let norm = values.iter().filter(|v| v.is_finite()).fold(0.0f64, |m, v| m.max(v.abs()));
        let dev = values
            .iter()
            .zip(&other)
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
            / norm;
        let tol = a.tol.unwrap_or(if route == Route::Asymptotic || check == Route::Asymptotic {
            5e-2
        } else if route == Route::Bessel || check == Route::Bessel {
            1e-3
        } else {
            1e-9
        });
        let passed = dev <= tol;
        eprintln!(
            "cross-check {} vs {}: max deviation {dev:e} (tolerance {tol:e})",
            route_name(route),
            route_name(check)
        );
        m.set("cross_check", json!({"route": route_name(check), "deviation": dev, "tolerance": tol, "passed": passed}));
        if !passed {
            failure = Some(format!(
                "tolerance not met: {} vs {} deviates by {dev:e} > {tol:e}",
                route_name(route),
                route_name(check)
            ));
        }
    }
    let mut data = json!({
        "route": route_name(route),
        "convention": convention.name(),
        "alpha": l.alpha,
        "n": l.n,
        "omega_sq": l.omega_sq,
        "mass": l.mass,
    });
    let obj = data.as_object_mut().expect("object literal");
    match dims {
        Some(d) => {
            let sum: f64 = fraclat::compensated_sum(values.iter().copied());
            obj.insert("dims".into(), json!(d));
            obj.insert("row_sum".into(), json!(sum));
            obj.insert("first_row".into(), json!(values));
        }
        None => {
            let el: Vec<Value> = offsets
                .iter()
                .zip(&values)
                .map(|(p, v)| json!({"offset": p, "value": if v.is_finite() { json!(v) } else { Value::Null }}))
                .collect();
            obj.insert("dims".into(), Value::Null);
            obj.insert("elements".into(), Value::Array(el));
        }
    }
    write_json(a.io.out.as_deref(), &m, data)?;
    failure.map_or(Ok(()), |f| Err(CliError::Tolerance(f)))
}

pub fn dispersion(a: &DispersionArgs) -> Result<(), CliError> {
    if a.samples < 2 {
        return Err(invalid("--samples must be at least 2"));
    }
    let configs = a.alpha.0.iter().map(|&al| LatticeConfig::infinite(a.n, al)).collect::<Result<Vec<_>, _>>()?;
    let mut header = Vec::new();
    let mut rows = Vec::new();
    let mut m = Manifest::new("dispersion", params(a));
    let grid = |i: usize| PI * i as f64 / (a.samples - 1) as f64;
    match a.section {
        SectionArg::Grid => {
            if a.n != 2 {
                return Err(invalid("grid output is two-dimensional; use --n 2"));
            }
            header.extend(["kappa1".to_string(), "kappa2".to_string()]);
            for i in 0..a.samples {
                for j in 0..a.samples {
                    let k = [grid(i), grid(j)];
                    let mut row = vec![fmt_num(k[0]), fmt_num(k[1])];
                    for c in &configs {
                        row.push(fmt_num(dispersion_nd_normalized(c, &k)?));
                    }
                    rows.push(row);
                }
            }
            m.set("normalizer", json!((4.0 * a.n as f64).sqrt()));
        }
        s => {
            let section = if s == SectionArg::Axis { Section::Axis } else { Section::Diagonal };
            header.push("t".to_string());
            let columns =
                configs.iter().map(|c| cross_section(c, section, a.samples)).collect::<Result<Vec<_>, _>>()?;
            for i in 0..a.samples {
                let mut row = vec![fmt_num(columns[0][i].t)];
                row.extend(columns.iter().map(|c| fmt_num(c[i].normalized)));
                rows.push(row);
            }
            m.set("plane", json!(section.miller()));
            m.set("normalizer", json!(section.normalizer::<f64>()));
            m.set("crossing_frequency", json!(section.crossing_frequency::<f64>()));
        }
    }
    header.extend(a.alpha.0.iter().map(|al| format!("alpha={}", fmt_num(*al))));
    write_csv(a.io.out.as_deref(), &m, &header, &rows)
}

fn kernel_name(r: KernelRouteArg) -> &'static str {
    match r {
        KernelRouteArg::Direct => "direct",
        KernelRouteArg::Zeta => "zeta",
        KernelRouteArg::Infinite => "infinite",
    }
}

pub fn kernel(a: &KernelArgs) -> Result<(), CliError> {
    let period = match a.period {
        PeriodArg::Finite(l) => Period::Finite(l),
        PeriodArg::Infinite => Period::Infinite,
    };
    let cfg = ContinuumConfig::new(period, a.alpha)?.with_a_const(a.a_const)?.with_rho0(a.rho0)?;
    let route = a.route.unwrap_or(match period {
        Period::Finite(_) => KernelRouteArg::Zeta,
        Period::Infinite => KernelRouteArg::Infinite,
    });
    let xs: Vec<f64> = match &a.x {
        Some(x) => x.0.clone(),
        None => {
            if a.samples == 0 {
                return Err(invalid("--samples must be positive"));
            }
            let span = match period {
                Period::Finite(l) => l / 2.0,
                Period::Infinite => 4.0,
            };
            (1..=a.samples).map(|k| span * k as f64 / a.samples as f64).collect()
        }
    };
    let eval = |r: KernelRouteArg, x: f64| -> Result<(f64, f64), CliError> {
        Ok(match r {
            KernelRouteArg::Infinite => (riesz_kernel_infinite(a.alpha, x)?, 0.0),
            KernelRouteArg::Zeta => (periodic_kernel_zeta(&cfg, x)?, 0.0),
            KernelRouteArg::Direct => {
                let b = periodic_kernel_direct(&cfg, x, a.terms)?;
                (b.value, b.bound)
            }
        })
    };
    let mut header = vec!["x".to_string(), "K".to_string()];
    if route == KernelRouteArg::Direct {
        header.push("bound".into());
    }
    if let Some(c) = a.cross_check {
        header.push(format!("K_{}", kernel_name(c)));
    }
    let mut rows = Vec::with_capacity(xs.len());
    let mut dev = 0.0f64;
    for &x in &xs {
        let (k, bound) = eval(route, x)?;
        let mut row = vec![fmt_num(x), fmt_num(k)];
        if route == KernelRouteArg::Direct {
            row.push(fmt_num(bound));
        }
        if let Some(c) = a.cross_check {
            let (k2, _) = eval(c, x)?;
            dev = dev.max(((k - k2) / k).abs());
            row.push(fmt_num(k2));
        }
        rows.push(row);
    }
    let mut m = Manifest::new("kernel", params(a));
    m.set("route", json!(kernel_name(route)));
    let mut failure = None;
    if let Some(c) = a.cross_check {
        let passed = dev <= a.tol;
        eprintln!("cross-check {} vs {}: max relative deviation {dev:e}", kernel_name(route), kernel_name(c));
        m.set("cross_check", json!({"route": kernel_name(c), "deviation": dev, "tolerance": a.tol, "passed": passed}));
        if !passed {
            failure = Some(format!("tolerance not met: kernel routes deviate by {dev:e} > {:e}", a.tol));
        }
    }
    write_csv(a.io.out.as_deref(), &m, &header, &rows)?;
    failure.map_or(Ok(()), |f| Err(CliError::Tolerance(f)))
}

pub fn limit(a: &LimitArgs) -> Result<(), CliError> {
    let cfg = ContinuumConfig::new(Period::Infinite, a.alpha)?.with_a_const(a.a_const)?.with_rho0(a.rho0)?;
    let r = continuum_limit_check(a.alpha, a.x, &a.h.0, &cfg)?;
    let header: Vec<String> = ["h", "site", "rounded", "omega_sq", "mass", "estimate", "target", "deviation"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let rows: Vec<Vec<String>> = r
        .steps
        .iter()
        .map(|s| {
            vec![
                fmt_num(s.h),
                s.site.to_string(),
                s.rounded.to_string(),
                fmt_num(s.omega_sq),
                fmt_num(s.mass),
                fmt_num(s.estimate),
                fmt_num(s.target),
                fmt_num(s.deviation),
            ]
        })
        .collect();
    let mut m = Manifest::new("limit", params(a));
    m.set("monotone", json!(r.monotone));
    m.set("jitter", json!(r.jitter));
    m.set("final_deviation", json!(r.final_deviation()));
    if !r.monotone {
        eprintln!("warning: deviations do not decrease monotonically");
    }
    write_csv(a.io.out.as_deref(), &m, &header, &rows)
}

fn parse_field_file(path: &str) -> Result<Vec<Complex<f64>>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {path}: {e}")))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split(',').map(str::trim).collect();
        let num = |s: &str| s.parse::<f64>().map_err(|e| invalid(format!("{path}:{}: {e}", i + 1)));
        let v = match parts.as_slice() {
            [re] => Complex::new(num(re)?, 0.0),
            [re, im] => Complex::new(num(re)?, num(im)?),
            _ => return Err(invalid(format!("{path}:{}: expected re or re,im", i + 1))),
        };
        out.push(v);
    }
    Ok(out)
}

pub fn evolve(a: &EvolveArgs) -> Result<(), CliError> {
    let l = &a.lattice;
    if finite_dims(l)?.is_none() {
        return Err(invalid("evolution needs a finite lattice"));
    }
    let site: SiteConfig<f64> = if l.n == 1 {
        let cfg = chain_config(l)?;
        let n = cfg.size.finite().unwrap_or(0);
        if n > l.site_cap {
            return Err(fraclat::Error::ResourceLimit { sites: n, cap: l.site_cap }.into());
        }
        SiteConfig::Chain(cfg)
    } else {
        SiteConfig::Lattice(lattice_config(l)?)
    };
    let init = a.initial.as_str();
    let state = if init == "delta" {
        FieldState::delta(site)?
    } else if let Some(modes) = init.strip_prefix("bloch:") {
        let mode = modes
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| invalid(format!("bloch mode '{t}': {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        FieldState::bloch(site, &mode)?
    } else if let Some(path) = init.strip_prefix("file:") {
        FieldState::new(site, parse_field_file(path)?)?
    } else {
        return Err(invalid(format!("unknown initial condition '{init}'")));
    };
    let header: Vec<String> = ["t", "site", "re", "im"].iter().map(|s| s.to_string()).collect();
    let mut rows = Vec::new();
    let mut totals = Vec::new();
    for &t in &a.times.0 {
        let s = evolve_diffusion(&state, t, a.diffusivity)?;
        let total = s.total();
        totals.push(json!([t, total.re, total.im, s.max_norm()]));
        for (p, v) in s.values.iter().enumerate() {
            rows.push(vec![fmt_num(t), p.to_string(), fmt_num(v.re), fmt_num(v.im)]);
        }
    }
    let mut m = Manifest::new("evolve", params(a));
    m.set("dims", json!(site_dims(&state)));
    m.set("totals", json!({"columns": ["t", "sum_re", "sum_im", "max_norm"], "rows": totals}));
    write_csv(a.io.out.as_deref(), &m, &header, &rows)
}

fn site_dims(s: &FieldState<f64>) -> Vec<usize> {
    s.config.dims().unwrap_or_default()
}
