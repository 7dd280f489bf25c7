use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "fraclat", version, about = "Fractional lattice Laplacians, Riesz kernels and spectral diffusion")]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// First row (block row) of the fractional Laplacian matrix.
    Matrix(MatrixArgs),
    /// Normalized dispersion along cross-sections or over a grid.
    Dispersion(DispersionArgs),
    /// Riesz kernel of the line or of a periodic string.
    Kernel(KernelArgs),
    /// Lattice to continuum convergence sweep.
    Limit(LimitArgs),
    /// Exact spectral diffusion of a lattice field.
    Evolve(EvolveArgs),
}

/// Comma separated floats.
#[derive(Debug, Clone, Serialize)]
#[serde(transparent)]
pub struct FloatList(pub Vec<f64>);

fn parse_floats(s: &str) -> Result<FloatList, String> {
    let v = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    if v.is_empty() {
        return Err("empty list".into());
    }
    Ok(FloatList(v))
}

/// Axis lengths, or `inf`.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Extent {
    Finite(Vec<usize>),
    Infinite,
}

fn parse_extent(s: &str) -> Result<Extent, String> {
    if matches!(s.trim(), "inf" | "infinite") {
        return Ok(Extent::Infinite);
    }
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| format!("'{t}': {e}")))
        .collect::<Result<Vec<_>, _>>()
        .map(Extent::Finite)
}

/// String length `L`, or `inf`.
#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PeriodArg {
    Finite(f64),
    Infinite,
}

fn parse_period(s: &str) -> Result<PeriodArg, String> {
    match s.trim() {
        "inf" | "infinite" => Ok(PeriodArg::Infinite),
        t => t.parse::<f64>().map(PeriodArg::Finite).map_err(|e| format!("'{t}': {e}")),
    }
}

#[derive(Args, Debug, Serialize)]
pub struct Io {
    /// Output file; standard output when absent.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Flat `key = value` file supplying defaults for any flag.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct LatticeArgs {
    /// Order of the fractional Laplacian.
    #[arg(long)]
    pub alpha: f64,
    /// Lattice dimension.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Sites per axis as a comma list (one value is broadcast), or `inf`.
    #[arg(long = "N", value_parser = parse_extent)]
    pub sites: Extent,
    /// Frequency constant, sec^-2.
    #[arg(long = "omega-sq", default_value_t = 1.0)]
    pub omega_sq: f64,
    /// Site mass, g.
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    /// Largest number of lattice sites held in memory.
    #[arg(long = "site-cap", default_value_t = 1 << 24)]
    pub site_cap: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Closed Gamma form, infinite chain.
    Closed,
    /// Image sum of infinite-chain elements, finite chain.
    Periodized,
    /// Bloch spectral sum, finite lattice.
    Spectral,
    /// Brillouin-zone quadrature, infinite lattice.
    Quadrature,
    /// Bessel-product integral, infinite lattice.
    Bessel,
    /// Far-field power law, infinite lattice.
    Asymptotic,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConventionArg {
    /// `omega_sq L^(alpha/2)`, positive semidefinite.
    Characteristic,
    /// `-mass omega_sq L^(alpha/2)`.
    Laplacian,
}

#[derive(Args, Debug, Serialize)]
pub struct MatrixArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub lattice: LatticeArgs,
    /// Defaults to periodized (finite chain), spectral (finite lattice),
    /// closed (infinite chain) or quadrature (infinite lattice).
    #[arg(long, value_enum)]
    pub route: Option<Route>,
    #[arg(long, value_enum, default_value_t = ConventionArg::Characteristic)]
    pub convention: ConventionArg,
    /// Second route whose maximum deviation is reported.
    #[arg(long = "cross-check", value_enum)]
    pub cross_check: Option<Route>,
    /// Cross-check tolerance relative to the largest element; defaults to
    /// 1e-9, 1e-3 with the Bessel route, 5e-2 with the asymptote.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Largest offset per axis listed for infinite lattices (default 16 for a chain, 2 otherwise).
    #[arg(long = "max-offset")]
    pub max_offset: Option<u32>,
    /// Bessel route damping.
    #[arg(long, default_value_t = 1e-3)]
    pub epsilon: f64,
    /// Bessel route integration cutoff.
    #[arg(long, default_value_t = 1e3)]
    pub cutoff: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub io: Io,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SectionArg {
    /// Plane (0 1 0): kappa = (t, 0, ...).
    #[value(alias = "010")]
    Axis,
    /// Plane (1 1 0): kappa = (t, t, 0, ...).
    #[value(alias = "110")]
    Diagonal,
    /// Full grid over [0, pi]^2.
    Grid,
}

#[derive(Args, Debug, Serialize)]
pub struct DispersionArgs {
    /// Orders, comma separated.
    #[arg(long, value_parser = parse_floats, default_value = "0.5,1,1.5,2")]
    pub alpha: FloatList,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = SectionArg::Diagonal)]
    pub section: SectionArg,
    /// Points per axis over [0, pi].
    #[arg(long, default_value_t = 65)]
    pub samples: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub io: Io,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelRouteArg {
    Direct,
    Zeta,
    Infinite,
}

#[derive(Args, Debug, Serialize)]
pub struct KernelArgs {
    #[arg(long)]
    pub alpha: f64,
    /// String length in cm, or `inf`.
    #[arg(long, value_parser = parse_period, default_value = "inf")]
    pub period: PeriodArg,
    /// Defaults to zeta for a finite period, infinite otherwise.
    #[arg(long, value_enum)]
    pub route: Option<KernelRouteArg>,
    /// Abscissae in cm; otherwise `samples` points on (0, L/2] or (0, 4].
    #[arg(long, value_parser = parse_floats)]
    pub x: Option<FloatList>,
    #[arg(long, default_value_t = 32)]
    pub samples: usize,
    /// Images summed on each side by the direct route.
    #[arg(long, default_value_t = 1000)]
    pub terms: usize,
    #[arg(long = "a-const", default_value_t = 1.0)]
    pub a_const: f64,
    #[arg(long, default_value_t = 1.0)]
    pub rho0: f64,
    #[arg(long = "cross-check", value_enum)]
    pub cross_check: Option<KernelRouteArg>,
    /// Relative cross-check tolerance.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub io: Io,
}

#[derive(Args, Debug, Serialize)]
pub struct LimitArgs {
    #[arg(long)]
    pub alpha: f64,
    /// Evaluation point, cm.
    #[arg(long, default_value_t = 1.0)]
    pub x: f64,
    /// Decreasing lattice spacings, cm.
    #[arg(long, value_parser = parse_floats, default_value = "0.0625,0.015625,0.00390625")]
    pub h: FloatList,
    #[arg(long = "a-const", default_value_t = 1.0)]
    pub a_const: f64,
    #[arg(long, default_value_t = 1.0)]
    pub rho0: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub io: Io,
}

#[derive(Args, Debug, Serialize)]
pub struct EvolveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub lattice: LatticeArgs,
    /// Output times, seconds.
    #[arg(long = "t", value_parser = parse_floats, default_value = "0,1,10,100")]
    pub times: FloatList,
    #[arg(long, default_value_t = 1.0)]
    pub diffusivity: f64,
    /// `delta`, `bloch:l1[,l2,...]` or `file:PATH` (one `re` or `re,im` per line).
    #[arg(long, default_value = "delta")]
    pub initial: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub io: Io,
}
