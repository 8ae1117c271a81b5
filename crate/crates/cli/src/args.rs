use clap::{Args, ValueEnum};
use gausstopo::lattice::{measurement_pattern, Boundary, LatticeSpec, Site};
use gausstopo::topo::{kp_regions, lw_regions, RegionSet};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Args)]
pub struct LatticeArgs {
    /// Cluster rows.
    #[arg(long)]
    pub rows: usize,
    /// Cluster columns.
    #[arg(long)]
    pub cols: usize,
    #[arg(long, default_value = "planar")]
    pub boundary: Boundary,
}

impl LatticeArgs {
    pub fn spec(&self, log_s: f64) -> CliResult<LatticeSpec> {
        if !log_s.is_finite() {
            return Err(CliError::Invalid(format!("log s must be finite, got {log_s}")));
        }
        Ok(LatticeSpec::new(self.rows, self.cols, self.boundary, log_s)?)
    }
}

/// KP disk and LW annulus parameters, in 0-based cluster coordinates.
#[derive(Debug, Clone, Args)]
pub struct GeometryArgs {
    /// Centre `row,col` of the KP disk (defaults to the lattice centre).
    #[arg(long, value_parser = parse_pair)]
    pub kp_center: Option<(f64, f64)>,
    #[arg(long, default_value_t = 7.0)]
    pub kp_radius: f64,
    /// Centre `row,col` of the LW annulus (defaults to the lattice centre).
    #[arg(long, value_parser = parse_pair)]
    pub lw_center: Option<(f64, f64)>,
    #[arg(long, default_value_t = 6.0)]
    pub lw_inner: f64,
    #[arg(long, default_value_t = 3.0)]
    pub lw_width: f64,
    /// Correlation length used for region-size warnings.
    #[arg(long)]
    pub xi: Option<f64>,
}

pub fn lattice_centre(spec: &LatticeSpec) -> (f64, f64) {
    ((spec.rows as f64 - 1.0) / 2.0, (spec.cols as f64 - 1.0) / 2.0)
}

/// Sites of the surface-code modes, in mode order. Needs no numerics, so
/// geometry can be validated before any state is built.
pub fn surface_sites(spec: &LatticeSpec) -> Vec<Site> {
    measurement_pattern(spec).kept.iter().map(|&id| spec.site(id)).collect()
}

impl GeometryArgs {
    pub fn kp(&self, spec: &LatticeSpec, sites: &[Site]) -> CliResult<RegionSet> {
        let center = self.kp_center.unwrap_or_else(|| lattice_centre(spec));
        Ok(kp_regions(spec, sites, center, self.kp_radius)?)
    }

    pub fn lw(&self, spec: &LatticeSpec, sites: &[Site]) -> CliResult<RegionSet> {
        let center = self.lw_center.unwrap_or_else(|| lattice_centre(spec));
        Ok(lw_regions(spec, sites, center, self.lw_inner, self.lw_width)?)
    }

    /// Compact description used in output headers.
    pub fn describe(&self, spec: &LatticeSpec) -> String {
        let kc = self.kp_center.unwrap_or_else(|| lattice_centre(spec));
        let lc = self.lw_center.unwrap_or_else(|| lattice_centre(spec));
        format!(
            "kp_center={};{} kp_radius={} lw_center={};{} lw_inner={} lw_width={} xi={}",
            kc.0,
            kc.1,
            self.kp_radius,
            lc.0,
            lc.1,
            self.lw_inner,
            self.lw_width,
            self.xi.map(|x| x.to_string()).unwrap_or_else(|| "none".into())
        )
    }
}

pub fn parse_pair(text: &str) -> Result<(f64, f64), String> {
    let (a, b) = text.split_once(',').ok_or_else(|| format!("expected `row,col`, got {text:?}"))?;
    let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("{s:?}: {e}"));
    Ok((parse(a)?, parse(b)?))
}

/// Comma-separated list of reals, e.g. `1,10`.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatList(pub Vec<f64>);

pub fn parse_list(text: &str) -> Result<FloatList, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|e| format!("{s:?}: {e}")))
        .collect::<Result<_, _>>()
        .map(FloatList)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateKind {
    Cluster,
    SurfacePipeline,
    SurfaceAnalytic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TeeMethod {
    Kp,
    Lw,
    Both,
}

pub fn check_kappas(kappas: &[f64]) -> CliResult<()> {
    if kappas.is_empty() {
        return Err(CliError::Invalid("kappa list is empty".into()));
    }
    if let Some(k) = kappas.iter().find(|k| !(**k >= 1.0) || !k.is_finite()) {
        return Err(CliError::Invalid(format!("kappa must be a finite value >= 1, got {k}")));
    }
    Ok(())
}
