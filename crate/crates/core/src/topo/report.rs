use std::collections::BTreeMap;

use serde::Serialize;

use super::metrics::{region_entropy, tee_kp, tee_lw, tee_upper_bound, tln_kp, tmi, tmi_lower_bound};
use super::regions::{union_of, Geometry, RegionSet};
use crate::gaussian::{symplectic_spectrum, thermal_scale, CovMatrix};
use crate::Result;

pub const CSV_HEADER: &str = "log_s,tee_kp,tee_lw,tln,tmi,tmi_lower,tee_upper,kappa";

/// Which diagnostics to evaluate for a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MetricSelection {
    pub tee_kp: bool,
    pub tee_lw: bool,
    pub tln: bool,
    pub tmi: bool,
    pub tmi_lower: bool,
    pub tee_upper: bool,
}

impl MetricSelection {
    pub fn all() -> Self {
        Self { tee_kp: true, tee_lw: true, tln: true, tmi: true, tmi_lower: true, tee_upper: true }
    }

    pub fn none() -> Self {
        Self { tee_kp: false, tee_lw: false, tln: false, tmi: false, tmi_lower: false, tee_upper: false }
    }

    /// Parses a comma-separated list such as `tee_kp,tln,tmi_lower`; `all`
    /// selects everything.
    pub fn parse(list: &str) -> std::result::Result<Self, String> {
        let mut sel = Self::none();
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item {
                "all" => sel = Self::all(),
                "tee_kp" => sel.tee_kp = true,
                "tee_lw" => sel.tee_lw = true,
                "tln" => sel.tln = true,
                "tmi" => sel.tmi = true,
                "tmi_lower" => sel.tmi_lower = true,
                "tee_upper" => sel.tee_upper = true,
                other => return Err(format!("unknown metric {other:?}")),
            }
        }
        Ok(sel)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SpectrumCounts {
    pub n_greater: usize,
    pub n_equal: usize,
}

/// Diagnostics at one squeezing value and thermal scale.
///
/// Entropic quantities other than `tmi` refer to the pure state; `tmi` is
/// evaluated on the state scaled by `kappa`.
#[derive(Debug, Clone, Serialize)]
pub struct TopoReport {
    pub log_s: f64,
    pub kappa: f64,
    pub tee_kp: Option<f64>,
    pub tee_lw: Option<f64>,
    pub tln_kp: Option<f64>,
    pub tmi: Option<f64>,
    pub tmi_lower: Option<f64>,
    pub tee_upper: Option<f64>,
    pub region_entropies: BTreeMap<String, f64>,
    pub spectra_meta: BTreeMap<String, SpectrumCounts>,
    pub geometry: BTreeMap<String, Geometry>,
    pub region_sizes: BTreeMap<String, usize>,
    pub warnings: Vec<String>,
}

fn cell(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl TopoReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.log_s,
            cell(self.tee_kp),
            cell(self.tee_lw),
            cell(self.tln_kp),
            cell(self.tmi),
            cell(self.tmi_lower),
            cell(self.tee_upper),
            self.kappa
        )
    }
}

/// Evaluates the selected diagnostics. `pure` must be the κ = 1 state. When
/// a correlation length `xi` is given, regions smaller than `3ξ` are flagged.
pub fn topo_report(
    pure: &CovMatrix,
    log_s: f64,
    kappa: f64,
    kp: &RegionSet,
    lw: Option<&RegionSet>,
    sel: &MetricSelection,
    xi: Option<f64>,
) -> Result<TopoReport> {
    let mut report = TopoReport {
        log_s,
        kappa,
        tee_kp: None,
        tee_lw: None,
        tln_kp: None,
        tmi: None,
        tmi_lower: None,
        tee_upper: None,
        region_entropies: BTreeMap::new(),
        spectra_meta: BTreeMap::new(),
        geometry: BTreeMap::new(),
        region_sizes: BTreeMap::new(),
        warnings: Vec::new(),
    };
    report.geometry.insert("kp".into(), kp.geometry.clone());
    let (a, b, c) = (kp.get("A")?, kp.get("B")?, kp.get("C")?);
    let unions = [
        ("A", a.to_vec()),
        ("B", b.to_vec()),
        ("C", c.to_vec()),
        ("AB", union_of(&[a, b])),
        ("BC", union_of(&[b, c])),
        ("AC", union_of(&[a, c])),
        ("ABC", union_of(&[a, b, c])),
    ];
    for (name, region) in &unions {
        let spec = symplectic_spectrum(pure, region)?;
        report.region_sizes.insert(format!("kp.{name}"), region.len());
        report.region_entropies.insert(format!("kp.{name}"), crate::gaussian::von_neumann_entropy(&spec));
        report
            .spectra_meta
            .insert(format!("kp.{name}"), SpectrumCounts { n_greater: spec.n_greater(), n_equal: spec.n_equal() });
    }
    if sel.tee_kp {
        report.tee_kp = Some(tee_kp(pure, kp)?);
    }
    if sel.tln {
        report.tln_kp = Some(tln_kp(pure, kp)?);
    }
    if sel.tmi {
        report.tmi = Some(tmi(&thermal_scale(pure, kappa)?, kp)?);
    }
    if sel.tmi_lower {
        report.tmi_lower = Some(tmi_lower_bound(pure, kp)?);
    }
    if sel.tee_upper {
        report.tee_upper = Some(tee_upper_bound(log_s.exp()));
    }
    if let Some(lw) = lw {
        report.geometry.insert("lw".into(), lw.geometry.clone());
        for name in ["A", "B", "C", "D"] {
            let region = lw.get(name)?;
            report.region_sizes.insert(format!("lw.{name}"), region.len());
            report.region_entropies.insert(format!("lw.{name}"), region_entropy(pure, region)?);
        }
        if sel.tee_lw {
            report.tee_lw = Some(tee_lw(pure, lw)?);
        }
    }
    if let Some(xi) = xi {
        report.warnings.extend(kp.size_warning(xi));
        report.warnings.extend(lw.and_then(|lw| lw.size_warning(xi)));
    }
    Ok(report)
}
