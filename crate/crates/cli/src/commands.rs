use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use gausstopo::correlations::{axis_samples, dms_bound, fit_double_exponential, verify_bound};
use gausstopo::gaussian::{covariance_from_graph, thermal_scale, CovMatrix, GaussGraph, StateRecord};
use gausstopo::lattice::{
    cluster_graph, map_cluster_to_surface, surface_code_graph_analytic, Boundary, LatticeSpec, Site,
    SurfaceGraph,
};
use gausstopo::spectra::normal_modes;
use gausstopo::topo::{sigma_upper, tee_upper_bound, topo_report, MetricSelection, TopoReport};
use serde_json::json;

use crate::args::{check_kappas, surface_sites, GeometryArgs, LatticeArgs, StateKind, TeeMethod};
use crate::error::{CliError, CliResult};

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn to_pretty(value: &impl serde::Serialize) -> CliResult<String> {
    serde_json::to_string_pretty(value).map_err(|e| CliError::Core(gausstopo::Error::Serialization(e.to_string())))
}

fn index_map_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("state");
    out.with_file_name(format!("{stem}.modes.json"))
}

fn write_index_map(out: &Path, spec: &LatticeSpec, modes: &[Site]) -> CliResult<PathBuf> {
    let path = index_map_path(out);
    let value = json!({
        "rows": spec.rows,
        "cols": spec.cols,
        "boundary": spec.boundary,
        "modes": modes.iter().map(|s| [s.row, s.col]).collect::<Vec<_>>(),
    });
    write_file(&path, &to_pretty(&value)?)?;
    Ok(path)
}

fn surface_state(spec: &LatticeSpec) -> CliResult<(GaussGraph, Vec<Site>)> {
    let mapped = map_cluster_to_surface(spec)?;
    Ok((mapped.graph, mapped.modes))
}

fn check_kappa(kappa: f64) -> CliResult<()> {
    check_kappas(&[kappa])
}

pub fn build(lattice: &LatticeArgs, log_s: f64, kind: StateKind, out: &Path) -> CliResult<()> {
    let spec = lattice.spec(log_s)?;
    let (graph, modes) = match kind {
        StateKind::Cluster => {
            let modes = (0..spec.n_nodes()).map(|id| spec.site(id)).collect();
            (cluster_graph(&spec), modes)
        }
        StateKind::SurfacePipeline => surface_state(&spec)?,
        StateKind::SurfaceAnalytic => {
            let analytic = surface_code_graph_analytic(&spec)?;
            if analytic.approximate {
                eprintln!("warning: closed-form surface graph is only exact in the bulk of a planar lattice");
            }
            (analytic.graph, analytic.modes)
        }
    };
    let record = StateRecord::from_graph(&graph, 1.0);
    write_file(out, &record.to_json()?)?;
    let map = write_index_map(out, &spec, &modes)?;
    println!("modes: {}", graph.n_modes());
    println!("state: {}", out.display());
    println!("index map: {}", map.display());
    Ok(())
}

pub fn map(lattice: &LatticeArgs, log_s: f64, out: Option<&Path>, graph_out: Option<&Path>) -> CliResult<()> {
    let spec = lattice.spec(log_s)?;
    let (graph, modes) = surface_state(&spec)?;
    println!("modes: {}", graph.n_modes());
    if spec.boundary == Boundary::Torus {
        let analytic = surface_code_graph_analytic(&spec)?;
        println!("closed-form max diff: {:e}", graph.max_abs_diff(&analytic.graph));
    }
    if let Some(out) = out {
        write_file(out, &StateRecord::from_graph(&graph, 1.0).to_json()?)?;
        let map = write_index_map(out, &spec, &modes)?;
        println!("state: {}", out.display());
        println!("index map: {}", map.display());
    }
    if let Some(path) = graph_out {
        let sg = SurfaceGraph::new(&spec)?;
        write_file(path, &to_pretty(&sg.to_json())?)?;
        println!("surface graph: {}", path.display());
    }
    Ok(())
}

struct Prepared {
    spec: LatticeSpec,
    pure: CovMatrix,
    sites: Vec<Site>,
}

/// Validates geometry against the lattice first, then builds the state.
fn prepare(lattice: &LatticeArgs, geometry: &GeometryArgs, log_s: f64, need_lw: bool) -> CliResult<Prepared> {
    let spec = lattice.spec(log_s)?;
    let sites = surface_sites(&spec);
    geometry.kp(&spec, &sites)?;
    if need_lw {
        geometry.lw(&spec, &sites)?;
    }
    let (graph, _) = surface_state(&spec)?;
    Ok(Prepared { pure: covariance_from_graph(&graph)?, spec, sites })
}

fn report_json(
    p: &Prepared,
    geometry: &GeometryArgs,
    kappa: f64,
    sel: &MetricSelection,
    with_lw: bool,
) -> CliResult<TopoReport> {
    let kp = geometry.kp(&p.spec, &p.sites)?;
    let lw = if with_lw { Some(geometry.lw(&p.spec, &p.sites)?) } else { None };
    Ok(topo_report(&p.pure, p.spec.log_s, kappa, &kp, lw.as_ref(), sel, geometry.xi)?)
}

pub fn tee(lattice: &LatticeArgs, geometry: &GeometryArgs, log_s: f64, method: TeeMethod) -> CliResult<()> {
    let with_lw = method != TeeMethod::Kp;
    let p = prepare(lattice, geometry, log_s, with_lw)?;
    let mut sel = MetricSelection::none();
    sel.tee_kp = method != TeeMethod::Lw;
    sel.tee_lw = with_lw;
    println!("{}", to_pretty(&report_json(&p, geometry, 1.0, &sel, with_lw)?)?);
    Ok(())
}

pub fn tln(lattice: &LatticeArgs, geometry: &GeometryArgs, log_s: f64) -> CliResult<()> {
    let p = prepare(lattice, geometry, log_s, false)?;
    let mut sel = MetricSelection::none();
    sel.tee_kp = true;
    sel.tln = true;
    println!("{}", to_pretty(&report_json(&p, geometry, 1.0, &sel, false)?)?);
    Ok(())
}

pub fn tmi(lattice: &LatticeArgs, geometry: &GeometryArgs, log_s: f64, kappas: &[f64]) -> CliResult<()> {
    check_kappas(kappas)?;
    let p = prepare(lattice, geometry, log_s, false)?;
    let mut sel = MetricSelection::none();
    sel.tmi = true;
    sel.tmi_lower = true;
    let base = report_json(&p, geometry, kappas[0], &sel, false)?;
    let kp = geometry.kp(&p.spec, &p.sites)?;
    let mut reports = vec![base.clone()];
    for &kappa in &kappas[1..] {
        let mut r = base.clone();
        r.kappa = kappa;
        r.tmi = Some(gausstopo::topo::tmi(&thermal_scale(&p.pure, kappa)?, &kp)?);
        reports.push(r);
    }
    println!("{}", to_pretty(&reports)?);
    Ok(())
}

pub const SPECTRUM_HEADER: &str = "n,m,log_s,gap,gap_asymptotic,ratio";

pub fn spectrum(n: usize, m: usize, log_s: &[f64], out: Option<&Path>) -> CliResult<()> {
    if log_s.is_empty() {
        return Err(CliError::Invalid("no log s values given".into()));
    }
    let mut text = format!("{SPECTRUM_HEADER}\n");
    for &ls in log_s {
        let r = normal_modes(n, m, ls.exp())?;
        text.push_str(&format!("{n},{m},{ls},{},{},{}\n", r.gap, r.gap_asymptotic, r.gap / r.gap_asymptotic));
    }
    emit(out, &text)
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => write_file(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

pub const CORRELATION_HEADER: &str = "separation,correlation,bound_value";

pub fn correlations(
    lattice: &LatticeArgs,
    log_s: f64,
    kappa: f64,
    fit: bool,
    out: Option<&Path>,
    report: Option<&Path>,
) -> CliResult<()> {
    check_kappa(kappa)?;
    let spec = lattice.spec(log_s)?;
    let sg = SurfaceGraph::new(&spec)?;
    let (graph, _) = surface_state(&spec)?;
    let c = thermal_scale(&covariance_from_graph(&graph)?, kappa)?;
    let samples = axis_samples(&c, &sg)?;
    let bound = dms_bound(spec.s());
    let mut text = format!("{CORRELATION_HEADER}\n");
    for &(d, corr) in &samples {
        text.push_str(&format!("{d},{corr},{}\n", kappa * bound.value(d as usize)));
    }
    emit(out, &text)?;
    if fit {
        let f = fit_double_exponential(&samples)?;
        let value = json!({
            "rows": spec.rows,
            "cols": spec.cols,
            "boundary": spec.boundary,
            "log_s": log_s,
            "kappa": kappa,
            "axis": "central row of edge-modes, separation in mode steps",
            "samples": samples.len(),
            "fit": f,
            "dms_xi": bound.xi,
        });
        let text = to_pretty(&value)?;
        match report {
            Some(path) => write_file(path, &text)?,
            None => eprintln!("{text}"),
        }
    }
    Ok(())
}

pub fn bounds(lattice: &LatticeArgs, log_s: f64, kappa: f64, violations: Option<&Path>) -> CliResult<()> {
    check_kappa(kappa)?;
    let spec = lattice.spec(log_s)?;
    let sg = SurfaceGraph::new(&spec)?;
    let (graph, _) = surface_state(&spec)?;
    let c = thermal_scale(&covariance_from_graph(&graph)?, kappa)?;
    let bound = dms_bound(spec.s());
    let rep = verify_bound(&c, &sg, &bound)?;
    let summary = json!({
        "pairs_checked": rep.pairs_checked,
        "violations": rep.violations.len(),
        "max_ratio": rep.max_ratio,
        "max_excess": rep.max_excess,
        "bound": bound,
    });
    println!("{}", to_pretty(&summary)?);
    if let Some(path) = violations {
        let mut text = String::from("i,j,distance,correlation,bound\n");
        for v in &rep.violations {
            text.push_str(&format!("{},{},{},{},{}\n", v.i, v.j, v.distance, v.correlation, v.bound));
        }
        write_file(path, &text)?;
    }
    if rep.violations.is_empty() {
        Ok(())
    } else {
        Err(CliError::Threshold(format!("{} pairs exceed the decay bound", rep.violations.len())))
    }
}

pub fn upper_bound(log_s: &[f64]) -> CliResult<()> {
    if log_s.is_empty() {
        return Err(CliError::Invalid("no log s values given".into()));
    }
    let mut text = String::from("log_s,sigma1,tee_upper\n");
    for &ls in log_s {
        if !ls.is_finite() {
            return Err(CliError::Invalid(format!("log s must be finite, got {ls}")));
        }
        let s = ls.exp();
        text.push_str(&format!("{ls},{},{}\n", sigma_upper(s), tee_upper_bound(s)));
    }
    emit(None, &text)
}
