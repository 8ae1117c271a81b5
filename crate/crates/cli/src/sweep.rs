//! Squeezing sweeps with per-point flushing and resume.
//!
//! The CSV starts with `#` comment lines (format version, a timestamp and the
//! configuration) followed by the column header. Rows are appended as points
//! finish and the file is rewritten in `log_s` order at the end, so two runs
//! of the same configuration differ only in the timestamp line. A rerun keeps
//! rows already present and only evaluates the missing squeezing values.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::Args;
use gausstopo::gaussian::{covariance_from_graph, thermal_scale};
use gausstopo::lattice::{map_cluster_to_surface, LatticeSpec};
use gausstopo::topo::{tmi, topo_report, MetricSelection, RegionSet, TopoReport, CSV_HEADER};
use rayon::prelude::*;
use serde_json::json;

use crate::args::{check_kappas, parse_list, surface_sites, FloatList, GeometryArgs, LatticeArgs};
use crate::error::{CliError, CliResult};

pub const CSV_VERSION: &str = "# gausstopo sweep v1";
const TIMESTAMP_PREFIX: &str = "# generated unix=";
const CONFIG_PREFIX: &str = "# config ";
pub const THREADS_ENV: &str = "GAUSSTOPO_THREADS";

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    #[command(flatten)]
    pub geometry: GeometryArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub log_s_min: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub log_s_max: f64,
    #[arg(long, default_value_t = 1)]
    pub steps: usize,
    /// Comma-separated thermal scales; one CSV row per scale and point.
    #[arg(long, value_parser = parse_list, default_value = "1")]
    pub kappa: FloatList,
    /// Comma-separated metrics: tee_kp, tee_lw, tln, tmi, tmi_lower, tee_upper or all.
    #[arg(long, default_value = "all")]
    pub metrics: String,
    /// CSV output.
    #[arg(long)]
    pub csv: PathBuf,
    /// JSON-lines report, one object per row (defaults to the CSV path with `.jsonl`).
    #[arg(long)]
    pub json: Option<PathBuf>,
}

/// Validated sweep configuration.
pub struct SweepConfig {
    pub spec: LatticeSpec,
    pub grid: Vec<f64>,
    pub kappas: Vec<f64>,
    pub metrics: MetricSelection,
    pub kp: RegionSet,
    pub lw: Option<RegionSet>,
    pub xi: Option<f64>,
    pub csv: PathBuf,
    pub json: PathBuf,
    /// Deterministic description written into the CSV header.
    pub fingerprint: String,
}

pub fn grid(min: f64, max: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![min];
    }
    let h = (max - min) / (steps - 1) as f64;
    (0..steps).map(|i| if i + 1 == steps { max } else { min + i as f64 * h }).collect()
}

impl SweepConfig {
    pub fn from_args(a: &SweepArgs) -> CliResult<Self> {
        if a.steps == 0 {
            return Err(CliError::Invalid("steps must be at least 1".into()));
        }
        if !(a.log_s_min.is_finite() && a.log_s_max.is_finite()) || a.log_s_min > a.log_s_max {
            return Err(CliError::Invalid(format!(
                "need finite log_s_min <= log_s_max, got {} and {}",
                a.log_s_min, a.log_s_max
            )));
        }
        let kappas = a.kappa.0.clone();
        check_kappas(&kappas)?;
        if kappas.iter().map(|k| k.to_bits()).collect::<BTreeSet<_>>().len() != kappas.len() {
            return Err(CliError::Invalid("kappa list has duplicates".into()));
        }
        let metrics = MetricSelection::parse(&a.metrics).map_err(CliError::Invalid)?;
        let spec = a.lattice.spec(a.log_s_min)?;
        // Geometry is checked here, before any state is built.
        let sites = surface_sites(&spec);
        let kp = a.geometry.kp(&spec, &sites)?;
        let lw = if metrics.tee_lw { Some(a.geometry.lw(&spec, &sites)?) } else { None };
        let json = a.json.clone().unwrap_or_else(|| a.csv.with_extension("jsonl"));
        let fingerprint = format!(
            "rows={} cols={} boundary={} log_s_min={} log_s_max={} steps={} kappa={} metrics={} {}",
            spec.rows,
            spec.cols,
            spec.boundary,
            a.log_s_min,
            a.log_s_max,
            a.steps,
            kappas.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(";"),
            a.metrics.replace(' ', ""),
            a.geometry.describe(&spec),
        );
        Ok(Self {
            grid: grid(a.log_s_min, a.log_s_max, a.steps),
            spec,
            kappas,
            metrics,
            kp,
            lw,
            xi: a.geometry.xi,
            csv: a.csv.clone(),
            json,
            fingerprint,
        })
    }
}

fn key(x: f64) -> String {
    x.to_string()
}

/// Existing output split into rows per `log_s` key.
#[derive(Default)]
struct Existing {
    csv: BTreeMap<String, Vec<String>>,
    json: BTreeMap<String, Vec<String>>,
}

fn read_existing(cfg: &SweepConfig) -> CliResult<Existing> {
    let mut out = Existing::default();
    let text = match fs::read_to_string(&cfg.csv) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
        Err(e) => return Err(CliError::io(&cfg.csv, e)),
    };
    let expected = format!("{CONFIG_PREFIX}{}", cfg.fingerprint);
    if let Some(found) = text.lines().find(|l| l.starts_with(CONFIG_PREFIX)) {
        if found != expected {
            return Err(CliError::Invalid(format!(
                "{} was written by a different sweep configuration ({found})",
                cfg.csv.display()
            )));
        }
    }
    let wanted: BTreeSet<String> = cfg.grid.iter().map(|&x| key(x)).collect();
    for line in text.lines().filter(|l| !l.starts_with('#') && *l != CSV_HEADER && !l.is_empty()) {
        let k = line.split(',').next().unwrap_or_default().to_string();
        if wanted.contains(&k) {
            out.csv.entry(k).or_default().push(line.to_string());
        }
    }
    // A point counts as done only when every thermal scale is present.
    out.csv.retain(|_, rows| rows.len() == cfg.kappas.len());
    if let Ok(text) = fs::read_to_string(&cfg.json) {
        for line in text.lines().filter(|l| !l.is_empty()) {
            let Ok(value) = serde_json::from_str::<serde_json::Value>(line) else { continue };
            if value.get("error").is_some() {
                continue;
            }
            if let Some(ls) = value.get("log_s").and_then(|v| v.as_f64()) {
                let k = key(ls);
                if out.csv.contains_key(&k) {
                    out.json.entry(k).or_default().push(line.to_string());
                }
            }
        }
    }
    Ok(out)
}

fn header(cfg: &SweepConfig) -> String {
    let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    format!("{CSV_VERSION}\n{TIMESTAMP_PREFIX}{stamp}\n{CONFIG_PREFIX}{}\n{CSV_HEADER}\n", cfg.fingerprint)
}

/// All reports for one squeezing value, one per thermal scale.
fn evaluate(cfg: &SweepConfig, log_s: f64) -> CliResult<Vec<TopoReport>> {
    let spec = cfg.spec.with_log_s(log_s);
    let mapped = map_cluster_to_surface(&spec)?;
    let pure = covariance_from_graph(&mapped.graph)?;
    let first = topo_report(&pure, log_s, cfg.kappas[0], &cfg.kp, cfg.lw.as_ref(), &cfg.metrics, cfg.xi)?;
    let mut reports = vec![first.clone()];
    for &kappa in &cfg.kappas[1..] {
        let mut r = first.clone();
        r.kappa = kappa;
        if cfg.metrics.tmi {
            r.tmi = Some(tmi(&thermal_scale(&pure, kappa)?, &cfg.kp)?);
        }
        reports.push(r);
    }
    Ok(reports)
}

fn json_line(value: &impl serde::Serialize) -> String {
    serde_json::to_string(value).expect("reports serialise")
}

struct Sink {
    csv: std::fs::File,
    json: std::fs::File,
    csv_rows: BTreeMap<String, Vec<String>>,
    json_rows: BTreeMap<String, Vec<String>>,
    failures: Vec<(String, String)>,
}

fn open_append(path: &Path) -> CliResult<std::fs::File> {
    OpenOptions::new().append(true).open(path).map_err(|e| CliError::io(path, e))
}

fn write_sorted(path: &Path, head: &str, rows: &BTreeMap<String, Vec<String>>) -> CliResult<()> {
    let mut ordered: Vec<(f64, &String)> = rows
        .iter()
        .flat_map(|(k, lines)| {
            let x: f64 = k.parse().unwrap_or(f64::NAN);
            lines.iter().map(move |l| (x, l))
        })
        .collect();
    // Rows of one point keep their thermal-scale order (stable sort).
    ordered.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut text = String::from(head);
    for (_, line) in ordered {
        text.push_str(line);
        text.push('\n');
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text).map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

fn thread_count() -> CliResult<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Invalid(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        },
        Err(_) => Ok(None),
    }
}

pub fn run(args: &SweepArgs) -> CliResult<()> {
    let cfg = SweepConfig::from_args(args)?;
    let threads = thread_count()?;
    let existing = read_existing(&cfg)?;
    let todo: Vec<f64> = cfg.grid.iter().copied().filter(|&x| !existing.csv.contains_key(&key(x))).collect();
    eprintln!("sweep: {} points, {} already present, {} to evaluate", cfg.grid.len(), cfg.grid.len() - todo.len(), todo.len());

    // Start from a valid file holding the kept rows, then append as points finish.
    let head = header(&cfg);
    write_sorted(&cfg.csv, &head, &existing.csv)?;
    write_sorted(&cfg.json, "", &existing.json)?;
    let sink = Mutex::new(Sink {
        csv: open_append(&cfg.csv)?,
        json: open_append(&cfg.json)?,
        csv_rows: existing.csv,
        json_rows: existing.json,
        failures: Vec::new(),
    });

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Invalid(format!("thread pool: {e}")))?;
    let io_error: Mutex<Option<CliError>> = Mutex::new(None);
    pool.install(|| {
        todo.par_iter().for_each(|&log_s| {
            let k = key(log_s);
            let result = evaluate(&cfg, log_s);
            let mut sink = sink.lock().expect("sink lock");
            let (csv_lines, json_lines) = match result {
                Ok(reports) => (
                    reports.iter().map(TopoReport::csv_row).collect::<Vec<_>>(),
                    reports.iter().map(json_line).collect::<Vec<_>>(),
                ),
                Err(e) => {
                    eprintln!("sweep: log_s = {k} failed: {e}");
                    sink.failures.push((k.clone(), e.to_string()));
                    (Vec::new(), vec![json_line(&json!({ "log_s": log_s, "error": e.to_string() }))])
                }
            };
            let written = csv_lines
                .iter()
                .try_for_each(|l| writeln!(sink.csv, "{l}"))
                .and_then(|_| json_lines.iter().try_for_each(|l| writeln!(sink.json, "{l}")))
                .and_then(|_| sink.csv.flush())
                .and_then(|_| sink.json.flush());
            if let Err(e) = written {
                io_error.lock().expect("error lock").get_or_insert(CliError::io(&cfg.csv, e));
            }
            if !csv_lines.is_empty() {
                sink.csv_rows.insert(k.clone(), csv_lines);
            }
            sink.json_rows.insert(k, json_lines);
        });
    });
    if let Some(e) = io_error.into_inner().expect("error lock") {
        return Err(e);
    }
    let sink = sink.into_inner().expect("sink lock");
    write_sorted(&cfg.csv, &head, &sink.csv_rows)?;
    write_sorted(&cfg.json, "", &sink.json_rows)?;
    if sink.failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::SweepFailures { failed: sink.failures.len(), total: cfg.grid.len() })
    }
}
