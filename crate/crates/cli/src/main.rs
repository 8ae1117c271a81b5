//! `gausstopo` command-line driver.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 threshold
//! violation (`bounds` with at least one violating pair).

mod args;
mod commands;
mod error;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use args::{parse_list, FloatList, GeometryArgs, LatticeArgs, StateKind, TeeMethod};

#[derive(Debug, Parser)]
#[command(name = "gausstopo", version, about = "CV cluster and surface-code state diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a cluster or surface-code state and write it as JSON.
    Build {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, allow_hyphen_values = true)]
        log_s: f64,
        #[arg(long, value_enum, default_value = "cluster")]
        kind: StateKind,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the measurement pipeline and compare with the closed form on a torus.
    Map {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, allow_hyphen_values = true)]
        log_s: f64,
        /// Write the surface-code state here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the surface graph (edges, orientations, faces) here.
        #[arg(long)]
        graph_out: Option<PathBuf>,
    },
    /// Topological entanglement entropy (KP and/or LW).
    Tee {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[command(flatten)]
        geometry: GeometryArgs,
        #[arg(long, allow_hyphen_values = true)]
        log_s: f64,
        #[arg(long, value_enum, default_value = "both")]
        method: TeeMethod,
    },
    /// Topological log-negativity on the KP regions.
    Tln {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[command(flatten)]
        geometry: GeometryArgs,
        #[arg(long, allow_hyphen_values = true)]
        log_s: f64,
    },
    /// Topological mutual information for thermal scales and its lower bound.
    Tmi {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[command(flatten)]
        geometry: GeometryArgs,
        #[arg(long, allow_hyphen_values = true)]
        log_s: f64,
        /// Comma-separated thermal scales.
        #[arg(long, value_parser = parse_list, default_value = "1")]
        kappa: FloatList,
    },
    /// Evaluate the diagnostics over a grid of squeezing values.
    Sweep(sweep::SweepArgs),
    /// Normal-mode gap of the torus surface-code Hamiltonian.
    Spectrum {
        #[arg(long)]
        n: usize,
        /// Defaults to `n`.
        #[arg(long)]
        m: Option<usize>,
        /// Comma-separated squeezing values.
        #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
        log_s: FloatList,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// q-q correlations along the central row, with an optional decay fit.
    Correlations {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, allow_hyphen_values = true)]
        log_s: f64,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        /// Fit a double exponential to the samples.
        #[arg(long)]
        fit: bool,
        /// CSV output (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON fit report (stderr when absent).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check every q-q correlation against the analytic decay bound.
    Bounds {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, allow_hyphen_values = true)]
        log_s: f64,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        /// Write violating pairs as CSV.
        #[arg(long)]
        violations: Option<PathBuf>,
    },
    /// Closed-form TEE upper bound from the three-mode network.
    UpperBound {
        #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
        log_s: FloatList,
    },
}

fn run(cli: Cli) -> error::CliResult<()> {
    match cli.command {
        Command::Build { lattice, log_s, kind, out } => commands::build(&lattice, log_s, kind, &out),
        Command::Map { lattice, log_s, out, graph_out } => {
            commands::map(&lattice, log_s, out.as_deref(), graph_out.as_deref())
        }
        Command::Tee { lattice, geometry, log_s, method } => commands::tee(&lattice, &geometry, log_s, method),
        Command::Tln { lattice, geometry, log_s } => commands::tln(&lattice, &geometry, log_s),
        Command::Tmi { lattice, geometry, log_s, kappa } => commands::tmi(&lattice, &geometry, log_s, &kappa.0),
        Command::Sweep(args) => sweep::run(&args),
        Command::Spectrum { n, m, log_s, out } => commands::spectrum(n, m.unwrap_or(n), &log_s.0, out.as_deref()),
        Command::Correlations { lattice, log_s, kappa, fit, out, report } => {
            commands::correlations(&lattice, log_s, kappa, fit, out.as_deref(), report.as_deref())
        }
        Command::Bounds { lattice, log_s, kappa, violations } => {
            commands::bounds(&lattice, log_s, kappa, violations.as_deref())
        }
        Command::UpperBound { log_s } => commands::upper_bound(&log_s.0),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
