use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use dicke_probe::dicke::ModelParams;
use dicke_probe::estimation::{estimation_report, EstimationOptions};
use dicke_probe::sweep::{emit_plots, figure_preset, run_sweep, FigurePreset, SweepConfig};
use dicke_probe::Error;

/// Ground-state estimation and discrimination of the diamagnetic coupling in
/// the two-oscillator Dicke model.
#[derive(Parser)]
#[command(name = "probe", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum GaugeArg {
    Coulomb,
    Dipole,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a sweep described by a JSON config file and emit CSV + plots.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (CSV and SVG files).
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Worker threads; default: one per core.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Run one of the bundled figure presets.
    Figure {
        /// fig2_left | fig2_right | fig3 | fig4 | fig5
        name: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Evaluate a single parameter point and print the report as JSON.
    Point {
        #[arg(long)]
        omega_a: f64,
        #[arg(long)]
        omega_b: f64,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        d: f64,
        #[arg(long, value_enum, default_value_t = GaugeArg::Coulomb)]
        gauge: GaugeArg,
        /// Skip the photon-counting FI (fast, closed-form-only report).
        #[arg(long)]
        skip_pc: bool,
    },
}

/// PROBE_MAX_CUTOFF caps every Fock-space cutoff used by this process.
fn env_max_cutoff() -> Option<usize> {
    let raw = std::env::var("PROBE_MAX_CUTOFF").ok()?;
    match raw.parse::<usize>() {
        Ok(v) if v >= 32 => Some(v),
        _ => {
            eprintln!("probe: ignoring invalid PROBE_MAX_CUTOFF={raw:?} (want an integer >= 32)");
            None
        }
    }
}

fn apply_env_cap(cfg: &mut SweepConfig) {
    if let Some(cap) = env_max_cutoff() {
        cfg.max_cutoff = Some(cfg.max_cutoff.map_or(cap, |c| c.min(cap)));
    }
}

fn run_configured_sweep(cfg: &mut SweepConfig, out: &PathBuf, jobs: Option<usize>) -> ExitCode {
    apply_env_cap(cfg);
    let summary = match run_sweep(cfg, out, jobs) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    match emit_plots(cfg, &summary.csv_path, out) {
        Ok(plots) => {
            println!(
                "wrote {} ({} rows, {} failed)",
                summary.csv_path.display(),
                summary.rows,
                summary.failures
            );
            for p in plots {
                println!("wrote {}", p.display());
            }
        }
        Err(e) => return fail(e),
    }
    if summary.failures > 0 {
        eprintln!(
            "probe: {} of {} points failed; see the status column",
            summary.failures, summary.rows
        );
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("probe: {e}");
    match e {
        Error::Config(_) | Error::InvalidParams(_) | Error::Io(_) => ExitCode::from(1),
        _ => ExitCode::from(2),
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Sweep { config, out, jobs } => {
            let mut cfg = match SweepConfig::from_json_file(&config) {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            run_configured_sweep(&mut cfg, &out, jobs)
        }
        Cmd::Figure { name, out, jobs } => {
            let preset: FigurePreset = match name.parse() {
                Ok(p) => p,
                Err(e) => return fail(e),
            };
            let mut cfg = figure_preset(preset);
            run_configured_sweep(&mut cfg, &out, jobs)
        }
        Cmd::Point {
            omega_a,
            omega_b,
            lambda,
            d,
            gauge,
            skip_pc,
        } => {
            let params = match ModelParams::new(omega_a, omega_b, lambda, d) {
                Ok(p) => p,
                Err(e) => return fail(e),
            };
            let params = match gauge {
                GaugeArg::Coulomb => params,
                GaugeArg::Dipole => params.dipole_gauge_map(),
            };
            let mut opts = EstimationOptions {
                skip_photon_counting: skip_pc,
                ..Default::default()
            };
            if let Some(cap) = env_max_cutoff() {
                opts.pc.max_cutoff = opts.pc.max_cutoff.min(cap);
            }
            match estimation_report(&params, &opts) {
                Ok(report) => {
                    println!("{}", serde_json::to_string_pretty(&report).unwrap());
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
    }
}
