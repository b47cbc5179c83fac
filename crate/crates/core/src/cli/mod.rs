//! Command-line surface: run files, data emitters and the `sslab`
//! subcommands.
//!
//! Every command reads a TOML run file (see [`RunConfig`]), writes its outputs
//! below `--out`, and finishes with a `manifest.json` listing each file.
//! Exit codes: 0 success, 2 configuration error, 3 simulation blow-up, 4
//! eigensolver non-convergence, 1 anything else.

mod commands;
mod files;
mod settings;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::{
    cmd_eigen, cmd_growth, cmd_simulate, cmd_wkb, eigen_problem, error_exit_code, growth_point, initial_condition, measure_growth,
    thresholds_report, CommandOutput, GrowthRow, Status, EXIT_BLOW_UP, EXIT_CONFIG, EXIT_FAILURE,
    EXIT_NOT_CONVERGED, EXIT_SUCCESS,
};
pub use files::{csv_string, fmt_f64, fmt_opt, parse_csv, write_atomic, OutputDir, RunManifest, MANIFEST_NAME};
pub use settings::{EigenSettings, GrowthSettings, RunConfig, WkbSettings};

#[derive(Debug, Parser)]
#[command(name = "sslab", version, about = "Split-step NLS integrators and fd-SSM instability analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Run file (TOML). Thresholds fall back to defaults without one.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,

    /// Overrides `simulation.rng_seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker threads for parameter scans.
    #[arg(long, global = true, env = "SSLAB_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Integrate the NLS and write snapshots, spectra and drift.
    Simulate,
    /// Scan C, comparing simulated and eigenproblem growth rates.
    Growth,
    /// Solve the envelope eigenproblem.
    Eigen,
    /// Quantization scan, mode births and the critical-C hypothesis.
    Wkb,
    /// Print stability thresholds.
    Thresholds,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Growth => "growth",
            Command::Eigen => "eigen",
            Command::Wkb => "wkb",
            Command::Thresholds => "thresholds",
        }
    }
}

fn load(cli: &Cli) -> crate::Result<RunConfig> {
    let mut cfg = match (&cli.config, cli.command) {
        (Some(path), _) => RunConfig::load(path)?,
        (None, Command::Thresholds) => RunConfig::default(),
        (None, _) => return Err(crate::Error::Config("--config is required".into())),
    };
    if let Some(seed) = cli.seed {
        cfg.simulation.rng_seed = seed;
    }
    Ok(cfg)
}

/// Runs one invocation and returns the process exit code. Messages go to
/// stderr, threshold values to stdout.
pub fn run(cli: &Cli) -> u8 {
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("sslab: cannot set thread count: {e}");
        }
    }
    let cfg = match load(cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("sslab: {e}");
            return error_exit_code(&e);
        }
    };
    let result = match cli.command {
        Command::Thresholds => {
            for line in thresholds_report(&cfg.simulation) {
                println!("{line}");
            }
            return EXIT_SUCCESS;
        }
        Command::Simulate => cmd_simulate(&cfg, &cli.out),
        Command::Growth => cmd_growth(&cfg, &cli.out),
        Command::Eigen => cmd_eigen(&cfg, &cli.out),
        Command::Wkb => cmd_wkb(&cfg, &cli.out),
    };
    match result {
        Ok(out) => {
            match out.status {
                Status::Success => {}
                Status::BlowUp => eprintln!("sslab: simulation blew up; partial outputs written"),
                Status::NotConverged => eprintln!("sslab: some eigenpairs did not converge; partial report written"),
            }
            eprintln!("sslab {}: {} files in {}", cli.command.name(), out.manifest.outputs.len(), cli.out.display());
            out.status.exit_code()
        }
        Err(e) => {
            eprintln!("sslab {}: {e}", cli.command.name());
            error_exit_code(&e)
        }
    }
}
