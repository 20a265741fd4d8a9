//! Command-line driver for the swell simulator.
//!
//! Every subcommand reads a TOML run configuration (see [`config::SimConfig`])
//! and writes CSV files into the run's output directory.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use config::SimConfig;
pub use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "swell", version, about = "Frequency-domain ASV simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Override the sea-state seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Override the time step, s.
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    /// Override the execution mode.
    #[arg(long, global = true, value_parser = ["A", "B", "C"])]
    pub mode: Option<String>,
    /// Override the output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Only report errors.
    #[arg(long, short, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the configured vehicles and write their trajectories.
    Simulate { config: PathBuf },
    /// Mean significant motion amplitudes over a grid of wave heights and headings.
    Trends { config: PathBuf },
    /// Real-time ratio sweeps over wave counts and swarm sizes.
    Benchmark { config: PathBuf },
    /// Dump the component waves of the configured sea.
    WaveStats { config: PathBuf },
    /// Print a configuration with all defaults filled in (an example when no file is given).
    ConfigDump { config: Option<PathBuf> },
}

impl Cli {
    /// Applies the command-line overrides to a loaded configuration.
    pub fn apply_overrides(&self, config: &mut SimConfig) -> Result<(), CliError> {
        if let Some(seed) = self.seed {
            config.sea_state.seed = seed;
        }
        if let Some(dt) = self.dt {
            config.run.dt = dt;
        }
        if let Some(mode) = &self.mode {
            config.run.mode = match mode.as_str() {
                "A" => config::Mode::A,
                "B" => config::Mode::B,
                _ => config::Mode::C,
            };
        }
        if let Some(out) = &self.out {
            config.run.output_dir = out.clone();
        }
        config.validate()
    }

    fn load(&self, path: &std::path::Path) -> Result<SimConfig, CliError> {
        let mut config = SimConfig::load(path)?;
        self.apply_overrides(&mut config)?;
        Ok(config)
    }
}

/// Runs a parsed command line and returns the process exit status.
pub fn run(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let say = |msg: String| {
        if !cli.quiet {
            println!("{msg}");
        }
    };
    match &cli.command {
        Command::Simulate { config } => {
            let config = cli.load(config)?;
            let out = commands::run_simulate(&config)?;
            say(commands::SUMMARY_HEADER.to_string());
            for (i, v) in out.vehicles.iter().enumerate() {
                say(v.csv_row(i));
            }
            say(format!(
                "simulated {:.2} s in {:.3} s wall time ({:.1}x real time)",
                out.report.sim_time, out.report.wall_time, out.report.ratio
            ));
        }
        Command::Trends { config } => {
            let config = cli.load(config)?;
            let (path, cells) = commands::run_trend_study(&config)?;
            say(format!("{} cells written to {}", cells.len(), path.display()));
        }
        Command::Benchmark { config } => {
            let config = cli.load(config)?;
            say(swell_core::PerfReport::CSV_HEADER.to_string());
            let (path, _) = commands::run_benchmark(&config, |r| say(r.csv_row()))?;
            say(format!("written to {}", path.display()));
        }
        Command::WaveStats { config } => {
            let config = cli.load(config)?;
            let s = commands::run_wave_stats(&config)?;
            say(commands::WAVE_SUMMARY_HEADER.to_string());
            say(s.csv_row());
        }
        Command::ConfigDump { config } => {
            let config = match config {
                Some(path) => cli.load(path)?,
                None => {
                    let mut c = SimConfig::example();
                    cli.apply_overrides(&mut c)?;
                    c
                }
            };
            print!("{}", config.to_toml());
        }
    }
    Ok(())
}
