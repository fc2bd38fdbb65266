//! Command-line front end of the `ice-sim` binary.

mod commands;
mod config;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::geometry::Truncation;

pub use commands::{csv_header, Output};
pub use config::{emit_config, load_config, parse_config, Loaded, RunConfig, DEFAULT_SAMPLES, KEYS};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(#[from] crate::Error),

    #[error("check failed: {0}")]
    Check(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Numerical(_) | CliError::Check(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Numerical(_) => "numerical",
            CliError::Check(_) => "check",
            CliError::Io(_) => "io",
        }
    }

    /// One-line JSON error record.
    pub fn record(&self) -> String {
        serde_json::json!({
            "error": self.kind(),
            "exit_code": self.exit_code(),
            "message": self.to_string(),
        })
        .to_string()
    }
}

#[derive(Debug, Parser)]
#[command(name = "ice-sim", version, about = "Cavity-membrane simulator for internally coupled ears")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Named parameter set (gecko, varanus). Defaults to gecko.
    #[arg(long, global = true, conflicts_with = "config")]
    pub preset: Option<String>,

    /// TOML configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Mode truncation "n1,n2,n3,k1,k2".
    #[arg(long, global = true, value_parser = parse_truncation)]
    pub truncation: Option<Truncation>,

    /// Simulation window, s.
    #[arg(long = "time-window", global = true)]
    pub time_window: Option<f64>,

    /// Number of time samples.
    #[arg(long, global = true)]
    pub samples: Option<usize>,

    /// Reject unknown configuration keys.
    #[arg(long, global = true)]
    pub strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Tabulate cavity and membrane eigenmodes.
    Modes,
    /// Modal amplitude time series of the first-order solution.
    Simulate,
    /// Spinning-mode coupling census for n3 = 1..4.
    Coupling,
    /// Harmonic/transient decomposition of each membrane mode.
    Transient,
    /// Equivalence check of the 1-D boundary/source formulations.
    Oracle1d {
        /// Seed of the first random data set.
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Number of random data sets.
        #[arg(long, default_value_t = 20)]
        sets: usize,
    },
    /// Relaxation time, settling time, dominance and resonance summary.
    Report,
}

fn parse_truncation(s: &str) -> Result<Truncation, String> {
    let parts: Vec<u32> = s
        .split(',')
        .map(|p| p.trim().parse::<u32>().map_err(|e| format!("'{p}': {e}")))
        .collect::<Result<_, _>>()?;
    let [n1, n2, n3, k1, k2] = parts[..] else {
        return Err(format!("expected 5 comma-separated integers, got {}", parts.len()));
    };
    Ok(Truncation { cavity_n1: n1, cavity_n2: n2, cavity_n3: n3, membrane_k1: k1, membrane_k2: k2 })
}

impl Cli {
    /// Configuration from `--config` or `--preset` with flag overrides applied.
    pub fn resolve(&self) -> Result<Loaded, CliError> {
        let mut loaded = match (&self.config, &self.preset) {
            (Some(path), _) => load_config(path, self.strict)?,
            (None, preset) => Loaded {
                config: RunConfig::from_preset(preset.as_deref().unwrap_or("gecko"))?,
                warnings: Vec::new(),
            },
        };
        let c = &mut loaded.config;
        if let Some(t) = self.truncation {
            c.truncation = t;
        }
        if let Some(w) = self.time_window {
            c.window = w;
        }
        if let Some(n) = self.samples {
            c.samples = n;
        }
        if let Some(out) = &self.out {
            c.output_dir = out.clone();
        }
        c.validate()?;
        Ok(loaded)
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let Loaded { config, warnings } = cli.resolve()?;
    let mut out = match cli.command {
        Command::Modes => commands::modes(&config),
        Command::Simulate => commands::simulate(&config),
        Command::Coupling => commands::coupling(&config),
        Command::Transient => commands::transient(&config),
        Command::Oracle1d { seed, sets } => commands::oracle1d(&config, seed, sets),
        Command::Report => commands::report(&config),
    }?;
    out.warnings.splice(0..0, warnings);
    Ok(out)
}
