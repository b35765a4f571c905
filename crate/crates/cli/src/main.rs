//! `magnon-gate`: tables for the magnon-switched nuclear coupling and its CNOT gate.

mod commands;
mod scenario;
mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use scenario::Scenario;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{field}: {source}")]
    Invalid {
        field: String,
        #[source]
        source: magnon_gate::Error,
    },
    #[error(transparent)]
    Domain(#[from] magnon_gate::Error),
    #[error("writing output: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "magnon-gate", version, about = "Magnon-mediated nuclear coupling and CNOT gate tables")]
struct Cli {
    /// Scenario JSON; the built-in benchmark scenario when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the table here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Default)]
pub struct Overrides {
    /// k=0 occupation n(0), overriding W_ex*T_s.
    #[arg(long)]
    pub n0: Option<f64>,
    /// Qubit separation r_ij in lattice units.
    #[arg(long)]
    pub r: Option<usize>,
    /// Largest separation in a sweep (default N).
    #[arg(long)]
    pub r_max: Option<usize>,
    /// Packet length N for the dispersion table.
    #[arg(long)]
    pub sites: Option<usize>,
    /// Samples per drive segment.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Coupling W_ij in Hz used by the gate.
    #[arg(long)]
    pub w: Option<f64>,
    /// Free-evolution time in seconds, replacing 1/(2W).
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub h_min: f64,
    #[arg(long, default_value_t = 200.0)]
    pub h_max: f64,
    /// Number of field points in the level table.
    #[arg(long, default_value_t = 41)]
    pub steps: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Magnon band ε(k_n) over the packet grid.
    Dispersion(#[command(flatten)] Box<Overrides>),
    /// Triplet levels |1 m⟩ against field.
    Levels(#[command(flatten)] Box<Overrides>),
    /// W_ij at the configured separation.
    Coupling(#[command(flatten)] Box<Overrides>),
    /// W_ij for r = 0..=r_max.
    Sweep(#[command(flatten)] Box<Overrides>),
    /// Population and coupling through the drive schedule.
    Pump(#[command(flatten)] Box<Overrides>),
    /// Qubit fields and NMR line positions.
    Address(#[command(flatten)] Box<Overrides>),
    /// CNOT truth table and fidelity.
    Gate(#[command(flatten)] Box<Overrides>),
    /// The built-in benchmark against the quoted 15 kHz coupling.
    Reproduce,
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let scenario = match &cli.config {
        Some(path) => Scenario::load(path)?,
        None => Scenario::benchmark(),
    };
    let table = match &cli.command {
        Command::Dispersion(o) => commands::dispersion(&scenario, o)?,
        Command::Levels(o) => commands::levels(&scenario, o)?,
        Command::Coupling(o) => commands::coupling(&scenario, o)?,
        Command::Sweep(o) => commands::sweep(&scenario, o)?,
        Command::Pump(o) => commands::pump(&scenario, o)?,
        Command::Address(o) => commands::address(&scenario, o)?,
        Command::Gate(o) => commands::gate(&scenario, o)?,
        Command::Reproduce => commands::reproduce()?,
    };
    let Format::Csv = cli.format;
    let to_io = |e: csv::Error| CliError::Io(io::Error::other(e));
    match &cli.out {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            table.write_csv(&mut file).map_err(to_io)?;
            file.flush()?;
        }
        None => table.write_csv(io::stdout().lock()).map_err(to_io)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("magnon-gate: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
