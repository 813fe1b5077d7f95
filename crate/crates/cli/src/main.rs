//! `sc-sep`: photon-fluid spin-charge separation toolkit.
//!
//! Subcommands map TOML run configs onto the library:
//! `params` (effective parameters + regime checks), `spectrum` (D(ω,q)
//! grid), `peaks` (per-momentum peak extraction and velocity fits),
//! `evolve` (split-step dynamics with front tracking).
//!
//! Exit codes: 0 success; 1 configuration, parse, or I/O error;
//! 2 regime violation (demixing / not separated / not repulsive);
//! 3 numerical analysis failure (unresolved peaks, diverged quadrature,
//! instability, no detectable front).

mod commands;
mod config;
mod output;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use config::RunConfig;
use sc_sep_core::dynamics::DynamicsError;
use sc_sep_core::params::ParamsError;
use sc_sep_core::spectral::SpectralError;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config contents, or file shapes → exit 1.
    Config(String),
    /// I/O failure → exit 1.
    Io(String),
    /// Parameters land outside the spin-charge-separated regime → exit 2.
    Regime(String),
    /// The computation itself failed → exit 3.
    Analysis(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Regime(_) => 2,
            CliError::Analysis(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m)
            | CliError::Io(m)
            | CliError::Regime(m)
            | CliError::Analysis(m) => m,
        }
    }
}

impl From<ParamsError> for CliError {
    fn from(e: ParamsError) -> Self {
        match e {
            ParamsError::InvalidConfig(_) => CliError::Config(e.to_string()),
            ParamsError::NotSeparated(_)
            | ParamsError::Demixing(_)
            | ParamsError::NonRepulsive(_) => CliError::Regime(e.to_string()),
        }
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::InvalidRequest(_) => CliError::Config(e.to_string()),
            _ => CliError::Analysis(e.to_string()),
        }
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::Geometry(_) | DynamicsError::Invalid(_) => {
                CliError::Config(e.to_string())
            }
            DynamicsError::Stability { .. } | DynamicsError::NoFront(_) => {
                CliError::Analysis(e.to_string())
            }
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "sc-sep",
    version,
    about = "Spin-charge separation of polarized photons: parameters, spectra, dynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// TOML run configuration.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Output directory (overrides [output].directory; default "out").
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Derive effective fluid and Luttinger parameters; check the regime.
    Params(CommonArgs),
    /// Evaluate the density response |D(omega, q)| on the configured grid.
    Spectrum(CommonArgs),
    /// Extract the two dispersion peaks at chosen momenta.
    Peaks(PeaksArgs),
    /// Run the two-species split-step evolution and track the front.
    Evolve(CommonArgs),
}

#[derive(Args, Debug)]
struct PeaksArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated momenta; three or more add velocity fits.
    /// Defaults to the midpoint of the configured q range.
    #[arg(long, value_name = "LIST", value_delimiter = ',', allow_hyphen_values = true)]
    q: Vec<f64>,
}

/// Honors SC_SEP_THREADS for the rayon pool; unset means one thread per
/// core. Must run before any parallel work.
fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("SC_SEP_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| {
            CliError::Config(format!(
                "SC_SEP_THREADS must be a positive integer, got {raw:?}"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot size thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    let (common, q): (&CommonArgs, Option<&[f64]>) = match &cli.command {
        Command::Params(c) | Command::Spectrum(c) | Command::Evolve(c) => (c, None),
        Command::Peaks(p) => (&p.common, Some(&p.q)),
    };
    let cfg = RunConfig::load(&common.config)?;
    let out = cfg.out_dir(common.out.as_deref());
    match &cli.command {
        Command::Params(_) => commands::run_params(&cfg, &out),
        Command::Spectrum(_) => commands::run_spectrum(&cfg, &out),
        Command::Peaks(_) => commands::run_peaks(&cfg, &out, q.unwrap_or(&[])),
        Command::Evolve(_) => commands::run_evolve(&cfg, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
