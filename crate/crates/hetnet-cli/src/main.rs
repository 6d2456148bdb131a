//! `hetnet`: catalogue, indices, simulation and basin estimates from the
//! command line.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use output::{Format, Sink};

#[derive(Debug, Parser)]
#[command(name = "hetnet", version, about = "Simple heteroclinic networks in R^4")]
struct Cli {
    /// Output format; tables default to csv, documents to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write results into this directory instead of stdout.
    #[arg(long, global = true, value_name = "DIR")]
    output: Option<PathBuf>,
    /// Seed for random sampling (overrides the experiment config).
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    /// Field parameter file (JSON) instead of the shipped defaults.
    #[arg(long, global = true, value_name = "FILE")]
    params: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// The eight simple networks with their cycle types.
    List,
    /// Full structure of one network plus its validation report.
    Describe { network: String },
    /// Structural checks for a catalogue id or a network JSON file; with
    /// --params also the field constraints.
    Validate { network: String },
    /// Stability indices of every cycle, cross-checked against closed forms.
    Indices { network: String },
    /// Integrate one orbit and report its itinerary.
    Simulate {
        network: String,
        /// Initial point as four comma-separated numbers.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        x0: Vec<f64>,
        #[arg(long, default_value_t = 100.0)]
        t_max: f64,
        #[arg(long, default_value_t = 1e-9)]
        rel_tol: f64,
        #[arg(long, default_value_t = 1e-12)]
        abs_tol: f64,
    },
    /// Monte Carlo basin estimate for the experiment in a config file.
    Basin { config: PathBuf },
}

/// A failure with the exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn new(code: u8, message: impl Into<String>) -> CliError {
        CliError {
            code,
            message: message.into(),
        }
    }

    pub fn io(what: &str, e: std::io::Error) -> CliError {
        CliError::new(1, format!("{what}: {e}"))
    }
}

pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_BAD_INPUT: u8 = 2;
pub const EXIT_UNSUPPORTED: u8 = 3;
pub const EXIT_NON_GENERIC: u8 = 4;
pub const EXIT_STIFF: u8 = 5;
pub const EXIT_VERDICT_FAIL: u8 = 6;

impl From<hetnet::Error> for CliError {
    fn from(e: hetnet::Error) -> Self {
        use hetnet::Error::*;
        let code = match &e {
            InvalidArgument(_)
            | Parse(_)
            | ConstraintViolation(_)
            | NotAxisEquilibrium(_)
            | InvalidCycleRealization(_)
            | IncompleteEigenData(_) => EXIT_BAD_INPUT,
            UnsupportedNetwork(_) => EXIT_UNSUPPORTED,
            NonGeneric(_) => EXIT_NON_GENERIC,
            StiffnessFailure { .. } => EXIT_STIFF,
            MissingConnection(_) => EXIT_FAILURE,
        };
        CliError::new(code, e.to_string())
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("HETNET_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .map_err(|_| CliError::new(EXIT_BAD_INPUT, format!("HETNET_THREADS must be a count, got `{value}`")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::new(EXIT_FAILURE, e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let ctx = commands::Context {
        format: cli.format,
        sink: Sink { dir: cli.output },
        seed: cli.seed,
        params: cli.params,
    };
    match cli.command {
        Command::List => commands::list(&ctx),
        Command::Describe { network } => commands::describe(&ctx, &network),
        Command::Validate { network } => commands::validate(&ctx, &network),
        Command::Indices { network } => commands::indices(&ctx, &network),
        Command::Simulate {
            network,
            x0,
            t_max,
            rel_tol,
            abs_tol,
        } => commands::simulate(&ctx, &network, &x0, t_max, rel_tol, abs_tol),
        Command::Basin { config } => commands::basin(&ctx, &config),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
