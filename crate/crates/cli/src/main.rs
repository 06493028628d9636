//! `holostar`: pulse synthesis, simulation and verification from the shell.
//!
//! Exit status is 0 on success, 1 when a verification check fails and 2 for
//! usage or parse errors.

mod commands;
mod config;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use holostar::pulse::Shape;

use crate::config::{CliError, Output};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    Constant,
    SinSquared,
}

impl From<ShapeArg> for Shape {
    fn from(s: ShapeArg) -> Shape {
        match s {
            ShapeArg::Constant => Shape::Constant,
            ShapeArg::SinSquared => Shape::SinSquared,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "holostar",
    version,
    about = "Holonomic gate synthesis on a star architecture"
)]
pub struct Cli {
    /// Output format. CSV is available for the tabular commands only.
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    /// Write the result here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Override a tolerance, e.g. `--tol synthesis=1e-8`. Repeatable.
    #[arg(long = "tol", global = true, value_name = "KEY=VALUE")]
    pub tol: Vec<String>,
    /// Seed for randomized inputs and circuits.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Three-pulse schedule for a single-qubit holonomic rotation.
    Synth1q {
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long, allow_hyphen_values = true)]
        dphi: f64,
        #[arg(long, default_value_t = 0)]
        qubit: usize,
        #[arg(long, value_enum, default_value = "constant")]
        shape: ShapeArg,
    },
    /// Coupling pulse for the two-qubit gate with mixing angle THETA.
    Synth2q {
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        l: usize,
        #[arg(long, value_enum, default_value = "constant")]
        shape: ShapeArg,
    },
    /// Compile and simulate a circuit document, or a seeded random circuit.
    Simulate {
        /// Circuit document path, or `-` for standard input.
        #[arg(required_unless_present = "random")]
        path: Option<String>,
        /// Register basis state as a bit string, most significant qubit first.
        #[arg(long)]
        input: Option<String>,
        /// Simulate a random circuit with this many gates instead of a file.
        #[arg(long, conflicts_with = "path", requires = "n_register")]
        random: Option<usize>,
        /// Register size for `--random`.
        #[arg(long)]
        n_register: Option<usize>,
        /// Auxiliary preparation for `--random`.
        #[arg(long, default_value_t = 0)]
        aux: u8,
        /// Sample this many auxiliary measurements.
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long, value_enum, default_value = "constant")]
        shape: ShapeArg,
    },
    /// Check a schedule or circuit document against the tolerances.
    Verify {
        /// Document path, or `-` for standard input.
        path: String,
        /// Time samples per segment for the phase and transport checks.
        #[arg(long, default_value_t = holostar::pulse::DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Entangling power of the coupling gate across the mixing angle.
    EpSweep {
        #[arg(long, default_value_t = 33)]
        grid: usize,
    },
    /// Total, dynamical and geometric phases across a grid of rotation angles.
    PhaseReport {
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long, default_value_t = 16)]
        grid: usize,
        #[arg(long, default_value_t = holostar::pulse::DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, value_enum, default_value = "constant")]
        shape: ShapeArg,
    },
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let tol = config::tolerances(
        std::env::var("HOLOSTAR_TOLERANCE_SCALE").ok().as_deref(),
        &cli.tol,
    )?;
    let ctx = config::Context {
        format: cli.format,
        tol,
        seed: cli.seed,
    };
    match &cli.command {
        Command::Synth1q {
            theta,
            phi,
            dphi,
            qubit,
            shape,
        } => commands::synth1q(&ctx, *theta, *phi, *dphi, *qubit, (*shape).into()),
        Command::Synth2q { theta, k, l, shape } => {
            commands::synth2q(&ctx, *theta, *k, *l, (*shape).into())
        }
        Command::Simulate {
            path,
            input,
            random,
            n_register,
            aux,
            shots,
            shape,
        } => {
            let source = match (path, random) {
                (Some(p), _) => commands::CircuitSource::Path(p.clone()),
                (None, Some(len)) => commands::CircuitSource::Random {
                    len: *len,
                    n_register: n_register.unwrap_or(1),
                    aux: *aux,
                },
                (None, None) => {
                    return Err(CliError::usage("a circuit path or --random is required"))
                }
            };
            commands::simulate(&ctx, source, input.as_deref(), *shots, (*shape).into())
        }
        Command::Verify { path, samples } => verify::verify(&ctx, path, *samples),
        Command::EpSweep { grid } => commands::ep_sweep(&ctx, *grid),
        Command::PhaseReport {
            theta,
            phi,
            grid,
            samples,
            shape,
        } => commands::phase_report(&ctx, *theta, *phi, *grid, *samples, (*shape).into()),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            if let Err(e) = emit(&cli.out, &output.text) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(2);
            }
            if output.pass {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
