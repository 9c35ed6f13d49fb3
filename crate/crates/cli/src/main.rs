//! Command-line front end for the driven-qubit dephasing engine.

mod config;
mod plot;
mod run;
mod selftest;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kanesim_core::{InitialState, Method, TrackedObservable};

#[derive(Parser)]
#[command(
    name = "kanesim",
    version,
    about = "Bloch-equation simulator for a driven qubit with longitudinal dephasing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one trajectory from a config file or explicit flags
    Simulate(SimulateArgs),
    /// Run a named preset and write its observable table(s)
    Figure(FigureArgs),
    /// Summarize decay behaviour across a theta x kappa grid
    Sweep(SweepArgs),
    /// Check the invariants of a previously written observable table
    Validate(ValidateArgs),
    /// Run the built-in diagnostic checks
    Selftest,
}

fn parse_init(s: &str) -> Result<InitialState, String> {
    s.parse()
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse()
}

fn parse_tracked(s: &str) -> Result<TrackedObservable, String> {
    match s {
        "purity" => Ok(TrackedObservable::Purity),
        "bloch_norm" => Ok(TrackedObservable::BlochNorm),
        "fidelity" => Ok(TrackedObservable::Fidelity),
        other => Err(format!(
            "unknown observable `{other}` (expected purity, bloch_norm or fidelity)"
        )),
    }
}

const EXPLICIT: [&str; 9] = [
    "init", "theta", "kappa", "omega", "epsilon", "gamma_d", "tau_max", "dtau", "method",
];

#[derive(Args)]
pub struct SimulateArgs {
    /// `key = value` config file; exclusive with the selection flags below
    #[arg(long, conflicts_with = "scenario", conflicts_with_all = EXPLICIT)]
    pub config: Option<PathBuf>,

    /// Preset id (same set as `figure --id`); exclusive with explicit flags
    #[arg(long, conflicts_with_all = EXPLICIT)]
    pub scenario: Option<String>,

    /// Initial state: x, y, z, or three comma-separated components
    #[arg(long, value_parser = parse_init)]
    pub init: Option<InitialState>,

    /// Field orientation angle in radians
    #[arg(long)]
    pub theta: Option<f64>,

    /// Exchange coupling; the drive runs at omega = kappa / 2
    #[arg(long, conflicts_with = "omega")]
    pub kappa: Option<f64>,

    /// Drive frequency, set directly
    #[arg(long)]
    pub omega: Option<f64>,

    /// Dephasing strength; the decay runs at gamma_d = 2 epsilon
    #[arg(long, conflicts_with = "gamma_d")]
    pub epsilon: Option<f64>,

    /// Dephasing rate, set directly (default 0.5)
    #[arg(long)]
    pub gamma_d: Option<f64>,

    /// Run length in scaled time
    #[arg(long)]
    pub tau_max: Option<f64>,

    /// Integrator step (default 0.001)
    #[arg(long)]
    pub dtau: Option<f64>,

    /// Integration route: rk4, exact or oracle
    #[arg(long, value_parser = parse_method)]
    pub method: Option<Method>,

    /// Output CSV path (default run.csv, overriding any config value)
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Also write an SVG chart next to the CSV
    #[arg(long)]
    pub plot: bool,
}

#[derive(Args)]
pub struct FigureArgs {
    /// Preset id, e.g. 1a, 2c, 4, 7b
    #[arg(long)]
    pub id: String,

    /// Output CSV path (default figure-<id>.csv); multi-curve presets get a
    /// -theta<v>-kappa<v> suffix per combination
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Also write an SVG chart
    #[arg(long)]
    pub plot: bool,
}

#[derive(Args)]
pub struct SweepArgs {
    /// Initial state: x, y, z, or three comma-separated components
    #[arg(long, value_parser = parse_init)]
    pub init: InitialState,

    /// Comma-separated theta grid, radians
    #[arg(long)]
    pub theta_list: String,

    /// Comma-separated kappa grid
    #[arg(long)]
    pub kappa_list: String,

    /// Dephasing rate shared by every grid point
    #[arg(long)]
    pub gamma_d: f64,

    /// Run length in scaled time
    #[arg(long)]
    pub tau_max: f64,

    /// Integrator step
    #[arg(long, default_value_t = 0.01)]
    pub dtau: f64,

    /// Observable whose decay is summarized: purity, bloch_norm or fidelity
    #[arg(long, value_parser = parse_tracked, default_value = "bloch_norm")]
    pub track: TrackedObservable,

    /// Half-time below which a decay counts as abrupt (default 1 / gamma_d)
    #[arg(long)]
    pub abrupt_threshold: Option<f64>,

    /// Output CSV path (default sweep.csv)
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Also write an SVG chart of the tracked observable
    #[arg(long)]
    pub plot: bool,
}

#[derive(Args)]
pub struct ValidateArgs {
    /// Observable table written by `simulate` or `figure`
    pub file: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Simulate(args) => run::simulate(&args),
        Command::Figure(args) => run::figure(&args),
        Command::Sweep(args) => run::sweep(&args),
        Command::Validate(args) => run::validate(&args),
        Command::Selftest => {
            return if selftest::run() == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
