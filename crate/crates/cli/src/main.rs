mod commands;
mod config;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use table::Format;

/// Hazard rates perturbed by telegraph noise: simulation, distributions,
/// kernel hazard estimation and defensibility tests.
#[derive(Debug, Parser)]
#[command(name = "telehazard", version, args_override_self = true)]
pub struct Cli {
    /// `key = value` file supplying defaults for any long flag.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Output file (a directory for `reproduce`); stdout when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Base seed; path i uses a seed derived from (seed, i).
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample paths of the integrated telegraph process W(t).
    SimulateW(SimulateW),
    /// Sample paths of X(t) = 1 − F̄(t) e^{−W(t)}.
    SimulateX(SimulateX),
    /// Density and CDF of W(t) or X(t) at fixed times.
    Density(Density),
    /// Mean, variance and support band of X(t) over time.
    Moments(Moments),
    /// Pointwise confidence band for the hazard rate.
    Band(BandCmd),
    /// Kernel estimates of density, distribution and hazard.
    Estimate(Estimate),
    /// Test whether baseline ± c fits inside the confidence band.
    Defensibility(Defensibility),
    /// Regenerate the tables behind a named figure or case study.
    Reproduce(Reproduce),
}

#[derive(Debug, Args)]
pub struct SimulateW {
    #[arg(long, default_value_t = 2.0)]
    pub c: f64,
    #[arg(long, default_value_t = 15.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    pub horizon: f64,
    #[arg(long, default_value_t = 2)]
    pub paths: usize,
    /// Evaluation points on [0, horizon].
    #[arg(long, default_value_t = 201)]
    pub points: usize,
}

/// Baseline hazard plus noise.
#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Preset id (fig1, fig2a, fig2b, fig2c, fig3, fig4, app1, app2),
    /// `constant:RATE`, `polynomial:ALPHA:BETA:C_REF` or
    /// `piecewise:START:SLOPE:INTERCEPT;...`.
    #[arg(long, default_value = "fig3")]
    pub hazard: String,
    /// Noise amplitude; defaults to the preset's value.
    #[arg(long)]
    pub c: Option<f64>,
    /// Switching rate; defaults to the preset's value.
    #[arg(long)]
    pub lambda: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SimulateX {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 1.0)]
    pub horizon: f64,
    #[arg(long, default_value_t = 2)]
    pub paths: usize,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Process {
    W,
    X,
}

#[derive(Debug, Args)]
pub struct Density {
    #[arg(value_enum)]
    pub process: Process,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Times at which to tabulate, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,1")]
    pub times: Vec<f64>,
    /// Interior points per time.
    #[arg(long, default_value_t = 199)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct Moments {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 2.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
}

/// Lifetime data source.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct DataArgs {
    /// Built-in dataset: melanoma_46 or service_86.
    #[arg(long)]
    pub dataset: Option<String>,
    /// Text or single-column CSV file of lifetimes.
    #[arg(long, value_name = "FILE")]
    pub data: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BandArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub bandwidth: f64,
    #[arg(long, default_value_t = 0.025)]
    pub alpha: f64,
    /// Grid points strictly inside the test interval.
    #[arg(long, default_value_t = 512)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct BandCmd {
    #[command(flatten)]
    pub band: BandArgs,
}

#[derive(Debug, Args)]
pub struct Estimate {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub bandwidth: f64,
    /// Grid start; defaults to 0.
    #[arg(long)]
    pub from: Option<f64>,
    /// Grid end; defaults to the largest observation plus the kernel reach.
    #[arg(long)]
    pub to: Option<f64>,
    #[arg(long, default_value_t = 512)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct Defensibility {
    #[command(flatten)]
    pub band: BandArgs,
    /// Baseline hazard, in the same syntax as `--hazard` elsewhere.
    #[arg(long)]
    pub hazard: String,
    #[arg(long)]
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    App1,
    App2,
}

#[derive(Debug, Args)]
pub struct Reproduce {
    #[arg(value_enum)]
    pub target: Target,
}

/// Process exit statuses.
pub mod exit {
    pub const OK: u8 = 0;
    pub const INTERNAL: u8 = 1;
    pub const VALIDATION: u8 = 2;
    pub const NOT_DEFENSIBLE: u8 = 3;
}

fn main() -> ExitCode {
    let args = match config::expand_args(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(exit::VALIDATION);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code_for(&e))
        }
    }
}
