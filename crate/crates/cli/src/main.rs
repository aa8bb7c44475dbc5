//! `ks`: Krein checks, Hilbert-transform phases and Stieltjes classes from
//! the command line.

mod commands;
mod density_args;
mod failure;
mod grid;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use density_args::DensityArgs;

#[derive(Debug, Parser)]
#[command(
    name = "ks",
    version,
    about = "Krein conditions and Stieltjes classes via Hilbert transforms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the phase 𝓗 ln f (or 𝓗ₑ ln f on the half line) on a grid.
    Transform(TransformArgs),
    /// Decide the logarithmic-integral condition for a density.
    KreinCheck(KreinArgs),
    /// Build or verify a Stieltjes class.
    #[command(subcommand)]
    Class(ClassCommand),
    /// Run a built-in family end to end and print a summary.
    Example(ExampleArgs),
}

#[derive(Debug, Subcommand)]
enum ClassCommand {
    /// Sample the center, perturbation and members on a grid.
    Build(ClassBuildArgs),
    /// Check the vanishing moment integrals.
    Verify(ClassVerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Cos,
    Sin,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[command(flatten)]
    pub density: DensityArgs,
    /// tmin,tmax,count[,log]
    #[arg(long)]
    pub grid: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct KreinArgs {
    #[command(flatten)]
    pub density: DensityArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ClassBuildArgs {
    #[command(flatten)]
    pub density: DensityArgs,
    /// Real-line perturbation: cos(𝓗 ln f) or sin(𝓗 ln f).
    #[arg(long, value_enum, default_value = "cos")]
    pub kind: Kind,
    #[arg(long)]
    pub grid: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ClassVerifyArgs {
    #[command(flatten)]
    pub density: DensityArgs,
    #[arg(long, value_enum, default_value = "cos")]
    pub kind: Kind,
    #[arg(long, default_value_t = krein_core::stieltjes::DEFAULT_MAX_ORDER)]
    pub max_order: u32,
    #[arg(long, default_value_t = krein_core::stieltjes::DEFAULT_TOLERANCE)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ExampleArgs {
    #[command(flatten)]
    pub density: DensityArgs,
    #[arg(long, default_value_t = krein_core::stieltjes::DEFAULT_MAX_ORDER)]
    pub max_order: u32,
    #[arg(long, default_value_t = krein_core::stieltjes::DEFAULT_TOLERANCE)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("KS_LOG", "warn")).init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Transform(a) => commands::transform(&a),
        Command::KreinCheck(a) => commands::krein_check(&a),
        Command::Class(ClassCommand::Build(a)) => commands::class_build(&a),
        Command::Class(ClassCommand::Verify(a)) => commands::class_verify(&a),
        Command::Example(a) => commands::example(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("ks: {f}");
            f.exit_code()
        }
    }
}
