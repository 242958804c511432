use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use qwalk_cli::{config, runner, CliError, ExperimentConfig, Mode, Overrides};

/// Quantum walk on the line with a time-dependent coin: run experiments,
/// write CSVs, and summarize scaling regimes.
#[derive(Parser)]
#[command(name = "qwalk", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one schedule and record the sigma(n) series
    Evolve(CommonArgs),
    /// Position distribution at a fixed step for each alpha
    Snapshot(CommonArgs),
    /// Power-law schedule sweep with exponent fits per alpha
    Sweep(CommonArgs),
    /// Discrete sigma against the closed-form sigma for one alpha
    AnalyticCompare(CommonArgs),
    /// Verify the Bessel product-sum identities
    Identities(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config file; flags below override its fields
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Power-law exponent(s) to run
    #[arg(long = "alpha", value_name = "ALPHA", num_args = 1..)]
    alphas: Option<Vec<f64>>,

    /// Number of steps to evolve (n_max)
    #[arg(long, value_name = "N")]
    steps: Option<u64>,

    /// Reference step for the analytic model
    #[arg(long, value_name = "N0")]
    n0: Option<u64>,

    /// Record a moment sample every this many steps
    #[arg(long, value_name = "K")]
    record_every: Option<u64>,

    /// Output directory for CSV files
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

fn load_config(path: &Option<PathBuf>) -> Result<ExperimentConfig, CliError> {
    match path {
        None => Ok(ExperimentConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Io(format!("cannot read {}: {e}", p.display())))?;
            ExperimentConfig::from_json(&text)
        }
    }
}

fn run(mode: Mode, args: CommonArgs) -> Result<(), CliError> {
    let file_config = load_config(&args.config)?;
    let overrides = Overrides {
        alphas: args.alphas,
        steps: args.steps,
        n0: args.n0,
        record_every: args.record_every,
        out: args.out,
    };
    let resolved = config::resolve(mode, file_config, overrides)?;
    runner::execute(&resolved)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (mode, args) = match cli.command {
        Command::Evolve(a) => (Mode::Evolve, a),
        Command::Snapshot(a) => (Mode::Snapshot, a),
        Command::Sweep(a) => (Mode::Sweep, a),
        Command::AnalyticCompare(a) => (Mode::AnalyticCompare, a),
        Command::Identities(a) => (Mode::Identities, a),
    };
    match run(mode, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qwalk: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
