use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use maxent_recon::{run, CliError, Command, Overrides, RunConfig};

/// Maximum-entropy reconstruction of many-body states from local data.
#[derive(Parser)]
#[command(name = "maxent-recon", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Extract local data from a model state, solve and certify.
    Reconstruct(RunArgs),
    /// Reconstruct for each window size in the config's "sweep" list.
    Sweep(RunArgs),
    /// Evaluate the entropy certificate and bounds for a stored state.
    Certify(RunArgs),
    /// Gaussian reconstruction of the free-fermion ring.
    Fermion(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Result file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long = "max-iter")]
    max_iter: Option<usize>,
    /// Store the extracted local data (reconstruct only).
    #[arg(long)]
    marginals_out: Option<PathBuf>,
    /// Store the reconstructed state (reconstruct only).
    #[arg(long)]
    sigma_out: Option<PathBuf>,
}

fn execute(command: Command, args: RunArgs) -> Result<i32, CliError> {
    let mut cfg = RunConfig::load(&args.config)?;
    cfg.apply(&Overrides {
        out: args.out,
        tolerance: args.tolerance,
        max_iterations: args.max_iter,
        marginals_out: args.marginals_out,
        sigma_out: args.sigma_out,
    });
    let outcome = run(command, &cfg, args.jobs)?;
    let text = outcome.render()?;
    match &cfg.outputs.path {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e))?,
        None => print!("{text}"),
    }
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let line = serde_json::json!({"error": {"kind": "usage", "message": e.to_string().trim()}});
            eprintln!("{line}");
            return ExitCode::from(1);
        }
    };
    let (command, args) = match cli.command {
        Cmd::Reconstruct(a) => (Command::Reconstruct, a),
        Cmd::Sweep(a) => (Command::Sweep, a),
        Cmd::Certify(a) => (Command::Certify, a),
        Cmd::Fermion(a) => (Command::Fermion, a),
    };
    match execute(command, args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{}", e.to_json_line());
            ExitCode::from(1)
        }
    }
}
