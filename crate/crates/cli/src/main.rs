use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use aevqc_cli::commands;

/// Train and compare image classifiers whose global-pooling head can be
/// swapped for an amplitude-encoded variational quantum circuit.
#[derive(Parser)]
#[command(name = "aevqc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train one model from a config file; writes a checkpoint and a metrics CSV.
    Train {
        #[arg(long)]
        config: PathBuf,
        /// Checkpoint output path (default: checkpoint.json).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Metrics CSV output path (default: metrics.csv).
        #[arg(long)]
        metrics: Option<PathBuf>,
        /// Override the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads; 1 is the sequential reference mode.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Evaluate a checkpoint on the config's test split.
    Eval {
        #[arg(long)]
        checkpoint: PathBuf,
        #[arg(long)]
        config: PathBuf,
    },
    /// Train the classical (gap) and quantum heads side by side and write a
    /// two-row comparison report.
    Compare {
        #[arg(long)]
        config: PathBuf,
        /// Report CSV output path (default: report.csv).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Print the gate list of an ansatz.
    Circuit {
        #[arg(long)]
        ansatz: String,
        #[arg(long)]
        qubits: usize,
        #[arg(long)]
        depth: usize,
    },
    /// Print the parameter accounting of a head configuration.
    Params {
        #[arg(long)]
        ansatz: String,
        #[arg(long)]
        qubits: usize,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        classes: usize,
        /// Also print the classical head count channels x classes.
        #[arg(long = "classical-channels")]
        classical_channels: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Train { config, out, metrics, seed, threads } => {
            commands::cmd_train(&config, out, metrics, seed, threads)
        }
        Command::Eval { checkpoint, config } => commands::cmd_eval(&checkpoint, &config),
        Command::Compare { config, out, seed, threads } => {
            commands::cmd_compare(&config, out, seed, threads)
        }
        Command::Circuit { ansatz, qubits, depth } => {
            commands::cmd_circuit(&ansatz, qubits, depth)
        }
        Command::Params { ansatz, qubits, depth, classes, classical_channels } => {
            commands::cmd_params(&ansatz, qubits, depth, classes, classical_channels)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
