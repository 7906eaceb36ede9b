use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qaffine_cli::{
    cmd_baseline, cmd_demo_portfolio, cmd_demo_signal, cmd_gates_compare, cmd_run, CliError, RunOptions, DEFAULT_ASSETS,
};
use qaffine_core::addsub::AddSubMode;

#[derive(Parser)]
#[command(
    name = "qaffine",
    version,
    about = "Sequential affine transformations on a simulated quantum register"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sequential pipeline on a ProblemSpec JSON file.
    Run(RunArgs),
    /// Run the single-dilation augmented method (one-step specs only).
    Baseline(RunArgs),
    /// Gate-count comparison.
    Gates {
        #[command(subcommand)]
        command: GatesCommand,
    },
    /// Application demos.
    Demo {
        #[command(subcommand)]
        command: DemoCommand,
    },
}

#[derive(Args)]
struct RunArgs {
    spec: PathBuf,
    /// Overrides the spec's `mode` field.
    #[arg(long)]
    mode: Option<AddSubMode>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Compare against the classical recurrence and print the deviation.
    #[arg(long)]
    verify: bool,
    /// Largest accepted deviation under `--verify`.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Include the full statevector in result.json.
    #[arg(long)]
    raw: bool,
    #[arg(long, env = "QAFFINE_SEED")]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum GatesCommand {
    /// Lower both methods' circuits for a one-step spec and count gates.
    Compare {
        spec: PathBuf,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Subcommand)]
enum DemoCommand {
    /// Signed asset combinations; writes portfolio.csv.
    Portfolio {
        /// Comma-separated asset values (2^m of them, each group unit norm).
        #[arg(long, value_delimiter = ',')]
        assets: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1_000_000)]
        shots: u64,
        #[arg(long, env = "QAFFINE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Frequency-domain filter of a random two-tone signal; writes signal.csv.
    Signal {
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, default_value_t = 0.7, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
        b: f64,
        #[arg(long, env = "QAFFINE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

impl RunArgs {
    fn options(&self) -> RunOptions {
        RunOptions {
            mode: self.mode,
            out_dir: self.out_dir.clone(),
            verify: self.verify,
            tolerance: self.tolerance,
            raw: self.raw,
            seed: self.seed,
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => cmd_run(&args.spec, &args.options()),
        Command::Baseline(args) => cmd_baseline(&args.spec, &args.options()),
        Command::Gates {
            command: GatesCommand::Compare { spec, out_dir },
        } => cmd_gates_compare(&spec, &out_dir),
        Command::Demo { command } => match command {
            DemoCommand::Portfolio {
                assets,
                shots,
                seed,
                out_dir,
            } => {
                let assets = assets.unwrap_or_else(|| DEFAULT_ASSETS.to_vec());
                cmd_demo_portfolio(&assets, shots, seed, &out_dir)
            }
            DemoCommand::Signal {
                samples,
                a,
                b,
                seed,
                out_dir,
            } => cmd_demo_signal(samples, a, b, seed, &out_dir),
        },
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
