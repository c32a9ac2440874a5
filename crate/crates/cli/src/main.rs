//! `mapecho` — echo-amplitude and non-Markovianity pipelines for quantized
//! torus-map environments.
//!
//! Exit codes: 0 success, 1 validation error, 2 computation failure,
//! 3 verification failure.

mod commands;
mod config;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use config::{merge, resolve_coupling, resolve_family, resolve_n, resolve_run, CommonArgs, Family};

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Compute(String),
    Verification,
}

#[derive(Parser)]
#[command(
    name = "mapecho",
    version,
    about = "Fidelity-amplitude echoes and qubit non-Markovianity for quantized torus maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Average fidelity amplitude series f(t), written as CSV.
    Afa(CommonArgs),
    /// AFA plus the cumulative non-Markovianity measure M(t).
    Nm(CommonArgs),
    /// M(eval_time) across a grid of Harper kick strengths.
    ScanK(ScanArgs),
    /// Classical phase portraits, one orbit CSV per parameter point.
    Portrait(PortraitArgs),
    /// Small-N oracle suite: dense equivalence, channel structure,
    /// coherence factorization, optimal-pair bound.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated Harper k values.
    #[arg(long, value_delimiter = ',')]
    k_grid: Option<Vec<f64>>,
    /// Time step at which M is evaluated.
    #[arg(long)]
    eval_time: Option<usize>,
}

#[derive(Args)]
struct PortraitArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated Harper k values (one portrait per value).
    #[arg(long, value_delimiter = ',')]
    k_grid: Option<Vec<f64>>,
    /// Initial conditions form a grid-size × grid-size lattice.
    #[arg(long)]
    grid_size: Option<usize>,
    /// Iterations per orbit.
    #[arg(long)]
    steps: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Random state pairs drawn for the optimal-pair bound.
    #[arg(long)]
    samples: Option<usize>,
}

fn init_workers(workers: usize) {
    if workers > 0 {
        // Ignore failure if a pool already exists (tests re-enter).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global();
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Afa(args) => {
            let merged = merge(&args)?;
            let cfg = resolve_run(&merged, 100, 8192)?;
            init_workers(cfg.workers);
            commands::cmd_afa(&cfg)
        }
        Command::Nm(args) => {
            let merged = merge(&args)?;
            let cfg = resolve_run(&merged, 100, 8192)?;
            init_workers(cfg.workers);
            commands::cmd_nm(&cfg)
        }
        Command::ScanK(args) => {
            let merged = merge(&args.common)?;
            if let Some(name) = &merged.family {
                if name != "harper" {
                    return Err(CliError::Validation(
                        "family: scan-k supports only the harper family".into(),
                    ));
                }
            }
            let n = resolve_n(&merged, 8192)?;
            let coupling = resolve_coupling(&merged)?;
            let k_grid = args
                .k_grid
                .or(merged.k_grid.clone())
                .ok_or_else(|| CliError::Validation("k-grid: required".into()))?;
            if k_grid.is_empty() {
                return Err(CliError::Validation("k-grid: must not be empty".into()));
            }
            let eval_time = args.eval_time.or(merged.eval_time).unwrap_or(20);
            if eval_time < 1 {
                return Err(CliError::Validation("eval-time: must be at least 1".into()));
            }
            let cfg = commands::ScanConfig {
                n,
                coupling,
                eval_time,
                k_grid,
                out_dir: merged
                    .out_dir
                    .clone()
                    .unwrap_or_else(|| std::path::PathBuf::from("out")),
            };
            init_workers(merged.workers.unwrap_or(0));
            commands::cmd_scan_k(&cfg)
        }
        Command::Portrait(args) => {
            let merged = merge(&args.common)?;
            let family_name = merged.family.clone().unwrap_or_else(|| "harper".into());
            let spec = match family_name.as_str() {
                "harper" => {
                    let k_grid = args
                        .k_grid
                        .or(merged.k_grid.clone())
                        .or_else(|| merged.k.map(|k| vec![k]))
                        .ok_or_else(|| CliError::Validation("k-grid: required".into()))?;
                    if k_grid.is_empty() {
                        return Err(CliError::Validation("k-grid: must not be empty".into()));
                    }
                    commands::PortraitSpec::Harper {
                        k_grid,
                        k_prime: merged.k_prime,
                    }
                }
                "pcm" => match resolve_family(&merged, false)? {
                    Family::Pcm { a, kick } => commands::PortraitSpec::Pcm { a, kick },
                    Family::Harper { .. } => unreachable!(),
                },
                other => {
                    return Err(CliError::Validation(format!(
                        "family: unknown family '{other}'"
                    )))
                }
            };
            let cfg = commands::PortraitConfig {
                spec,
                grid_size: args.grid_size.or(merged.grid_size).unwrap_or(20),
                steps: args.steps.or(merged.steps).unwrap_or(500),
                out_dir: merged
                    .out_dir
                    .clone()
                    .unwrap_or_else(|| std::path::PathBuf::from("out")),
            };
            if cfg.grid_size == 0 {
                return Err(CliError::Validation("grid-size: must be at least 1".into()));
            }
            init_workers(merged.workers.unwrap_or(0));
            commands::cmd_portrait(&cfg)
        }
        Command::Verify(args) => {
            let merged = merge(&args.common)?;
            let cfg = resolve_run(&merged, 10, 64)?;
            let samples = args.samples.or(merged.samples).unwrap_or(200);
            if samples < 1 {
                return Err(CliError::Validation("samples: must be at least 1".into()));
            }
            init_workers(cfg.workers);
            commands::cmd_verify(&cfg, samples)
        }
    }
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
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Verification) => {
            eprintln!("error: verification failed");
            ExitCode::from(3)
        }
    }
}
