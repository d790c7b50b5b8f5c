use std::path::PathBuf;
use std::process::ExitCode;

use cbhf::{build_report, execute_run, execute_sweep, read_summary_csv, ExperimentConfig};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "cbhf",
    version,
    about = "Entropy-gated human feedback for contextual bandits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configured experiment over all seeds.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides `out_dir`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Base seed (overrides `seed`).
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (overrides `threads`).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Sweep entropy thresholds and expert qualities with a fixed-entropy gate.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated thresholds; defaults to the built-in sweep.
        #[arg(long, value_delimiter = ',')]
        lambdas: Vec<f64>,
        /// Comma-separated expert qualities; defaults to `expert.quality`.
        #[arg(long, value_delimiter = ',')]
        qs: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Print the comparison table for a summary CSV.
    Report {
        #[arg(long)]
        summary: PathBuf,
    },
}

fn load(
    path: &PathBuf,
    out: Option<PathBuf>,
    seed: Option<u64>,
    threads: Option<usize>,
) -> cbhf::Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(out) = out {
        cfg.out_dir = out;
    }
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    if let Some(threads) = threads {
        cfg.threads = threads;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> cbhf::Result<()> {
    match cli.command {
        Command::Run {
            config,
            out,
            seed,
            threads,
        } => {
            let cfg = load(&config, out, seed, threads)?;
            let (rows, artifacts) = execute_run(&cfg)?;
            print!("{}", build_report(&rows).render());
            println!("wrote {}", artifacts.summary_csv.display());
        }
        Command::Sweep {
            config,
            lambdas,
            qs,
            out,
            threads,
        } => {
            let cfg = load(&config, out, None, threads)?;
            let lambdas = if lambdas.is_empty() {
                cbhf::DEFAULT_LAMBDAS.to_vec()
            } else {
                lambdas
            };
            let qs = if qs.is_empty() {
                vec![cfg.expert.quality]
            } else {
                qs
            };
            let (rows, _) = execute_sweep(&cfg, &lambdas, &qs)?;
            print!("{}", build_report(&rows).render());
            println!("wrote {}", cfg.out_dir.join("grid.csv").display());
        }
        Command::Report { summary } => {
            let rows = read_summary_csv(&summary)?;
            print!("{}", build_report(&rows).render());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
