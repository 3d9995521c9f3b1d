use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mcd_opt::bench;
use mcd_opt::harness::{self, ExperimentConfig, ExperimentReport, HarnessError};

#[derive(Parser)]
#[command(
    name = "mcd-bench",
    version,
    about = "Run and report budget-limited optimization experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment grid described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Re-derive summary.json and plots from the CSVs in a results directory.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Export the benchmark suite manifest as JSON.
    Suite {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        manifest: PathBuf,
    },
}

fn print_summary(report: &ExperimentReport) {
    for w in &report.summary.wtl {
        println!(
            "mcd vs {} @ {} NFE: w/t/l = {}/{}/{}",
            w.baseline, w.max_nfe, w.wins, w.ties, w.losses
        );
    }
    let failed = report.runs.iter().filter(|r| r.failure.is_some()).count();
    if failed > 0 {
        eprintln!("{failed} run(s) failed; see failures.txt");
    }
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Run { config } => {
            let cfg = ExperimentConfig::from_file(&config)?.with_env_overrides();
            let report = harness::run_grid(&cfg)?;
            print_summary(&report);
            println!("results written to {}", cfg.output_dir.display());
        }
        Command::Report { input } => {
            let report = harness::derive_report(&input)?;
            print_summary(&report);
        }
        Command::Suite {
            dim,
            seed,
            manifest,
        } => {
            let suite = bench::make_suite(dim, seed).map_err(|e| HarnessError::Config {
                line: None,
                msg: e.to_string(),
            })?;
            let json = serde_json::to_string_pretty(&bench::manifest(&suite))
                .expect("manifest serializes");
            std::fs::write(&manifest, json + "\n").map_err(|source| HarnessError::Io {
                path: manifest.clone(),
                source,
            })?;
            println!(
                "{} functions written to {}",
                suite.len(),
                manifest.display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
