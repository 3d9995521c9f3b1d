use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use crate::baselines::{CooperativeCoevolution, DifferentialEvolution};
use crate::bench::{self, BenchFunction};
use crate::evaluator::{Objective, TracePoint};
use crate::mcd::Mcd;
use crate::optimizer::Optimizer;

use super::config::{Algorithm, ExperimentConfig};
use super::report::{self, ExperimentReport};
use super::HarnessError;

pub const RESULTS_FILE: &str = "results.csv";
pub const CONFIG_FILE: &str = "config.txt";
pub const SUMMARY_FILE: &str = "summary.json";
pub const TRACE_DIR: &str = "traces";
pub const PLOT_DIR: &str = "plots";
pub const FAILURES_FILE: &str = "failures.txt";

pub const RESULTS_HEADER: [&str; 8] = [
    "algorithm",
    "function",
    "dim",
    "seed",
    "max_nfe",
    "used_nfe",
    "final_error",
    "wall_ms",
];

/// One line of `results.csv`. A failed run has no `final_error`.
#[derive(Debug, Clone, PartialEq, serde::Deserialize)]
pub struct RunRow {
    pub algorithm: String,
    pub function: String,
    pub dim: usize,
    pub seed: u64,
    pub max_nfe: usize,
    pub used_nfe: usize,
    pub final_error: Option<f64>,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub row: RunRow,
    /// Repeat index within its (algorithm, function, budget) cell.
    pub repeat: usize,
    pub trace: Vec<TracePoint>,
    pub failure: Option<String>,
}

pub fn trace_file_name(algorithm: &str, function: &str, max_nfe: usize, repeat: usize) -> String {
    format!("{algorithm}__{function}__nfe{max_nfe}__r{repeat}.csv")
}

fn optimizer_for(alg: Algorithm, cfg: &ExperimentConfig) -> Box<dyn Optimizer> {
    match alg {
        Algorithm::Mcd => Box::new(Mcd::new(cfg.max_iter)),
        Algorithm::De => Box::new(DifferentialEvolution::new(cfg.de)),
        Algorithm::Cc => Box::new(CooperativeCoevolution::new(cfg.cc)),
    }
}

struct Job<'a> {
    alg: Algorithm,
    function: &'a BenchFunction,
    max_nfe: usize,
    repeat: usize,
}

fn run_job(job: &Job<'_>, cfg: &ExperimentConfig) -> RunResult {
    let seed = cfg.seed_for(job.repeat);
    let optimizer = optimizer_for(job.alg, cfg);
    let start = Instant::now();
    let outcome = optimizer.minimize(job.function, job.max_nfe, seed);
    let wall_ms = if cfg.record_wall_time {
        start.elapsed().as_millis() as u64
    } else {
        0
    };
    let mut row = RunRow {
        algorithm: job.alg.as_str().to_string(),
        function: job.function.name.clone(),
        dim: cfg.dim,
        seed,
        max_nfe: job.max_nfe,
        used_nfe: 0,
        final_error: None,
        wall_ms,
    };
    match outcome {
        Ok(out) if out.used_nfe > job.max_nfe => {
            row.used_nfe = out.used_nfe;
            RunResult {
                row,
                repeat: job.repeat,
                trace: out.trace,
                failure: Some(format!(
                    "used {} evaluations of {}",
                    out.used_nfe, job.max_nfe
                )),
            }
        }
        Ok(out) => {
            let optimum = job.function.optimum_value().unwrap_or(bench::OPTIMUM_VALUE);
            row.used_nfe = out.used_nfe;
            row.final_error = Some(out.returned_value() - optimum);
            RunResult {
                row,
                repeat: job.repeat,
                trace: out.trace,
                failure: None,
            }
        }
        Err(e) => RunResult {
            row,
            repeat: job.repeat,
            trace: Vec::new(),
            failure: Some(e.to_string()),
        },
    }
}

/// Runs every (budget, function, algorithm, repeat) cell, writes the raw
/// outputs and derives the summary and plots from them.
///
/// Runs execute in parallel; output order is fixed by the grid order, so
/// files do not depend on scheduling.
pub fn run_grid(cfg: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    cfg.validate()?;
    let suite = bench::make_suite(cfg.dim, cfg.suite_seed)?;
    let functions: Vec<&BenchFunction> = cfg
        .functions
        .iter()
        .map(|name| {
            suite
                .iter()
                .find(|f| &f.name == name)
                .ok_or_else(|| HarnessError::config_msg(format!("unknown function {name:?}")))
        })
        .collect::<Result<_, _>>()?;

    let mut jobs = Vec::new();
    for &max_nfe in &cfg.max_nfe {
        for &function in &functions {
            for &alg in &cfg.algorithms {
                for repeat in 0..cfg.repeats {
                    jobs.push(Job {
                        alg,
                        function,
                        max_nfe,
                        repeat,
                    });
                }
            }
        }
    }
    let results: Vec<RunResult> = jobs.par_iter().map(|j| run_job(j, cfg)).collect();
    write_outputs(cfg, &results)?;
    report::derive_report(&cfg.output_dir)
}

fn write_outputs(cfg: &ExperimentConfig, results: &[RunResult]) -> Result<(), HarnessError> {
    let dir = &cfg.output_dir;
    let trace_dir = dir.join(TRACE_DIR);
    fs::create_dir_all(&trace_dir).map_err(|e| HarnessError::io(&trace_dir, e))?;

    write_file(&dir.join(CONFIG_FILE), cfg.to_text().as_bytes())?;

    let mut csv_out = csv::Writer::from_writer(Vec::new());
    let results_path = dir.join(RESULTS_FILE);
    let csv_err = |e: csv::Error| HarnessError::data(&results_path, e);
    csv_out.write_record(RESULTS_HEADER).map_err(csv_err)?;
    for r in results {
        let row = &r.row;
        csv_out
            .write_record([
                row.algorithm.clone(),
                row.function.clone(),
                row.dim.to_string(),
                row.seed.to_string(),
                row.max_nfe.to_string(),
                row.used_nfe.to_string(),
                row.final_error
                    .map(|e| format!("{e:?}"))
                    .unwrap_or_default(),
                row.wall_ms.to_string(),
            ])
            .map_err(csv_err)?;
    }
    let bytes = csv_out
        .into_inner()
        .map_err(|e| HarnessError::data(&results_path, e.to_string()))?;
    write_file(&results_path, &bytes)?;

    for r in results {
        let name = trace_file_name(&r.row.algorithm, &r.row.function, r.row.max_nfe, r.repeat);
        let mut text = String::from("nfe,best_value\n");
        for p in &r.trace {
            text.push_str(&format!("{},{:?}\n", p.nfe, p.best_value));
        }
        write_file(&trace_dir.join(name), text.as_bytes())?;
    }

    let failures: Vec<String> = results
        .iter()
        .filter_map(|r| {
            r.failure.as_ref().map(|msg| {
                format!(
                    "{} {} nfe={} seed={}: {msg}",
                    r.row.algorithm, r.row.function, r.row.max_nfe, r.row.seed
                )
            })
        })
        .collect();
    let failures_path = dir.join(FAILURES_FILE);
    if failures.is_empty() {
        if failures_path.exists() {
            fs::remove_file(&failures_path).map_err(|e| HarnessError::io(&failures_path, e))?;
        }
    } else {
        write_file(&failures_path, (failures.join("\n") + "\n").as_bytes())?;
    }
    Ok(())
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<(), HarnessError> {
    fs::write(path, bytes).map_err(|e| HarnessError::io(path, e))
}

pub fn results_path(dir: &Path) -> PathBuf {
    dir.join(RESULTS_FILE)
}
