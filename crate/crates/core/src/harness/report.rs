//! Summary and plot derivation from the raw CSV outputs of a run.
//!
//! Both `run` and `report` go through [`derive_report`], so regenerating
//! from the CSVs always reproduces the same files.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bench;
use crate::evaluator::TracePoint;

use super::config::{Algorithm, ExperimentConfig};
use super::metrics::{compute_iar, densify, mean, tally_wtl};
use super::runner::{
    trace_file_name, write_file, RunResult, RunRow, CONFIG_FILE, PLOT_DIR, RESULTS_FILE,
    SUMMARY_FILE, TRACE_DIR,
};
use super::svg::{convergence_svg, Series};
use super::HarnessError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub algorithm: String,
    pub function: String,
    pub max_nfe: usize,
    pub runs: usize,
    pub failed: usize,
    /// Mean final error over successful runs.
    pub mean_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IarEntry {
    pub baseline: String,
    pub function: String,
    pub max_nfe: usize,
    pub baseline_error: f64,
    pub mcd_error: f64,
    /// `None` when MCD's error is 0 (see `iar_infinite`).
    pub iar: Option<f64>,
    pub iar_infinite: bool,
    pub mcd_better: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WtlEntry {
    pub baseline: String,
    pub max_nfe: usize,
    pub wins: usize,
    pub ties: usize,
    pub losses: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub dim: usize,
    pub repeats: usize,
    pub aggregation: String,
    pub boundary_handling: String,
    pub tie_epsilon: f64,
    pub aggregates: Vec<Aggregate>,
    pub iar: Vec<IarEntry>,
    pub wtl: Vec<WtlEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub runs: Vec<RunResult>,
    pub summary: Summary,
}

impl ExperimentReport {
    pub fn aggregate(&self, algorithm: &str, function: &str, max_nfe: usize) -> Option<&Aggregate> {
        self.summary
            .aggregates
            .iter()
            .find(|a| a.algorithm == algorithm && a.function == function && a.max_nfe == max_nfe)
    }

    pub fn wtl(&self, baseline: &str, max_nfe: usize) -> Option<&WtlEntry> {
        self.summary
            .wtl
            .iter()
            .find(|w| w.baseline == baseline && w.max_nfe == max_nfe)
    }
}

pub fn read_results(path: &Path) -> Result<Vec<RunRow>, HarnessError> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| HarnessError::data(path, e))?;
    rdr.deserialize()
        .collect::<Result<Vec<RunRow>, _>>()
        .map_err(|e| HarnessError::data(path, e))
}

pub fn read_trace(path: &Path) -> Result<Vec<TracePoint>, HarnessError> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| HarnessError::data(path, e))?;
    rdr.deserialize()
        .collect::<Result<Vec<TracePoint>, _>>()
        .map_err(|e| HarnessError::data(path, e))
}

/// Reads `config.txt`, `results.csv` and the trace files under `dir`, then
/// writes `summary.json` and one SVG per (function, budget).
pub fn derive_report(dir: &Path) -> Result<ExperimentReport, HarnessError> {
    let cfg = ExperimentConfig::from_file(&dir.join(CONFIG_FILE))?;
    let rows = read_results(&dir.join(RESULTS_FILE))?;

    let mut counters: BTreeMap<(String, String, usize), usize> = BTreeMap::new();
    let mut runs = Vec::with_capacity(rows.len());
    for row in rows {
        let key = (row.algorithm.clone(), row.function.clone(), row.max_nfe);
        let counter = counters.entry(key).or_insert(0);
        let repeat = *counter;
        *counter += 1;
        let path = dir.join(TRACE_DIR).join(trace_file_name(
            &row.algorithm,
            &row.function,
            row.max_nfe,
            repeat,
        ));
        let trace = if path.exists() {
            read_trace(&path)?
        } else {
            Vec::new()
        };
        let failure = row.final_error.is_none().then(|| "run failed".to_string());
        runs.push(RunResult {
            row,
            repeat,
            trace,
            failure,
        });
    }

    let summary = summarize(&cfg, &runs)?;
    let json = serde_json::to_string_pretty(&summary)
        .map_err(|e| HarnessError::data(&dir.join(SUMMARY_FILE), e))?;
    write_file(&dir.join(SUMMARY_FILE), (json + "\n").as_bytes())?;

    let plot_dir = dir.join(PLOT_DIR);
    fs::create_dir_all(&plot_dir).map_err(|e| HarnessError::io(&plot_dir, e))?;
    for &max_nfe in &cfg.max_nfe {
        for function in &cfg.functions {
            let svg = plot_for(&cfg, &runs, function, max_nfe);
            write_file(
                &plot_dir.join(format!("{function}__nfe{max_nfe}.svg")),
                svg.as_bytes(),
            )?;
        }
    }

    Ok(ExperimentReport { runs, summary })
}

fn summarize(cfg: &ExperimentConfig, runs: &[RunResult]) -> Result<Summary, HarnessError> {
    let mut aggregates = Vec::new();
    for &max_nfe in &cfg.max_nfe {
        for function in &cfg.functions {
            for alg in &cfg.algorithms {
                let cell: Vec<&RunRow> = runs
                    .iter()
                    .map(|r| &r.row)
                    .filter(|r| {
                        r.algorithm == alg.as_str()
                            && &r.function == function
                            && r.max_nfe == max_nfe
                    })
                    .collect();
                let errors: Vec<f64> = cell.iter().filter_map(|r| r.final_error).collect();
                aggregates.push(Aggregate {
                    algorithm: alg.as_str().to_string(),
                    function: function.clone(),
                    max_nfe,
                    runs: cell.len(),
                    failed: cell.len() - errors.len(),
                    mean_error: mean(&errors),
                });
            }
        }
    }

    let lookup = |alg: &str, function: &str, max_nfe: usize| {
        aggregates
            .iter()
            .find(|a| a.algorithm == alg && a.function == function && a.max_nfe == max_nfe)
            .and_then(|a| a.mean_error)
    };

    let mut iar = Vec::new();
    let mut wtl = Vec::new();
    if cfg.algorithms.contains(&Algorithm::Mcd) {
        for baseline in cfg.algorithms.iter().filter(|a| **a != Algorithm::Mcd) {
            let b = baseline.as_str();
            for &max_nfe in &cfg.max_nfe {
                let mut mcd_errs = Vec::new();
                let mut base_errs = Vec::new();
                for function in &cfg.functions {
                    let (Some(m), Some(e)) = (
                        lookup("mcd", function, max_nfe),
                        lookup(b, function, max_nfe),
                    ) else {
                        continue;
                    };
                    let ratio = compute_iar(e, m);
                    iar.push(IarEntry {
                        baseline: b.to_string(),
                        function: function.clone(),
                        max_nfe,
                        baseline_error: e,
                        mcd_error: m,
                        iar: (!ratio.infinite).then_some(ratio.value),
                        iar_infinite: ratio.infinite,
                        mcd_better: ratio.mcd_better(),
                    });
                    mcd_errs.push(m);
                    base_errs.push(e);
                }
                let t = tally_wtl(&mcd_errs, &base_errs, cfg.tie_epsilon)?;
                wtl.push(WtlEntry {
                    baseline: b.to_string(),
                    max_nfe,
                    wins: t.wins,
                    ties: t.ties,
                    losses: t.losses,
                });
            }
        }
    }

    Ok(Summary {
        dim: cfg.dim,
        repeats: cfg.repeats,
        aggregation: "mean".to_string(),
        boundary_handling: "clamp".to_string(),
        tie_epsilon: cfg.tie_epsilon,
        aggregates,
        iar,
        wtl,
    })
}

/// Mean densified error curve for one algorithm; a checkpoint is plotted
/// only once every successful run has reached its first improvement.
pub fn mean_curve(runs: &[&RunResult], grid: &[usize]) -> Vec<(f64, f64)> {
    let dense: Vec<Vec<Option<f64>>> = runs
        .iter()
        .filter(|r| r.failure.is_none())
        .map(|r| densify(&r.trace, grid))
        .collect();
    if dense.is_empty() {
        return Vec::new();
    }
    grid.iter()
        .enumerate()
        .filter_map(|(k, &g)| {
            let vals: Option<Vec<f64>> = dense
                .iter()
                .map(|d| d[k].map(|v| v - bench::OPTIMUM_VALUE))
                .collect();
            vals.and_then(|v| mean(&v)).map(|m| (g as f64, m))
        })
        .collect()
}

fn plot_for(cfg: &ExperimentConfig, runs: &[RunResult], function: &str, max_nfe: usize) -> String {
    let grid = cfg.grid_for(max_nfe);
    let series: Vec<Series> = cfg
        .algorithms
        .iter()
        .map(|alg| {
            let cell: Vec<&RunResult> = runs
                .iter()
                .filter(|r| {
                    r.row.algorithm == alg.as_str()
                        && r.row.function == function
                        && r.row.max_nfe == max_nfe
                })
                .collect();
            Series {
                label: alg.as_str().to_uppercase(),
                points: mean_curve(&cell, &grid),
            }
        })
        .collect();
    convergence_svg(
        &format!("{function} (D={}, max NFE={max_nfe})", cfg.dim),
        "function evaluations",
        "mean error (log scale)",
        &series,
    )
}
