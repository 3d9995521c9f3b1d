//! Experiment configuration: flat `key = value` text, `#` comments, lists
//! separated by commas.
//!
//! ```text
//! algorithms = mcd, de
//! functions = all
//! dim = 100
//! max_nfe = 10000
//! max_iter = 10
//! repeats = 11
//! base_seed = 1
//! output_dir = out/d100
//! ```

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::baselines::{CcConfig, DeConfig, ScaleFactor};
use crate::bench;
use crate::mcd::restart_plan;

use super::HarnessError;

pub const OUTPUT_DIR_ENV: &str = "MCD_OUTPUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    Mcd,
    De,
    Cc,
}

impl Algorithm {
    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Mcd => "mcd",
            Algorithm::De => "de",
            Algorithm::Cc => "cc",
        }
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mcd" => Ok(Algorithm::Mcd),
            "de" => Ok(Algorithm::De),
            "cc" => Ok(Algorithm::Cc),
            other => Err(format!(
                "unknown algorithm {other:?} (expected mcd, de or cc)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub algorithms: Vec<Algorithm>,
    pub functions: Vec<String>,
    pub dim: usize,
    pub max_nfe: Vec<usize>,
    pub max_iter: usize,
    pub repeats: usize,
    pub base_seed: u64,
    /// Explicit per-repeat seeds; overrides `base_seed + k` when set.
    pub seeds: Option<Vec<u64>>,
    pub suite_seed: u64,
    /// NFE checkpoints for densified curves; evenly spaced when absent.
    pub trace_grid: Option<Vec<usize>>,
    pub output_dir: PathBuf,
    pub de: DeConfig,
    pub cc: CcConfig,
    /// Relative tolerance for w/t/l ties; 0 means exact equality.
    pub tie_epsilon: f64,
    /// Write measured wall time; otherwise the column holds 0 so output is
    /// byte-reproducible.
    pub record_wall_time: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            algorithms: vec![Algorithm::Mcd, Algorithm::De, Algorithm::Cc],
            functions: bench::suite_names().into_iter().map(String::from).collect(),
            dim: 100,
            max_nfe: vec![10_000],
            max_iter: 10,
            repeats: 1,
            base_seed: 0,
            seeds: None,
            suite_seed: 0,
            trace_grid: None,
            output_dir: PathBuf::from("results"),
            de: DeConfig::default(),
            cc: CcConfig::default(),
            tie_epsilon: 0.0,
            record_wall_time: false,
        }
    }
}

/// Default number of checkpoints when no grid is configured.
pub const AUTO_GRID_POINTS: usize = 50;

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let mut cfg = Self::default();
        let mut de_f_low = None;
        let mut de_f_high = None;
        let mut repeats_set = false;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                HarnessError::config(line_no, format!("expected `key = value`, got {line:?}"))
            })?;
            let key = key.trim();
            let value = value.trim();
            let err = |msg: String| HarnessError::config(line_no, format!("{key}: {msg}"));
            match key {
                "algorithms" | "algorithm" => cfg.algorithms = parse_list(value).map_err(err)?,
                "functions" | "function" => {
                    cfg.functions = if value == "all" {
                        bench::suite_names().into_iter().map(String::from).collect()
                    } else {
                        list_items(value).map(String::from).collect()
                    }
                }
                "dim" => cfg.dim = parse_one(value).map_err(err)?,
                "max_nfe" => cfg.max_nfe = parse_list(value).map_err(err)?,
                "max_iter" => cfg.max_iter = parse_one(value).map_err(err)?,
                "repeats" => {
                    cfg.repeats = parse_one(value).map_err(err)?;
                    repeats_set = true;
                }
                "base_seed" => cfg.base_seed = parse_one(value).map_err(err)?,
                "seeds" => cfg.seeds = Some(parse_list(value).map_err(err)?),
                "suite_seed" => cfg.suite_seed = parse_one(value).map_err(err)?,
                "trace_grid" => {
                    cfg.trace_grid = if value == "auto" {
                        None
                    } else {
                        Some(parse_list(value).map_err(err)?)
                    }
                }
                "output_dir" => cfg.output_dir = PathBuf::from(value),
                "de_pop_size" => cfg.de.pop_size = parse_one(value).map_err(err)?,
                "de_cr" => cfg.de.cr = parse_one(value).map_err(err)?,
                "de_f_low" => de_f_low = Some(parse_one::<f64>(value).map_err(err)?),
                "de_f_high" => de_f_high = Some(parse_one::<f64>(value).map_err(err)?),
                "cc_pop_size" => cfg.cc.pop_size = parse_one(value).map_err(err)?,
                "cc_f" => cfg.cc.f = parse_one(value).map_err(err)?,
                "cc_cr" => cfg.cc.cr = parse_one(value).map_err(err)?,
                "cc_groups" => cfg.cc.num_groups = parse_one(value).map_err(err)?,
                "tie_epsilon" => cfg.tie_epsilon = parse_one(value).map_err(err)?,
                "record_wall_time" => cfg.record_wall_time = parse_one(value).map_err(err)?,
                _ => {
                    return Err(HarnessError::config(
                        line_no,
                        format!("unknown key {key:?}"),
                    ))
                }
            }
        }
        if de_f_low.is_some() || de_f_high.is_some() {
            let (cur_low, cur_high) = match cfg.de.f {
                ScaleFactor::Uniform { low, high } => (low, high),
                ScaleFactor::Fixed(f) => (f, f),
            };
            cfg.de.f = ScaleFactor::Uniform {
                low: de_f_low.unwrap_or(cur_low),
                high: de_f_high.unwrap_or(cur_high),
            };
        }
        if let Some(seeds) = &cfg.seeds {
            if repeats_set && seeds.len() != cfg.repeats {
                return Err(HarnessError::config_msg(format!(
                    "seeds lists {} values but repeats = {}",
                    seeds.len(),
                    cfg.repeats
                )));
            }
            cfg.repeats = seeds.len();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Applies the output-directory environment override, if set.
    pub fn with_env_overrides(mut self) -> Self {
        if let Some(dir) = std::env::var_os(OUTPUT_DIR_ENV) {
            if !dir.is_empty() {
                self.output_dir = PathBuf::from(dir);
            }
        }
        self
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.algorithms.is_empty() {
            return Err(HarnessError::config_msg("no algorithms configured"));
        }
        if self.functions.is_empty() {
            return Err(HarnessError::config_msg("no functions configured"));
        }
        let names = bench::suite_names();
        if let Some(bad) = self.functions.iter().find(|f| !names.contains(&f.as_str())) {
            return Err(HarnessError::config_msg(format!(
                "unknown function {bad:?}"
            )));
        }
        if self.dim < 2 {
            return Err(HarnessError::config_msg(format!(
                "dim must be >= 2, got {}",
                self.dim
            )));
        }
        if self.repeats == 0 {
            return Err(HarnessError::config_msg("repeats must be >= 1"));
        }
        if self.max_nfe.is_empty() || self.max_nfe.contains(&0) {
            return Err(HarnessError::config_msg(
                "max_nfe must list positive budgets",
            ));
        }
        if self.max_iter == 0 {
            return Err(HarnessError::config_msg("max_iter must be >= 1"));
        }
        if self.tie_epsilon.is_nan() || self.tie_epsilon < 0.0 {
            return Err(HarnessError::config_msg("tie_epsilon must be >= 0"));
        }
        if let Some(grid) = &self.trace_grid {
            if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) || grid[0] == 0 {
                return Err(HarnessError::config_msg(
                    "trace_grid must be strictly increasing positive NFEs",
                ));
            }
        }
        for alg in &self.algorithms {
            match alg {
                Algorithm::Mcd => {}
                Algorithm::De => self
                    .de
                    .validate()
                    .map_err(|e| HarnessError::config_msg(e.to_string()))?,
                Algorithm::Cc => self
                    .cc
                    .validate(self.dim)
                    .map_err(|e| HarnessError::config_msg(e.to_string()))?,
            }
        }
        for &budget in &self.max_nfe {
            for alg in &self.algorithms {
                let ok = match alg {
                    Algorithm::Mcd => restart_plan(self.dim, self.max_iter, budget).is_ok(),
                    Algorithm::De => budget >= self.de.pop_size,
                    Algorithm::Cc => budget >= self.cc.pop_size,
                };
                if !ok {
                    return Err(HarnessError::Budget(format!(
                        "max_nfe = {budget} is too small for {} at dim = {}",
                        alg.as_str(),
                        self.dim
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn seed_for(&self, repeat: usize) -> u64 {
        match &self.seeds {
            Some(s) => s[repeat],
            None => self.base_seed.wrapping_add(repeat as u64),
        }
    }

    /// Checkpoints used to densify traces for a run with budget `max_nfe`.
    pub fn grid_for(&self, max_nfe: usize) -> Vec<usize> {
        match &self.trace_grid {
            Some(g) => g.iter().copied().filter(|&n| n <= max_nfe).collect(),
            None => {
                let points = AUTO_GRID_POINTS.min(max_nfe);
                let mut grid: Vec<usize> = (1..=points).map(|k| k * max_nfe / points).collect();
                grid.dedup();
                grid
            }
        }
    }

    /// Canonical text form; parsing it yields an equal config.
    pub fn to_text(&self) -> String {
        let join = |v: Vec<String>| v.join(", ");
        let mut s = String::new();
        let alg = join(
            self.algorithms
                .iter()
                .map(|a| a.as_str().to_string())
                .collect(),
        );
        let _ = writeln!(s, "algorithms = {alg}");
        let _ = writeln!(s, "functions = {}", self.functions.join(", "));
        let _ = writeln!(s, "dim = {}", self.dim);
        let _ = writeln!(
            s,
            "max_nfe = {}",
            join(self.max_nfe.iter().map(|n| n.to_string()).collect())
        );
        let _ = writeln!(s, "max_iter = {}", self.max_iter);
        let _ = writeln!(s, "repeats = {}", self.repeats);
        let _ = writeln!(s, "base_seed = {}", self.base_seed);
        if let Some(seeds) = &self.seeds {
            let _ = writeln!(
                s,
                "seeds = {}",
                join(seeds.iter().map(|n| n.to_string()).collect())
            );
        }
        let _ = writeln!(s, "suite_seed = {}", self.suite_seed);
        match &self.trace_grid {
            Some(g) => {
                let _ = writeln!(
                    s,
                    "trace_grid = {}",
                    join(g.iter().map(|n| n.to_string()).collect())
                );
            }
            None => {
                let _ = writeln!(s, "trace_grid = auto");
            }
        }
        let _ = writeln!(s, "output_dir = {}", self.output_dir.display());
        let _ = writeln!(s, "de_pop_size = {}", self.de.pop_size);
        let _ = writeln!(s, "de_cr = {:?}", self.de.cr);
        let (lo, hi) = match self.de.f {
            ScaleFactor::Uniform { low, high } => (low, high),
            ScaleFactor::Fixed(f) => (f, f),
        };
        let _ = writeln!(s, "de_f_low = {lo:?}");
        let _ = writeln!(s, "de_f_high = {hi:?}");
        let _ = writeln!(s, "cc_pop_size = {}", self.cc.pop_size);
        let _ = writeln!(s, "cc_f = {:?}", self.cc.f);
        let _ = writeln!(s, "cc_cr = {:?}", self.cc.cr);
        let _ = writeln!(s, "cc_groups = {}", self.cc.num_groups);
        let _ = writeln!(s, "tie_epsilon = {:?}", self.tie_epsilon);
        let _ = writeln!(s, "record_wall_time = {}", self.record_wall_time);
        s
    }
}

fn list_items(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn parse_one<T: FromStr>(value: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value.parse::<T>().map_err(|e| format!("{value:?}: {e}"))
}

fn parse_list<T: FromStr>(value: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    let items: Vec<T> = list_items(value).map(parse_one).collect::<Result<_, _>>()?;
    if items.is_empty() {
        return Err("empty list".into());
    }
    Ok(items)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_comments_and_lists() {
        let cfg = ExperimentConfig::parse(
            "# grid\nalgorithms = mcd, de  # two\nfunctions = shifted_sphere\ndim = 10\nmax_nfe = 1000, 5000\n\
             max_iter = 10\nrepeats = 3\nbase_seed = 7\ntrace_grid = 100, 500, 1000\noutput_dir = /tmp/x\n\
             de_f_low = 0.3\n",
        )
        .unwrap();
        assert_eq!(cfg.algorithms, vec![Algorithm::Mcd, Algorithm::De]);
        assert_eq!(cfg.max_nfe, vec![1000, 5000]);
        assert_eq!(cfg.seed_for(2), 9);
        assert_eq!(
            cfg.de.f,
            ScaleFactor::Uniform {
                low: 0.3,
                high: 0.8
            }
        );
        assert_eq!(cfg.grid_for(1000), vec![100, 500, 1000]);
        assert_eq!(ExperimentConfig::parse(&cfg.to_text()).unwrap(), cfg);
    }

    #[test]
    fn config_errors_carry_exit_code_two() {
        for text in [
            "nonsense",
            "colour = red",
            "dim = ten",
            "repeats = 0",
            "functions = nope",
            "algorithms = pso",
            "trace_grid = 5, 3",
        ] {
            let e = ExperimentConfig::parse(text).unwrap_err();
            assert_eq!(e.exit_code(), 2, "{text}: {e}");
        }
        let e = ExperimentConfig::parse("dim = x").unwrap_err();
        assert!(e.to_string().contains("line 1"));
    }

    #[test]
    fn budget_errors_carry_exit_code_three() {
        let e = ExperimentConfig::parse("algorithms = mcd\ndim = 10\nmax_iter = 10\nmax_nfe = 199")
            .unwrap_err();
        assert_eq!(e.exit_code(), 3);
        let e = ExperimentConfig::parse("algorithms = de\ndim = 10\nmax_nfe = 20").unwrap_err();
        assert_eq!(e.exit_code(), 3);
    }

    #[test]
    fn explicit_seeds() {
        let cfg =
            ExperimentConfig::parse("dim = 10\nseeds = 5, 5\nmax_nfe = 1000\nalgorithms = mcd")
                .unwrap();
        assert_eq!(cfg.repeats, 2);
        assert_eq!((cfg.seed_for(0), cfg.seed_for(1)), (5, 5));
        assert!(
            ExperimentConfig::parse("dim = 10\nrepeats = 3\nseeds = 5, 5\nalgorithms = mcd")
                .is_err()
        );
    }

    #[test]
    fn auto_grid() {
        let cfg = ExperimentConfig::default();
        let g = cfg.grid_for(10_000);
        assert_eq!(g.len(), AUTO_GRID_POINTS);
        assert_eq!((g[0], *g.last().unwrap()), (200, 10_000));
        assert_eq!(cfg.grid_for(7), (1..=7).collect::<Vec<_>>());
    }
}
