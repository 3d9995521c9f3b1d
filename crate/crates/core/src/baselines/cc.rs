//! Cooperative co-evolution with delta grouping.
//!
//! The population keeps full-length rows. Each cycle splits the dimensions
//! into groups and runs one DE/rand/1/bin generation per group, varying only
//! that group's coordinates and evaluating trials through the context vector
//! (the global best, which supplies every coordinate outside the group).
//! Groups are recomputed each cycle by sorting dimensions on how far the
//! best solution moved along them during the previous cycle.

use crate::error::{Error, Result};
use crate::evaluator::{BudgetedEvaluator, Objective};
use crate::optimizer::{Optimizer, RunOutcome};
use crate::seed::SeedSource;
use crate::space::Candidate;

use super::de::{
    generation_on, init_population, DeChoices, GenerationStatus, Population, RngChoices,
    ScaleFactor,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CcConfig {
    pub pop_size: usize,
    pub f: f64,
    pub cr: f64,
    pub num_groups: usize,
}

impl Default for CcConfig {
    /// Population 50, `F = 0.5`, `CR = 0.9`, 10 subcomponents.
    fn default() -> Self {
        Self {
            pop_size: 50,
            f: 0.5,
            cr: 0.9,
            num_groups: 10,
        }
    }
}

impl CcConfig {
    pub fn validate(&self, dim: usize) -> Result<()> {
        if self.pop_size < 4 {
            return Err(Error::InvalidParameter(format!(
                "CC population must hold at least 4 individuals, got {}",
                self.pop_size
            )));
        }
        if !(0.0..=1.0).contains(&self.cr) || !self.f.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "CC F = {}, CR = {} out of range",
                self.f, self.cr
            )));
        }
        if self.num_groups == 0 || self.num_groups > dim {
            return Err(Error::InvalidParameter(format!(
                "{} groups cannot partition {dim} dimensions",
                self.num_groups
            )));
        }
        Ok(())
    }
}

/// Per-dimension magnitude of the best solution's move between two cycles.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaVector(pub Vec<f64>);

pub fn delta_update(prev_best: &Candidate, curr_best: &Candidate) -> Result<DeltaVector> {
    if prev_best.dim() != curr_best.dim() {
        return Err(Error::DimensionMismatch {
            expected: prev_best.dim(),
            got: curr_best.dim(),
        });
    }
    Ok(DeltaVector(
        prev_best
            .position
            .iter()
            .zip(&curr_best.position)
            .map(|(p, c)| (c - p).abs())
            .collect(),
    ))
}

/// Splits `order` into `num_groups` consecutive chunks of
/// `len / num_groups`, the last one taking the remainder.
fn chunk(order: &[usize], num_groups: usize) -> Vec<Vec<usize>> {
    let size = order.len() / num_groups;
    (0..num_groups)
        .map(|g| {
            let end = if g + 1 == num_groups {
                order.len()
            } else {
                (g + 1) * size
            };
            order[g * size..end].to_vec()
        })
        .collect()
}

/// Index-order groups, used before any delta history exists.
pub fn contiguous_groups(dim: usize, num_groups: usize) -> Result<Vec<Vec<usize>>> {
    check_groups(dim, num_groups)?;
    let order: Vec<usize> = (0..dim).collect();
    Ok(chunk(&order, num_groups))
}

/// Sorts dimensions by delta, largest first (ties by ascending index), and
/// cuts the order into equal groups.
pub fn delta_grouping(deltas: &DeltaVector, num_groups: usize) -> Result<Vec<Vec<usize>>> {
    let d = &deltas.0;
    check_groups(d.len(), num_groups)?;
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.sort_by(|&a, &b| d[b].total_cmp(&d[a]).then(a.cmp(&b)));
    Ok(chunk(&order, num_groups))
}

fn check_groups(dim: usize, num_groups: usize) -> Result<()> {
    if num_groups == 0 || num_groups > dim {
        return Err(Error::InvalidParameter(format!(
            "{num_groups} groups cannot partition {dim} dimensions"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct CcState {
    pub population: Population,
    /// Context vector: best solution evaluated so far.
    pub best: Candidate,
    /// Global best at the end of each completed cycle; entry 0 is the best
    /// of the initial population.
    pub cycle_bests: Vec<Candidate>,
    /// Groups used by the last cycle.
    pub groups: Vec<Vec<usize>>,
}

impl CcState {
    /// Random initial population, evaluated against the budget.
    pub fn init<R: rand::Rng + ?Sized>(
        cfg: &CcConfig,
        rng: &mut R,
        ev: &mut BudgetedEvaluator<'_>,
    ) -> Result<Self> {
        let population = init_population(ev.bounds(), cfg.pop_size, rng, ev)?;
        let best = ev.best().cloned().ok_or(Error::NoEvaluations)?;
        Ok(Self {
            population,
            cycle_bests: vec![best.clone()],
            best,
            groups: Vec::new(),
        })
    }

    pub fn cycles_completed(&self) -> usize {
        self.cycle_bests.len() - 1
    }

    /// Grouping for the next cycle.
    pub fn next_groups(&self, num_groups: usize) -> Result<Vec<Vec<usize>>> {
        match self.cycle_bests.as_slice() {
            [.., prev, curr] => delta_grouping(&delta_update(prev, curr)?, num_groups),
            _ => contiguous_groups(self.best.dim(), num_groups),
        }
    }
}

/// Runs one co-evolutionary cycle: one DE generation per group. Stops early
/// when the budget runs out mid-cycle.
pub fn cc_cycle(
    state: &mut CcState,
    cfg: &CcConfig,
    choices: &mut dyn DeChoices,
    ev: &mut BudgetedEvaluator<'_>,
) -> Result<GenerationStatus> {
    state.groups = state.next_groups(cfg.num_groups)?;
    let mut status = GenerationStatus::Complete;
    for group in &state.groups {
        let context = state.best.position.clone();
        status = generation_on(
            &mut state.population,
            group,
            Some(&context),
            cfg.cr,
            choices,
            ev,
        )?;
        if let Some(best) = ev.best() {
            state.best = best.clone();
        }
        if !status.is_complete() {
            break;
        }
    }
    if status.is_complete() {
        state.cycle_bests.push(state.best.clone());
    }
    Ok(status)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CooperativeCoevolution {
    pub config: CcConfig,
}

impl CooperativeCoevolution {
    pub fn new(config: CcConfig) -> Self {
        Self { config }
    }
}

impl Optimizer for CooperativeCoevolution {
    fn name(&self) -> &'static str {
        "cc"
    }

    fn minimize(&self, objective: &dyn Objective, max_nfe: usize, seed: u64) -> Result<RunOutcome> {
        self.config.validate(objective.dim())?;
        let seeds = SeedSource::new(seed);
        let mut init_rng = seeds.stream("cc-init");
        let mut rng = seeds.stream("cc");
        let mut ev = BudgetedEvaluator::new(objective, max_nfe);

        let mut state = CcState::init(&self.config, &mut init_rng, &mut ev)?;
        let mut choices = RngChoices::new(&mut rng, ScaleFactor::Fixed(self.config.f));
        while !ev.is_exhausted() {
            cc_cycle(&mut state, &self.config, &mut choices, &mut ev)?;
        }

        let (best, trace, used_nfe) = ev.into_parts();
        let best = best.ok_or(Error::NoEvaluations)?;
        Ok(RunOutcome {
            returned: best.clone(),
            best,
            trace,
            used_nfe,
            max_nfe,
        })
    }
}
