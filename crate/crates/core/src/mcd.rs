//! Modified coordinate descent (MCD).
//!
//! Each restart starts from the center of the original box. For every
//! dimension, taken in the order of a random permutation, the current
//! interval is split into two halves and the center of each half is
//! evaluated with all other coordinates held fixed. The better half becomes
//! the new interval for that dimension ("folding"), so after `k` passes every
//! dimension has shrunk by `2^k`. Ties go to the upper half.
//!
//! A run performs `r_max = floor(max_nfe / (2 * D * max_iter))` restarts of
//! `max_iter` passes each, spending exactly `2 * D * max_iter * r_max`
//! evaluations.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::evaluator::{BudgetedEvaluator, Objective};
use crate::optimizer::{Optimizer, RunOutcome};
use crate::seed::SeedSource;
use crate::space::{Bounds, Candidate};

/// Restart budget for one MCD run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RestartPlan {
    pub dim: usize,
    pub max_iter: usize,
    pub max_nfe: usize,
    pub r_max: usize,
}

impl RestartPlan {
    /// Evaluations one restart spends: `2 * D * max_iter`.
    pub fn nfe_per_restart(&self) -> usize {
        2 * self.dim * self.max_iter
    }

    pub fn planned_nfe(&self) -> usize {
        self.nfe_per_restart() * self.r_max
    }

    /// Budget left unspent by the floor in the restart count.
    pub fn unspent(&self) -> usize {
        self.max_nfe - self.planned_nfe()
    }
}

pub fn restart_plan(dim: usize, max_iter: usize, max_nfe: usize) -> Result<RestartPlan> {
    if dim == 0 || max_iter == 0 || max_nfe == 0 {
        return Err(Error::InvalidParameter(format!(
            "dim, max_iter and max_nfe must be positive (got {dim}, {max_iter}, {max_nfe})"
        )));
    }
    let per_restart = 2usize
        .checked_mul(dim)
        .and_then(|v| v.checked_mul(max_iter))
        .ok_or_else(|| Error::InvalidParameter("2 * dim * max_iter overflows".into()))?;
    let r_max = max_nfe / per_restart;
    if r_max == 0 {
        return Err(Error::InsufficientBudget {
            needed: per_restart,
            max_nfe,
        });
    }
    Ok(RestartPlan {
        dim,
        max_iter,
        max_nfe,
        r_max,
    })
}

/// The two initial candidates, both at the box center and unevaluated.
pub fn init_center(bounds: &Bounds) -> (Candidate, Candidate) {
    let c = bounds.center();
    (Candidate::unevaluated(c.clone()), Candidate::unevaluated(c))
}

/// Uniformly random permutation of `0..dim`.
pub fn draw_permutation<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..dim).collect();
    perm.shuffle(rng);
    perm
}

/// Halves dimension `i` of `bounds`, keeping the lower or the upper half.
///
/// When the interval is too narrow for its midpoint to be representable
/// strictly inside it, the bounds are returned unchanged.
pub fn fold(bounds: &Bounds, i: usize, keep_lower: bool) -> Bounds {
    let mut out = bounds.clone();
    fold_in_place(&mut out, i, keep_lower);
    out
}

fn fold_in_place(bounds: &mut Bounds, i: usize, keep_lower: bool) {
    let mid = bounds.midpoint(i);
    if !(bounds.lower()[i] < mid && mid < bounds.upper()[i]) {
        return;
    }
    if keep_lower {
        bounds.set_upper(i, mid);
    } else {
        bounds.set_lower(i, mid);
    }
}

/// Search state of one restart.
#[derive(Debug, Clone)]
pub struct McdState {
    pub bounds: Bounds,
    pub x: Candidate,
    pub y: Candidate,
    /// Winner of the last comparison.
    pub s: Candidate,
    pub perm: Vec<usize>,
    pub iter: usize,
}

impl McdState {
    pub fn new(bounds: Bounds, perm: Vec<usize>) -> Self {
        let (x, y) = init_center(&bounds);
        let s = x.clone();
        Self {
            bounds,
            x,
            y,
            s,
            perm,
            iter: 0,
        }
    }
}

/// Outcome of one region-of-interest comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoiDecision {
    pub dim: usize,
    /// Probe coordinate in the lower half, `L + (U - L) / 4`.
    pub lower_probe: f64,
    /// Probe coordinate in the upper half, `U - (U - L) / 4`.
    pub upper_probe: f64,
    pub lower_value: f64,
    pub upper_value: f64,
    pub keep_lower: bool,
}

impl RoiDecision {
    pub fn winner_value(&self) -> f64 {
        if self.keep_lower {
            self.lower_value
        } else {
            self.upper_value
        }
    }
}

/// Evaluates the centers of both halves of dimension `i` and sets `x`, `y`
/// and `s` to the winner. Spends exactly two evaluations; the bounds are not
/// touched (see [`fold`]).
pub fn roi_step(
    state: &mut McdState,
    i: usize,
    ev: &mut BudgetedEvaluator<'_>,
) -> Result<RoiDecision> {
    if ev.remaining() < 2 {
        return Err(Error::BudgetExhausted {
            max_nfe: ev.max_nfe(),
        });
    }
    let lo = state.bounds.lower()[i];
    let hi = state.bounds.upper()[i];
    let q = (hi - lo) / 4.0;
    let lower_probe = lo + q;
    let upper_probe = hi - q;

    state.x.position[i] = lower_probe;
    state.y.position[i] = upper_probe;
    let f1 = ev.evaluate(&state.x.position)?;
    let f2 = ev.evaluate(&state.y.position)?;

    let keep_lower = f1 < f2;
    let (coord, value) = if keep_lower {
        (lower_probe, f1)
    } else {
        (upper_probe, f2)
    };
    for c in [&mut state.x, &mut state.y, &mut state.s] {
        c.position[i] = coord;
        c.value = Some(value);
    }

    Ok(RoiDecision {
        dim: i,
        lower_probe,
        upper_probe,
        lower_value: f1,
        upper_value: f2,
        keep_lower,
    })
}

/// Hooks for watching a run step by step.
pub trait McdObserver {
    fn on_step(
        &mut self,
        _restart: usize,
        _iteration: usize,
        _decision: &RoiDecision,
        _state: &McdState,
    ) {
    }

    fn on_iteration_end(&mut self, _restart: usize, _iteration: usize, _bounds: &Bounds) {}
}

impl McdObserver for () {}

/// How the per-restart dimension order is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DimensionOrder {
    /// Fresh random permutation per restart, from the `"perm"` stream.
    #[default]
    Random,
    /// `0, 1, ..., D-1` on every restart.
    Identity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McdOutcome {
    pub run: RunOutcome,
    /// `S*`: the best restart-final solution, compared on cached values.
    /// This is what the algorithm returns; `run.best` may be lower.
    pub restart_best: Candidate,
    pub plan: RestartPlan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mcd {
    pub max_iter: usize,
    pub order: DimensionOrder,
}

impl Mcd {
    pub fn new(max_iter: usize) -> Self {
        Self {
            max_iter,
            order: DimensionOrder::Random,
        }
    }

    pub fn with_order(mut self, order: DimensionOrder) -> Self {
        self.order = order;
        self
    }

    pub fn run(&self, objective: &dyn Objective, max_nfe: usize, seed: u64) -> Result<McdOutcome> {
        self.run_observed(objective, max_nfe, seed, &mut ())
    }

    pub fn run_observed(
        &self,
        objective: &dyn Objective,
        max_nfe: usize,
        seed: u64,
        observer: &mut dyn McdObserver,
    ) -> Result<McdOutcome> {
        let original = objective.bounds();
        let dim = original.dim();
        let plan = restart_plan(dim, self.max_iter, max_nfe)?;
        let mut ev = BudgetedEvaluator::new(objective, max_nfe);
        let mut perm_rng = SeedSource::new(seed).stream("perm");
        let mut restart_best: Option<Candidate> = None;

        for restart in 0..plan.r_max {
            let perm = match self.order {
                DimensionOrder::Random => draw_permutation(dim, &mut perm_rng),
                DimensionOrder::Identity => (0..dim).collect(),
            };
            let mut state = McdState::new(original.clone(), perm);
            for iteration in 0..self.max_iter {
                for ind in 0..dim {
                    let i = state.perm[ind];
                    let decision = roi_step(&mut state, i, &mut ev)?;
                    fold_in_place(&mut state.bounds, i, decision.keep_lower);
                    observer.on_step(restart, iteration, &decision, &state);
                }
                state.iter = iteration + 1;
                observer.on_iteration_end(restart, iteration, &state.bounds);
            }
            // S* is replaced only on strict improvement of the cached value.
            let current = restart_best
                .as_ref()
                .and_then(|c| c.value)
                .unwrap_or(f64::INFINITY);
            if state.s.value.is_some_and(|v| v < current) || restart_best.is_none() {
                restart_best = Some(state.s);
            }
        }

        debug_assert_eq!(ev.used_nfe(), plan.planned_nfe());
        let (best, trace, used_nfe) = ev.into_parts();
        let restart_best = restart_best.ok_or(Error::NoEvaluations)?;
        Ok(McdOutcome {
            run: RunOutcome {
                best: best.ok_or(Error::NoEvaluations)?,
                returned: restart_best.clone(),
                trace,
                used_nfe,
                max_nfe,
            },
            restart_best,
            plan,
        })
    }
}

impl Optimizer for Mcd {
    fn name(&self) -> &'static str {
        "mcd"
    }

    fn minimize(&self, objective: &dyn Objective, max_nfe: usize, seed: u64) -> Result<RunOutcome> {
        self.run(objective, max_nfe, seed).map(|o| o.run)
    }
}
