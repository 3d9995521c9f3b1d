//! Objective functions and the evaluation counter every optimizer goes
//! through.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{Bounds, Candidate};

/// A deterministic black-box objective over a box.
pub trait Objective: Send + Sync {
    fn bounds(&self) -> &Bounds;

    /// Objective value at `x`. Callers guarantee `x` is inside `bounds()`.
    fn evaluate(&self, x: &[f64]) -> f64;

    /// `f(x*)` when it is known by construction.
    fn optimum_value(&self) -> Option<f64> {
        None
    }

    fn dim(&self) -> usize {
        self.bounds().dim()
    }
}

/// Adapts a closure into an [`Objective`].
pub struct FnObjective<F> {
    bounds: Bounds,
    optimum: Option<f64>,
    f: F,
}

impl<F> FnObjective<F>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    pub fn new(bounds: Bounds, f: F) -> Self {
        Self {
            bounds,
            optimum: None,
            f,
        }
    }

    pub fn with_optimum(mut self, value: f64) -> Self {
        self.optimum = Some(value);
        self
    }
}

impl<F> Objective for FnObjective<F>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }

    fn optimum_value(&self) -> Option<f64> {
        self.optimum
    }
}

/// One improvement of the best-so-far value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub nfe: usize,
    pub best_value: f64,
}

/// Wraps an objective, enforces the evaluation budget and records the
/// best-so-far trace. The trace gets one entry per strict improvement.
pub struct BudgetedEvaluator<'a> {
    objective: &'a dyn Objective,
    max_nfe: usize,
    used_nfe: usize,
    best: Option<Candidate>,
    trace: Vec<TracePoint>,
}

impl<'a> BudgetedEvaluator<'a> {
    pub fn new(objective: &'a dyn Objective, max_nfe: usize) -> Self {
        Self {
            objective,
            max_nfe,
            used_nfe: 0,
            best: None,
            trace: Vec::new(),
        }
    }

    pub fn objective(&self) -> &'a dyn Objective {
        self.objective
    }

    pub fn bounds(&self) -> &'a Bounds {
        self.objective.bounds()
    }

    pub fn max_nfe(&self) -> usize {
        self.max_nfe
    }

    pub fn used_nfe(&self) -> usize {
        self.used_nfe
    }

    pub fn remaining(&self) -> usize {
        self.max_nfe - self.used_nfe
    }

    pub fn is_exhausted(&self) -> bool {
        self.used_nfe >= self.max_nfe
    }

    pub fn best(&self) -> Option<&Candidate> {
        self.best.as_ref()
    }

    pub fn best_value(&self) -> Option<f64> {
        self.best.as_ref().and_then(|c| c.value)
    }

    pub fn trace(&self) -> &[TracePoint] {
        &self.trace
    }

    /// Evaluates `x`, spending one unit of budget.
    pub fn evaluate(&mut self, x: &[f64]) -> Result<f64> {
        if self.is_exhausted() {
            return Err(Error::BudgetExhausted {
                max_nfe: self.max_nfe,
            });
        }
        self.objective.bounds().check(x)?;
        let value = self.objective.evaluate(x);
        self.used_nfe += 1;
        if self.best_value().is_none_or(|b| value < b) {
            self.best = Some(Candidate::evaluated(x.to_vec(), value));
            self.trace.push(TracePoint {
                nfe: self.used_nfe,
                best_value: value,
            });
        }
        Ok(value)
    }

    /// Best value found minus the objective's known optimum.
    pub fn error(&self) -> Result<f64> {
        let optimum = self
            .objective
            .optimum_value()
            .ok_or(Error::MissingOptimum)?;
        let best = self.best_value().ok_or(Error::NoEvaluations)?;
        Ok(best - optimum)
    }

    pub fn into_parts(self) -> (Option<Candidate>, Vec<TracePoint>, usize) {
        (self.best, self.trace, self.used_nfe)
    }
}
