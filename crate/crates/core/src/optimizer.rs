use crate::error::Result;
use crate::evaluator::{Objective, TracePoint};
use crate::space::Candidate;

/// Result of one budgeted optimization run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    /// Best candidate ever evaluated during the run.
    pub best: Candidate,
    /// The solution the algorithm returns. Equal to `best` for the
    /// population baselines; for MCD it is the best restart-final solution.
    pub returned: Candidate,
    pub trace: Vec<TracePoint>,
    pub used_nfe: usize,
    pub max_nfe: usize,
}

impl RunOutcome {
    pub fn best_value(&self) -> f64 {
        self.best
            .value
            .expect("run outcome best is always evaluated")
    }

    pub fn returned_value(&self) -> f64 {
        self.returned
            .value
            .expect("returned solution is always evaluated")
    }
}

/// Common entry point the harness uses for every algorithm.
pub trait Optimizer: Send + Sync {
    fn name(&self) -> &'static str;

    fn minimize(&self, objective: &dyn Objective, max_nfe: usize, seed: u64) -> Result<RunOutcome>;
}
