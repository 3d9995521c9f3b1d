//! Comparison optimizers: differential evolution and cooperative
//! co-evolution with delta grouping. Both spend evaluations only through
//! [`BudgetedEvaluator`](crate::evaluator::BudgetedEvaluator).

pub mod cc;
pub mod de;

pub use cc::{
    cc_cycle, contiguous_groups, delta_grouping, delta_update, CcConfig, CcState,
    CooperativeCoevolution, DeltaVector,
};
pub use de::{
    de_generation, init_population, DeChoices, DeConfig, DifferentialEvolution, GenerationStatus,
    Population, RngChoices, ScaleFactor,
};
