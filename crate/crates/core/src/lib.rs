//! Budget-limited derivative-free optimization.
//!
//! The centerpiece is [`mcd::Mcd`], a modified coordinate descent that
//! bisects one dimension at a time, keeps the half whose center evaluates
//! better, and restarts with new dimension orders while the evaluation budget
//! allows. [`baselines`] provides differential evolution and cooperative
//! co-evolution with delta grouping for comparison, [`bench`] a seeded
//! benchmark suite with known optima, and [`harness`] the experiment runner
//! behind the `mcd-bench` binary.
//!
//! ```
//! use mcd_opt::{Bounds, FnObjective, Mcd};
//!
//! let sphere = FnObjective::new(Bounds::uniform(10, -100.0, 100.0).unwrap(), |x: &[f64]| {
//!     x.iter().map(|v| v * v).sum()
//! });
//! let out = Mcd::new(10).run(&sphere, 1000, 42).unwrap();
//! assert_eq!(out.plan.r_max, 5);
//! assert_eq!(out.run.used_nfe, 1000);
//! ```

pub mod baselines;
pub mod bench;
pub mod error;
pub mod evaluator;
pub mod harness;
pub mod mcd;
pub mod optimizer;
pub mod seed;
pub mod space;

pub use error::{Error, Result};
pub use evaluator::{BudgetedEvaluator, FnObjective, Objective, TracePoint};
pub use mcd::{Mcd, McdOutcome, RestartPlan};
pub use optimizer::{Optimizer, RunOutcome};
pub use seed::SeedSource;
pub use space::{Bounds, Candidate};
