//! Classic DE/rand/1/bin with clamp-to-bound repair and greedy selection.

use rand::Rng;

use crate::error::{Error, Result};
use crate::evaluator::{BudgetedEvaluator, Objective};
use crate::optimizer::{Optimizer, RunOutcome};
use crate::seed::SeedSource;
use crate::space::Bounds;

/// Mutation scale factor: a constant, or drawn per individual from
/// `U(low, high)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScaleFactor {
    Fixed(f64),
    Uniform { low: f64, high: f64 },
}

impl ScaleFactor {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            ScaleFactor::Fixed(f) => f,
            ScaleFactor::Uniform { low, high } if low == high => low,
            ScaleFactor::Uniform { low, high } => rng.gen_range(low..high),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeConfig {
    pub pop_size: usize,
    pub cr: f64,
    pub f: ScaleFactor,
}

impl Default for DeConfig {
    /// Population 50, `CR = 0.9`, `F ~ U(0.2, 0.8)`.
    fn default() -> Self {
        Self {
            pop_size: 50,
            cr: 0.9,
            f: ScaleFactor::Uniform {
                low: 0.2,
                high: 0.8,
            },
        }
    }
}

impl DeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 4 {
            return Err(Error::InvalidParameter(format!(
                "DE population must hold at least 4 individuals, got {}",
                self.pop_size
            )));
        }
        if !(0.0..=1.0).contains(&self.cr) {
            return Err(Error::InvalidParameter(format!(
                "CR {} outside [0, 1]",
                self.cr
            )));
        }
        match self.f {
            ScaleFactor::Fixed(f) if !f.is_finite() => {
                Err(Error::InvalidParameter(format!("F {f} is not finite")))
            }
            ScaleFactor::Uniform { low, high }
                if !low.is_finite() || !high.is_finite() || low > high =>
            {
                Err(Error::InvalidParameter(format!(
                    "F range [{low}, {high}] is invalid"
                )))
            }
            _ => Ok(()),
        }
    }
}

/// Individuals stored row-wise with their last evaluated objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub rows: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

impl Population {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn best_index(&self) -> usize {
        self.values
            .iter()
            .enumerate()
            .fold(0, |b, (i, &v)| if v < self.values[b] { i } else { b })
    }
}

/// Uniform random population in `bounds`, evaluated up front.
pub fn init_population<R: Rng + ?Sized>(
    bounds: &Bounds,
    pop_size: usize,
    rng: &mut R,
    ev: &mut BudgetedEvaluator<'_>,
) -> Result<Population> {
    if ev.remaining() < pop_size {
        return Err(Error::InsufficientBudget {
            needed: pop_size,
            max_nfe: ev.max_nfe(),
        });
    }
    let mut rows = Vec::with_capacity(pop_size);
    let mut values = Vec::with_capacity(pop_size);
    for _ in 0..pop_size {
        let row: Vec<f64> = bounds
            .lower()
            .iter()
            .zip(bounds.upper())
            .map(|(&lo, &hi)| rng.gen_range(lo..=hi))
            .collect();
        values.push(ev.evaluate(&row)?);
        rows.push(row);
    }
    Ok(Population { rows, values })
}

/// Source of the random decisions a DE generation makes, so tests can
/// script them.
pub trait DeChoices {
    /// Three mutually distinct indices in `0..pop_size`, all `!= target`.
    fn donors(&mut self, target: usize, pop_size: usize) -> [usize; 3];
    fn scale(&mut self) -> f64;
    /// Position (within the coordinates being varied) that always takes the
    /// mutant value.
    fn forced_index(&mut self, len: usize) -> usize;
    /// Uniform draw in `[0, 1)` compared against CR.
    fn crossover_draw(&mut self) -> f64;
}

/// [`DeChoices`] backed by a random generator.
pub struct RngChoices<'r, R: ?Sized> {
    rng: &'r mut R,
    f: ScaleFactor,
}

impl<'r, R: Rng + ?Sized> RngChoices<'r, R> {
    pub fn new(rng: &'r mut R, f: ScaleFactor) -> Self {
        Self { rng, f }
    }
}

impl<R: Rng + ?Sized> DeChoices for RngChoices<'_, R> {
    fn donors(&mut self, target: usize, pop_size: usize) -> [usize; 3] {
        debug_assert!(pop_size >= 4);
        let mut picked = [usize::MAX; 3];
        let mut n = 0;
        while n < 3 {
            let r = self.rng.gen_range(0..pop_size);
            if r != target && !picked[..n].contains(&r) {
                picked[n] = r;
                n += 1;
            }
        }
        picked
    }

    fn scale(&mut self) -> f64 {
        self.f.sample(self.rng)
    }

    fn forced_index(&mut self, len: usize) -> usize {
        self.rng.gen_range(0..len)
    }

    fn crossover_draw(&mut self) -> f64 {
        self.rng.gen()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenerationStatus {
    Complete,
    /// The budget ran out after `completed` selections.
    BudgetExhausted {
        completed: usize,
    },
}

impl GenerationStatus {
    pub fn is_complete(&self) -> bool {
        matches!(self, GenerationStatus::Complete)
    }
}

/// One DE/rand/1/bin generation over all coordinates.
pub fn de_generation(
    pop: &mut Population,
    cfg: &DeConfig,
    choices: &mut dyn DeChoices,
    ev: &mut BudgetedEvaluator<'_>,
) -> Result<GenerationStatus> {
    let coords: Vec<usize> = (0..ev.bounds().dim()).collect();
    generation_on(pop, &coords, None, cfg.cr, choices, ev)
}

/// One generation that only varies `coords`. With a `context`, trials are
/// evaluated as the context vector with `coords` overwritten by the trial;
/// without one, the trial row itself is evaluated.
///
/// Donors are taken from the population as it was at the start of the
/// generation. A trial replaces its target iff its value is `<=` the
/// target's.
pub(crate) fn generation_on(
    pop: &mut Population,
    coords: &[usize],
    context: Option<&[f64]>,
    cr: f64,
    choices: &mut dyn DeChoices,
    ev: &mut BudgetedEvaluator<'_>,
) -> Result<GenerationStatus> {
    let bounds = ev.bounds();
    let snapshot = pop.rows.clone();
    let n = pop.len();
    let mut point = match context {
        Some(ctx) => ctx.to_vec(),
        None => Vec::new(),
    };

    for target in 0..n {
        if ev.is_exhausted() {
            return Ok(GenerationStatus::BudgetExhausted { completed: target });
        }
        let [r1, r2, r3] = choices.donors(target, n);
        let f = choices.scale();
        let forced = choices.forced_index(coords.len());

        let mut trial = snapshot[target].clone();
        for (k, &j) in coords.iter().enumerate() {
            let take_mutant = choices.crossover_draw() < cr || k == forced;
            if take_mutant {
                let v = snapshot[r1][j] + f * (snapshot[r2][j] - snapshot[r3][j]);
                trial[j] = bounds.clamp_coord(j, v);
            }
        }

        let value = if context.is_some() {
            for &j in coords {
                point[j] = trial[j];
            }
            ev.evaluate(&point)?
        } else {
            ev.evaluate(&trial)?
        };

        if value <= pop.values[target] {
            pop.rows[target] = trial;
            pop.values[target] = value;
        }
    }
    Ok(GenerationStatus::Complete)
}

/// DE/rand/1/bin run until the budget is spent.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DifferentialEvolution {
    pub config: DeConfig,
}

impl DifferentialEvolution {
    pub fn new(config: DeConfig) -> Self {
        Self { config }
    }
}

impl Optimizer for DifferentialEvolution {
    fn name(&self) -> &'static str {
        "de"
    }

    fn minimize(&self, objective: &dyn Objective, max_nfe: usize, seed: u64) -> Result<RunOutcome> {
        self.config.validate()?;
        let seeds = SeedSource::new(seed);
        let mut init_rng = seeds.stream("de-init");
        let mut rng = seeds.stream("de");
        let mut ev = BudgetedEvaluator::new(objective, max_nfe);

        let mut pop = init_population(
            objective.bounds(),
            self.config.pop_size,
            &mut init_rng,
            &mut ev,
        )?;
        let mut choices = RngChoices::new(&mut rng, self.config.f);
        while !ev.is_exhausted() {
            de_generation(&mut pop, &self.config, &mut choices, &mut ev)?;
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
