//! Search-space bounds and candidate solutions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned box `[lower[i], upper[i]]` with strictly positive width in
/// every dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::InvalidBounds("zero dimensions".into()));
        }
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        for (i, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidBounds(format!("dimension {i} is not finite")));
            }
            if lo >= hi {
                return Err(Error::InvalidBounds(format!(
                    "dimension {i}: lower {lo} is not below upper {hi}"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The hypercube `[lo, hi]^dim`.
    pub fn uniform(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn width(&self, i: usize) -> f64 {
        self.upper[i] - self.lower[i]
    }

    /// Midpoint of dimension `i`, computed as `lower + width / 2`.
    pub fn midpoint(&self, i: usize) -> f64 {
        self.lower[i] + (self.upper[i] - self.lower[i]) / 2.0
    }

    pub fn center(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.midpoint(i)).collect()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.check(x).is_ok()
    }

    /// Validates that `x` has the right length and lies inside the box.
    /// NaN coordinates are reported as out of the box.
    pub fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        for (i, &v) in x.iter().enumerate() {
            let (lo, hi) = (self.lower[i], self.upper[i]);
            if !(lo <= v && v <= hi) {
                return Err(Error::OutOfBox {
                    index: i,
                    value: v,
                    lower: lo,
                    upper: hi,
                });
            }
        }
        Ok(())
    }

    /// Clamps `x[i]` to the violated bound.
    pub fn clamp_coord(&self, i: usize, v: f64) -> f64 {
        v.clamp(self.lower[i], self.upper[i])
    }

    /// True when `other` lies inside `self` in every dimension.
    pub fn encloses(&self, other: &Bounds) -> bool {
        self.dim() == other.dim()
            && (0..self.dim())
                .all(|i| self.lower[i] <= other.lower[i] && other.upper[i] <= self.upper[i])
    }

    pub(crate) fn set_lower(&mut self, i: usize, v: f64) {
        debug_assert!(v < self.upper[i]);
        self.lower[i] = v;
    }

    pub(crate) fn set_upper(&mut self, i: usize, v: f64) {
        debug_assert!(self.lower[i] < v);
        self.upper[i] = v;
    }
}

/// A point in the search space with its objective value, if it has been
/// evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub position: Vec<f64>,
    pub value: Option<f64>,
}

impl Candidate {
    pub fn unevaluated(position: Vec<f64>) -> Self {
        Self {
            position,
            value: None,
        }
    }

    pub fn evaluated(position: Vec<f64>, value: f64) -> Self {
        Self {
            position,
            value: Some(value),
        }
    }

    pub fn dim(&self) -> usize {
        self.position.len()
    }
}
