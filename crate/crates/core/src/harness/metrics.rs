//! Comparison metrics: improved accuracy rate, win/tie/loss tallies and
//! trace densification.

use serde::{Deserialize, Serialize};

use crate::evaluator::TracePoint;

use super::HarnessError;

/// Ratio of a baseline's error to MCD's error. Values above 1 mean MCD was
/// more accurate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Iar {
    pub value: f64,
    /// Set when MCD's error is 0 and the baseline's is not; `value` is then
    /// `+inf`.
    pub infinite: bool,
}

impl Iar {
    pub fn mcd_better(&self) -> bool {
        self.value > 1.0
    }
}

pub fn compute_iar(err_baseline: f64, err_mcd: f64) -> Iar {
    if err_mcd == 0.0 {
        if err_baseline == 0.0 {
            return Iar {
                value: 1.0,
                infinite: false,
            };
        }
        return Iar {
            value: f64::INFINITY,
            infinite: true,
        };
    }
    Iar {
        value: err_baseline / err_mcd,
        infinite: false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Wtl {
    pub wins: usize,
    pub ties: usize,
    pub losses: usize,
}

impl Wtl {
    pub fn total(&self) -> usize {
        self.wins + self.ties + self.losses
    }
}

/// Per-function comparison of MCD's aggregate error against a baseline's.
/// Two errors tie when `|a - b| <= epsilon * max(|a|, |b|)`; with
/// `epsilon = 0` only exact equality ties.
pub fn tally_wtl(
    errors_mcd: &[f64],
    errors_baseline: &[f64],
    epsilon: f64,
) -> Result<Wtl, HarnessError> {
    if errors_mcd.len() != errors_baseline.len() {
        return Err(HarnessError::LengthMismatch {
            left: errors_mcd.len(),
            right: errors_baseline.len(),
        });
    }
    let mut out = Wtl::default();
    for (&m, &b) in errors_mcd.iter().zip(errors_baseline) {
        if m == b || (m - b).abs() <= epsilon * m.abs().max(b.abs()) {
            out.ties += 1;
        } else if m < b {
            out.wins += 1;
        } else {
            out.losses += 1;
        }
    }
    Ok(out)
}

/// Best-so-far value at each checkpoint, carrying the last improvement
/// forward. `None` before the first improvement.
pub fn densify(trace: &[TracePoint], grid: &[usize]) -> Vec<Option<f64>> {
    let mut out = Vec::with_capacity(grid.len());
    let mut k = 0;
    let mut current = None;
    for &g in grid {
        while k < trace.len() && trace[k].nfe <= g {
            current = Some(trace[k].best_value);
            k += 1;
        }
        out.push(current);
    }
    out
}

pub fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iar_examples() {
        assert_eq!(compute_iar(5.0, 5.0).value, 1.0);
        let i = compute_iar(1.0, 0.0);
        assert!(i.infinite && i.value.is_infinite() && i.mcd_better());
        assert_eq!(
            compute_iar(0.0, 0.0),
            Iar {
                value: 1.0,
                infinite: false
            }
        );
        assert!(!compute_iar(1.0, 2.0).mcd_better());
    }

    #[test]
    fn wtl_examples() {
        assert_eq!(
            tally_wtl(&[1.0, 2.0, 3.0], &[2.0, 2.0, 1.0], 0.0).unwrap(),
            Wtl {
                wins: 1,
                ties: 1,
                losses: 1
            }
        );
        let same = [0.5, 7.0, 1e9];
        assert_eq!(
            tally_wtl(&same, &same, 0.0).unwrap(),
            Wtl {
                wins: 0,
                ties: 3,
                losses: 0
            }
        );
        let m: Vec<f64> = (0..20).map(f64::from).collect();
        let b: Vec<f64> = m.iter().map(|v| v + 1.0).collect();
        assert_eq!(
            tally_wtl(&m, &b, 0.0).unwrap(),
            Wtl {
                wins: 20,
                ties: 0,
                losses: 0
            }
        );
        assert!(tally_wtl(&[1.0], &[], 0.0).is_err());
        assert_eq!(tally_wtl(&[100.0], &[100.5], 0.01).unwrap().ties, 1);
    }

    #[test]
    fn densify_carries_forward() {
        let trace = [
            TracePoint {
                nfe: 3,
                best_value: 9.0,
            },
            TracePoint {
                nfe: 7,
                best_value: 4.0,
            },
        ];
        assert_eq!(
            densify(&trace, &[2, 4, 6, 8]),
            vec![None, Some(9.0), Some(9.0), Some(4.0)]
        );
        assert_eq!(densify(&trace, &[3, 7]), vec![Some(9.0), Some(4.0)]);
        assert_eq!(densify(&[], &[1]), vec![None]);
    }
}
