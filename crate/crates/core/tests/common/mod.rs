//! Independent reference implementations used as test oracles. None of this
//! calls into the library's algorithm code.

#![allow(dead_code)]

use std::sync::Mutex;

use mcd_opt::{Bounds, Objective};

/// Objective that records every point it is asked to evaluate.
pub struct Recorder<F> {
    bounds: Bounds,
    f: F,
    pub points: Mutex<Vec<Vec<f64>>>,
}

impl<F: Fn(&[f64]) -> f64 + Send + Sync> Recorder<F> {
    pub fn new(bounds: Bounds, f: F) -> Self {
        Self {
            bounds,
            f,
            points: Mutex::new(Vec::new()),
        }
    }

    pub fn take(&self) -> Vec<Vec<f64>> {
        std::mem::take(&mut *self.points.lock().unwrap())
    }
}

impl<F: Fn(&[f64]) -> f64 + Send + Sync> Objective for Recorder<F> {
    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        self.points.lock().unwrap().push(x.to_vec());
        (self.f)(x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleStep {
    pub first: Vec<f64>,
    pub second: Vec<f64>,
    pub keep_lower: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleRun {
    pub steps: Vec<OracleStep>,
    pub best_position: Vec<f64>,
    pub best_value: f64,
}

/// MCD written out line by line: restarts from the original box,
/// center start, quarter-point probes, keep the lower half only on a strict
/// win, fold at `(L + U) / 2`.
pub fn reference_mcd<F: Fn(&[f64]) -> f64>(
    f: F,
    lower: &[f64],
    upper: &[f64],
    max_iter: usize,
    max_nfe: usize,
    mut next_perm: impl FnMut() -> Vec<usize>,
) -> OracleRun {
    let d = lower.len();
    let r_max = max_nfe / (2 * d * max_iter);
    let mut steps = Vec::new();
    let mut best_position = Vec::new();
    let mut best_value = f64::INFINITY;

    for _ in 0..r_max {
        let mut l = lower.to_vec();
        let mut u = upper.to_vec();
        let mut x: Vec<f64> = (0..d).map(|i| (l[i] + u[i]) / 2.0).collect();
        let mut y = x.clone();
        let mut s = x.clone();
        let mut fs = f64::INFINITY;
        let perm = next_perm();
        for _ in 0..max_iter {
            for &i in &perm {
                let c = (l[i] + u[i]) / 2.0;
                let q = (u[i] - l[i]) / 4.0;
                x[i] = l[i] + q;
                y[i] = u[i] - q;
                let f1 = f(&x);
                let f2 = f(&y);
                let keep_lower = f1 < f2;
                steps.push(OracleStep {
                    first: x.clone(),
                    second: y.clone(),
                    keep_lower,
                });
                if keep_lower {
                    s = x.clone();
                    fs = f1;
                    u[i] = c;
                } else {
                    s = y.clone();
                    fs = f2;
                    l[i] = c;
                }
                x = s.clone();
                y = s.clone();
            }
        }
        if fs < best_value || best_position.is_empty() {
            best_value = fs;
            best_position = s;
        }
    }
    OracleRun {
        steps,
        best_position,
        best_value,
    }
}

/// One coordinate of a separable objective `g` on `[lo, hi]`, followed for
/// `iterations` folds. Returns the final winning coordinate.
pub fn fold_simulator_1d(g: impl Fn(f64) -> f64, lo: f64, hi: f64, iterations: usize) -> f64 {
    let (mut lo, mut hi) = (lo, hi);
    let mut winner = (lo + hi) / 2.0;
    for _ in 0..iterations {
        let a = lo + (hi - lo) / 4.0;
        let b = hi - (hi - lo) / 4.0;
        let mid = (lo + hi) / 2.0;
        if g(a) < g(b) {
            winner = a;
            hi = mid;
        } else {
            winner = b;
            lo = mid;
        }
    }
    winner
}

/// Dimensions sorted by descending delta (stable, so equal deltas keep
/// index order), cut into `groups` chunks with the last one taking the rest.
pub fn sort_then_chunk(deltas: &[f64], groups: usize) -> Vec<Vec<usize>> {
    let mut idx: Vec<usize> = (0..deltas.len()).collect();
    idx.sort_by(|&a, &b| deltas[b].partial_cmp(&deltas[a]).unwrap());
    let size = deltas.len() / groups;
    let mut out = Vec::new();
    for g in 0..groups {
        if g == groups - 1 {
            out.push(idx[g * size..].to_vec());
        } else {
            out.push(idx[g * size..(g + 1) * size].to_vec());
        }
    }
    out
}

pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}
