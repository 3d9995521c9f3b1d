//! Seeded benchmark suite with known optima.
//!
//! Eight functions cover four structural categories: separable unimodal,
//! separable multimodal, partially separable (rotated variable groups) and
//! fully non-separable. Every function lives on `[-100, 100]^D`, is shifted
//! so its optimum sits at a seeded point in the middle 80% of the box, and
//! has optimum value 0.

use std::f64::consts::PI;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::evaluator::Objective;
use crate::seed::SeedSource;
use crate::space::Bounds;

pub const BOX_LIMIT: f64 = 100.0;
/// `f(x*)` of every suite function.
pub const OPTIMUM_VALUE: f64 = 0.0;
const ELLIPTIC_CONDITION: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseFunction {
    Sphere,
    Elliptic,
    Rastrigin,
    Ackley,
    Rosenbrock,
    Schwefel12,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Category {
    SeparableUnimodal,
    SeparableMultimodal,
    PartiallySeparable { group_size: usize },
    FullyNonseparable,
}

impl Category {
    pub fn is_separable(&self) -> bool {
        matches!(
            self,
            Category::SeparableUnimodal | Category::SeparableMultimodal
        )
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Category::SeparableUnimodal => f.write_str("separable-unimodal"),
            Category::SeparableMultimodal => f.write_str("separable-multimodal"),
            Category::PartiallySeparable { group_size } => {
                write!(f, "partially-separable({group_size})")
            }
            Category::FullyNonseparable => f.write_str("fully-nonseparable"),
        }
    }
}

/// Orthogonal `m x m` matrix applied to a subset of coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct RotatedGroup {
    pub indices: Vec<usize>,
    /// Row-major.
    pub matrix: Vec<f64>,
}

impl RotatedGroup {
    pub fn size(&self) -> usize {
        self.indices.len()
    }

    pub fn identity(indices: Vec<usize>) -> Self {
        let m = indices.len();
        let mut matrix = vec![0.0; m * m];
        for i in 0..m {
            matrix[i * m + i] = 1.0;
        }
        Self { indices, matrix }
    }

    /// `max |Q^T Q - I|`.
    pub fn orthogonality_error(&self) -> f64 {
        let m = self.size();
        let q = &self.matrix;
        let mut worst: f64 = 0.0;
        for a in 0..m {
            for b in 0..m {
                let dot: f64 = (0..m).map(|r| q[r * m + a] * q[r * m + b]).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    fn apply(&self, z: &mut [f64], scratch: &mut Vec<f64>) {
        let m = self.size();
        scratch.clear();
        scratch.extend(self.indices.iter().map(|&i| z[i]));
        for (r, &i) in self.indices.iter().enumerate() {
            let row = &self.matrix[r * m..(r + 1) * m];
            z[i] = row.iter().zip(scratch.iter()).map(|(a, b)| a * b).sum();
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchFunction {
    pub name: String,
    pub category: Category,
    pub base: BaseFunction,
    pub seed: u64,
    /// Optimum position `o`.
    pub shift: Vec<f64>,
    pub rotations: Vec<RotatedGroup>,
    pub bounds: Bounds,
}

impl BenchFunction {
    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    /// The point where the function attains 0.
    pub fn optimum_position(&self) -> &[f64] {
        &self.shift
    }

    /// Hex SHA-256 of the optimum position's little-endian f64 bytes.
    pub fn optimum_hash(&self) -> String {
        let mut h = Sha256::new();
        for v in &self.shift {
            h.update(v.to_le_bytes());
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Same function with every rotation replaced by the identity.
    pub fn without_rotations(&self) -> Self {
        let mut out = self.clone();
        out.rotations = self
            .rotations
            .iter()
            .map(|g| RotatedGroup::identity(g.indices.clone()))
            .collect();
        out
    }

    /// Evaluates after checking that `x` lies in the box.
    pub fn eval_checked(&self, x: &[f64]) -> Result<f64> {
        self.bounds.check(x)?;
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: &[f64]) -> f64 {
        let mut z: Vec<f64> = x.iter().zip(&self.shift).map(|(a, o)| a - o).collect();
        if !self.rotations.is_empty() {
            let mut scratch = Vec::new();
            for g in &self.rotations {
                g.apply(&mut z, &mut scratch);
            }
        }
        base_value(self.base, &mut z)
    }
}

impl Objective for BenchFunction {
    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        self.eval_unchecked(x)
    }

    fn optimum_value(&self) -> Option<f64> {
        Some(OPTIMUM_VALUE)
    }
}

/// Base formula on already shifted (and rotated) coordinates `z`.
pub fn base_value(base: BaseFunction, z: &mut [f64]) -> f64 {
    let d = z.len();
    match base {
        BaseFunction::Sphere => z.iter().map(|v| v * v).sum(),
        BaseFunction::Elliptic => {
            if d == 1 {
                return z[0] * z[0];
            }
            z.iter()
                .enumerate()
                .map(|(i, v)| ELLIPTIC_CONDITION.powf(i as f64 / (d - 1) as f64) * v * v)
                .sum()
        }
        BaseFunction::Rastrigin => z
            .iter()
            .map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
            .sum(),
        BaseFunction::Ackley => {
            let n = d as f64;
            let sq = z.iter().map(|v| v * v).sum::<f64>() / n;
            let cs = z.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
            // Grouped so the optimum evaluates to exactly 0.
            20.0 * (1.0 - (-0.2 * sq.sqrt()).exp()) + (1.0_f64.exp() - cs.exp())
        }
        BaseFunction::Rosenbrock => {
            // Optimum at z = 0: evaluated on z + 1.
            for v in z.iter_mut() {
                *v += 1.0;
            }
            z.windows(2)
                .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
                .sum()
        }
        BaseFunction::Schwefel12 => {
            let mut prefix = 0.0;
            z.iter()
                .map(|v| {
                    prefix += v;
                    prefix * prefix
                })
                .sum()
        }
    }
}

/// Group size for the partially separable members: `max(2, round(D / 4))`.
pub fn group_size(dim: usize) -> usize {
    ((dim as f64 / 4.0).round() as usize).max(2).min(dim)
}

/// Builds the eight-function suite for `dim >= 2`.
pub fn make_suite(dim: usize, seed: u64) -> Result<Vec<BenchFunction>> {
    if dim < 2 {
        return Err(Error::InvalidParameter(format!(
            "suite needs dim >= 2, got {dim}"
        )));
    }
    let m = group_size(dim);
    let specs: [(&str, BaseFunction, Category, bool); 8] = [
        (
            "shifted_sphere",
            BaseFunction::Sphere,
            Category::SeparableUnimodal,
            false,
        ),
        (
            "shifted_elliptic",
            BaseFunction::Elliptic,
            Category::SeparableUnimodal,
            false,
        ),
        (
            "shifted_rastrigin",
            BaseFunction::Rastrigin,
            Category::SeparableMultimodal,
            false,
        ),
        (
            "shifted_ackley",
            BaseFunction::Ackley,
            Category::SeparableMultimodal,
            false,
        ),
        (
            "group_rotated_elliptic",
            BaseFunction::Elliptic,
            Category::PartiallySeparable { group_size: m },
            true,
        ),
        (
            "group_rotated_rastrigin",
            BaseFunction::Rastrigin,
            Category::PartiallySeparable { group_size: m },
            true,
        ),
        (
            "shifted_rosenbrock",
            BaseFunction::Rosenbrock,
            Category::FullyNonseparable,
            false,
        ),
        (
            "shifted_schwefel_1_2",
            BaseFunction::Schwefel12,
            Category::FullyNonseparable,
            false,
        ),
    ];
    let seeds = SeedSource::new(seed);
    let bounds = Bounds::uniform(dim, -BOX_LIMIT, BOX_LIMIT)?;
    Ok(specs
        .iter()
        .map(|&(name, base, category, rotated)| {
            let shift = draw_shift(&bounds, &mut seeds.stream(&format!("shift:{name}")));
            let rotations = if rotated {
                draw_rotations(dim, m, &mut seeds.stream(&format!("rotation:{name}")))
            } else {
                Vec::new()
            };
            BenchFunction {
                name: name.to_string(),
                category,
                base,
                seed,
                shift,
                rotations,
                bounds: bounds.clone(),
            }
        })
        .collect())
}

pub fn suite_function(name: &str, dim: usize, seed: u64) -> Result<BenchFunction> {
    make_suite(dim, seed)?
        .into_iter()
        .find(|f| f.name == name)
        .ok_or_else(|| Error::InvalidParameter(format!("unknown suite function {name:?}")))
}

pub fn suite_names() -> Vec<&'static str> {
    vec![
        "shifted_sphere",
        "shifted_elliptic",
        "shifted_rastrigin",
        "shifted_ackley",
        "group_rotated_elliptic",
        "group_rotated_rastrigin",
        "shifted_rosenbrock",
        "shifted_schwefel_1_2",
    ]
}

/// Uniform per dimension over the middle 80% of each interval.
fn draw_shift<R: Rng + ?Sized>(bounds: &Bounds, rng: &mut R) -> Vec<f64> {
    bounds
        .lower()
        .iter()
        .zip(bounds.upper())
        .map(|(&lo, &hi)| {
            let margin = 0.1 * (hi - lo);
            rng.gen_range(lo + margin..hi - margin)
        })
        .collect()
}

/// Up to two disjoint groups of size `m` over a random permutation of the
/// dimensions, each with its own random orthogonal matrix.
fn draw_rotations<R: Rng + ?Sized>(dim: usize, m: usize, rng: &mut R) -> Vec<RotatedGroup> {
    let mut perm: Vec<usize> = (0..dim).collect();
    perm.shuffle(rng);
    let count = (dim / m).min(2);
    (0..count)
        .map(|g| RotatedGroup {
            indices: perm[g * m..(g + 1) * m].to_vec(),
            matrix: random_orthogonal(m, rng),
        })
        .collect()
}

/// Orthonormalizes a standard-normal matrix with modified Gram-Schmidt,
/// run twice for accuracy. Returned row-major; columns are orthonormal.
pub fn random_orthogonal<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<f64> {
    // Work on columns.
    let mut cols: Vec<Vec<f64>> = (0..m)
        .map(|_| (0..m).map(|_| rng.sample(StandardNormal)).collect())
        .collect();
    for k in 0..m {
        for _ in 0..2 {
            for j in 0..k {
                let (done, rest) = cols.split_at_mut(k);
                let proj: f64 = done[j].iter().zip(&rest[0]).map(|(a, b)| a * b).sum();
                for (c, q) in rest[0].iter_mut().zip(&done[j]) {
                    *c -= proj * q;
                }
            }
        }
        let norm = cols[k].iter().map(|v| v * v).sum::<f64>().sqrt();
        for v in cols[k].iter_mut() {
            *v /= norm;
        }
    }
    let mut out = vec![0.0; m * m];
    for (c, col) in cols.iter().enumerate() {
        for (r, v) in col.iter().enumerate() {
            out[r * m + c] = *v;
        }
    }
    out
}

/// One entry of the exported suite manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub category: String,
    pub dim: usize,
    pub seed: u64,
    #[serde(rename = "box")]
    pub bounds: ManifestBox,
    pub optimum_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

pub fn manifest(suite: &[BenchFunction]) -> Vec<ManifestEntry> {
    suite
        .iter()
        .map(|f| ManifestEntry {
            name: f.name.clone(),
            category: f.category.to_string(),
            dim: f.dim(),
            seed: f.seed,
            bounds: ManifestBox {
                lower: f.bounds.lower().to_vec(),
                upper: f.bounds.upper().to_vec(),
            },
            optimum_hash: f.optimum_hash(),
        })
        .collect()
}
