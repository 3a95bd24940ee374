//! Point configurations with known geometry, used as ground truth for the
//! relation predicates.
//!
//! Exact samplers produce rational coordinates, so every squared distance is
//! rational and the determinant checks are exact. The hyperbolic, spherical
//! and quadrilateral samplers in [`float`] involve transcendental functions
//! and are checked against tolerances instead.
//!
//! Randomness comes from ChaCha8 seeded with `seed_from_u64(seed)`; trial `i`
//! reads stream `i` of that generator, so a trial's data depends only on the
//! seed and its index, never on how trials are spread over threads.

pub mod float;

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::relations::{cm_det_exact, EdgeLabelling, SquaredDistanceMatrix};
use crate::simplicial::Triangulation;

/// Numerators of sampled coordinates lie in `-NUM_BOUND..=NUM_BOUND`.
pub const NUM_BOUND: i64 = 16;
/// Denominators of sampled coordinates lie in `1..=DEN_BOUND`.
pub const DEN_BOUND: i64 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("duplicate parameter {0}")]
    DuplicateParameter(String),
    #[error("parameter has {got} coordinates, expected {expected}")]
    WrongDimension { expected: usize, got: usize },
    #[error("vertex {0} has no point")]
    MissingPoint(u32),
    #[error("invalid point configuration: {0}")]
    Invalid(String),
}

/// Seeded source of independent per-trial generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSource {
    seed: u64,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Generator for trial `index`.
    pub fn stream(&self, index: u64) -> TrialRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        TrialRng(rng)
    }
}

pub struct TrialRng(ChaCha8Rng);

impl TrialRng {
    /// Rational `n / d` with `|n| <= NUM_BOUND`, `1 <= d <= DEN_BOUND`.
    pub fn rational(&mut self) -> BigRational {
        let n = self.0.random_range(-NUM_BOUND..=NUM_BOUND);
        let d = self.0.random_range(1..=DEN_BOUND);
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    pub fn rational_point(&mut self, d: usize) -> Vec<BigRational> {
        (0..d).map(|_| self.rational()).collect()
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.0.random::<f64>()
    }

    /// Uniform in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        self.0.random_range(0..n)
    }

    pub fn integer(&mut self, lo: i64, hi: i64) -> i64 {
        self.0.random_range(lo..=hi)
    }
}

/// Labelled points in `R^d` with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointConfig {
    dimension: usize,
    points: Vec<Vec<BigRational>>,
}

#[derive(Serialize, Deserialize)]
struct PointConfigFile {
    dimension: usize,
    points: Vec<Vec<String>>,
}

impl PointConfig {
    pub fn new(dimension: usize, points: Vec<Vec<BigRational>>) -> Result<Self, OracleError> {
        if let Some(p) = points.iter().find(|p| p.len() != dimension) {
            return Err(OracleError::WrongDimension {
                expected: dimension,
                got: p.len(),
            });
        }
        Ok(PointConfig { dimension, points })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn points(&self) -> &[Vec<BigRational>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn squared_distances(&self) -> SquaredDistanceMatrix<BigRational> {
        SquaredDistanceMatrix::from_points(&self.points)
    }

    pub fn to_json(&self) -> String {
        let file = PointConfigFile {
            dimension: self.dimension,
            points: self
                .points
                .iter()
                .map(|p| p.iter().map(|x| x.to_string()).collect())
                .collect(),
        };
        serde_json::to_string(&file).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, OracleError> {
        let file: PointConfigFile =
            serde_json::from_str(text).map_err(|e| OracleError::Invalid(e.to_string()))?;
        let points = file
            .points
            .iter()
            .map(|p| {
                p.iter()
                    .map(|x| x.parse::<BigRational>().map_err(|e| OracleError::Invalid(e.to_string())))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        PointConfig::new(file.dimension, points)
    }
}

/// True when every subset of at most `d + 1` of the points is affinely
/// independent, tested by nonvanishing Cayley-Menger determinants.
fn independent_with_last(m: &SquaredDistanceMatrix<BigRational>, d: usize) -> bool {
    let last = m.size() - 1;
    (1..=d.min(last)).all(|s| {
        (0..last).combinations(s).all(|mut subset| {
            subset.push(last);
            !cm_det_exact(&m.restrict(&subset)).is_zero()
        })
    })
}

/// `k` random rational points in `R^d` in general position: no `j <= d + 1`
/// of them are affinely dependent. Points that break this are resampled.
pub fn random_generic_config(d: usize, k: usize, rng: &mut TrialRng) -> PointConfig {
    let mut points: Vec<Vec<BigRational>> = Vec::with_capacity(k);
    while points.len() < k {
        points.push(rng.rational_point(d));
        if !independent_with_last(&SquaredDistanceMatrix::from_points(&points), d) {
            points.pop();
        }
    }
    PointConfig { dimension: d, points }
}

/// `k` random rational points in `R^d` with no genericity requirement.
pub fn random_config(d: usize, k: usize, rng: &mut TrialRng) -> PointConfig {
    PointConfig {
        dimension: d,
        points: (0..k).map(|_| rng.rational_point(d)).collect(),
    }
}

fn check_distinct<T: Ord + std::fmt::Debug>(params: &[T]) -> Result<(), OracleError> {
    let mut seen = BTreeSet::new();
    for p in params {
        if !seen.insert(p) {
            return Err(OracleError::DuplicateParameter(format!("{p:?}")));
        }
    }
    Ok(())
}

/// Inverse stereographic projection of `u in Q^(n-1)` onto the unit sphere
/// in `Q^n`, from the pole `(-1, 0, ..., 0)`:
/// `x_0 = (1 - |u|^2)/(1 + |u|^2)`, `x_i = 2 u_i/(1 + |u|^2)`.
/// The zero parameter maps to `(1, 0, ..., 0)`.
fn unstereo(u: &[BigRational]) -> Vec<BigRational> {
    let one = BigRational::one();
    let s = u.iter().fold(BigRational::zero(), |acc, x| acc + x * x);
    let den = &one + &s;
    let mut out = vec![(&one - &s) / &den];
    let two = BigRational::from_integer(BigInt::from(2));
    out.extend(u.iter().map(|x| &two * x / &den));
    out
}

/// Rational points `((1 - t^2)/(1 + t^2), 2t/(1 + t^2))` on the unit circle.
pub fn rational_circle_points(params: &[BigRational]) -> Result<PointConfig, OracleError> {
    check_distinct(params)?;
    let points = params.iter().map(|t| unstereo(std::slice::from_ref(t))).collect();
    Ok(PointConfig { dimension: 2, points })
}

/// Rational points on the unit `(n-1)`-sphere in `R^n`, one per parameter in
/// `Q^(n-1)`.
pub fn rational_sphere_points(n: usize, params: &[Vec<BigRational>]) -> Result<PointConfig, OracleError> {
    if let Some(p) = params.iter().find(|p| p.len() + 1 != n) {
        return Err(OracleError::WrongDimension {
            expected: n - 1,
            got: p.len(),
        });
    }
    check_distinct(params)?;
    Ok(PointConfig {
        dimension: n,
        points: params.iter().map(|u| unstereo(u)).collect(),
    })
}

/// Squared distances between the points assigned to the edges of `t`;
/// vertex `i` sits at point `i`.
pub fn induced_labelling(cfg: &PointConfig, t: &Triangulation) -> Result<EdgeLabelling, OracleError> {
    if t.vertex_count() as usize > cfg.len() {
        return Err(OracleError::MissingPoint(cfg.len() as u32));
    }
    let m = cfg.squared_distances();
    Ok(t.edges()
        .into_iter()
        .map(|(i, j)| ((i, j), m.entry(i as usize, j as usize).clone()))
        .collect())
}
