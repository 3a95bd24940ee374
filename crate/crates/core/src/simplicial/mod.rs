//! Combinatorial triangulations of closed 3- and 4-manifolds.
//!
//! A triangulation is a list of top-dimensional simplices on dense vertex ids
//! `0..V`, each stored as a strictly increasing vertex tuple. Orientation is
//! not tracked. The simplex list is kept sorted, which makes the JSON form
//! canonical.

mod moves;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use moves::{apply_move, candidate_loci, pachner, MoveKind, MoveLocus, MoveOutcome};

/// Sorted vertex tuple.
pub type Simplex = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplicialError {
    #[error("unsupported dimension {0}")]
    Dimension(usize),
    #[error("simplex {index} has {got} vertices, expected {expected}")]
    Arity {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("simplex {index} is not strictly increasing")]
    Unsorted { index: usize },
    #[error("simplex {index} uses vertex {vertex} outside 0..{vertices}")]
    VertexRange {
        index: usize,
        vertex: u32,
        vertices: u32,
    },
    #[error("invalid triangulation: {0}")]
    Invalid(String),
    #[error("move kind {kind} does not apply in dimension {dimension}")]
    KindDimension { kind: MoveKind, dimension: usize },
    #[error("locus does not match the {kind} pattern: {reason}")]
    LocusMismatch { kind: MoveKind, reason: String },
    #[error("inadmissible {kind} move: face {face:?} already present")]
    Inadmissible { kind: MoveKind, face: Simplex },
    #[error("unknown move kind {0:?}")]
    UnknownKind(String),
    #[error("json: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TriangulationFile", into = "TriangulationFile")]
pub struct Triangulation {
    dimension: usize,
    vertices: u32,
    simplices: Vec<Simplex>,
}

#[derive(Serialize, Deserialize)]
struct TriangulationFile {
    dimension: usize,
    vertices: u32,
    simplices: Vec<Simplex>,
}

impl TryFrom<TriangulationFile> for Triangulation {
    type Error = SimplicialError;

    fn try_from(f: TriangulationFile) -> Result<Self, Self::Error> {
        Triangulation::new(f.dimension, f.vertices, f.simplices)
    }
}

impl From<Triangulation> for TriangulationFile {
    fn from(t: Triangulation) -> Self {
        TriangulationFile {
            dimension: t.dimension,
            vertices: t.vertices,
            simplices: t.simplices,
        }
    }
}

/// A single failure of the closed pseudo-manifold conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DuplicateSimplex { simplex: Simplex },
    FacetDegree { facet: Simplex, count: usize, dimension: usize },
    UnusedVertex { vertex: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateSimplex { simplex } => write!(f, "duplicate simplex {simplex:?}"),
            Violation::FacetDegree {
                facet,
                count,
                dimension,
            } => write!(
                f,
                "{} in {count} {} {facet:?}",
                simplex_name(dimension - 1),
                simplex_name(*dimension)
            ),
            Violation::UnusedVertex { vertex } => write!(f, "vertex {vertex} unused"),
        }
    }
}

fn simplex_name(dim: usize) -> &'static str {
    match dim {
        0 => "vertex",
        1 => "edge",
        2 => "triangle",
        3 => "tetrahedron",
        4 => "pentachoron",
        _ => "simplex",
    }
}

impl Triangulation {
    /// Check the shape of the input: dimension 3 or 4, `dimension + 1`
    /// strictly increasing vertex ids per simplex, all ids below `vertices`.
    /// The manifold conditions are checked separately by [`validate`](Self::validate).
    pub fn new(
        dimension: usize,
        vertices: u32,
        simplices: Vec<Simplex>,
    ) -> Result<Self, SimplicialError> {
        if !(3..=4).contains(&dimension) {
            return Err(SimplicialError::Dimension(dimension));
        }
        for (index, s) in simplices.iter().enumerate() {
            if s.len() != dimension + 1 {
                return Err(SimplicialError::Arity {
                    index,
                    got: s.len(),
                    expected: dimension + 1,
                });
            }
            if s.windows(2).any(|w| w[0] >= w[1]) {
                return Err(SimplicialError::Unsorted { index });
            }
            if let Some(&vertex) = s.iter().find(|&&v| v >= vertices) {
                return Err(SimplicialError::VertexRange {
                    index,
                    vertex,
                    vertices,
                });
            }
        }
        let mut simplices = simplices;
        simplices.sort();
        Ok(Triangulation {
            dimension,
            vertices,
            simplices,
        })
    }

    /// Boundary of the `(n+1)`-simplex, a triangulated `n`-sphere.
    pub fn boundary_of_simplex(n: usize) -> Self {
        let all: Vec<u32> = (0..n as u32 + 2).collect();
        let simplices = (0..all.len())
            .map(|skip| {
                all.iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect();
        Triangulation::new(n, n as u32 + 2, simplices).expect("well formed")
    }

    pub fn from_json(text: &str) -> Result<Self, SimplicialError> {
        serde_json::from_str(text).map_err(|e| SimplicialError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vertex_count(&self) -> u32 {
        self.vertices
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn contains_simplex(&self, s: &[u32]) -> bool {
        self.simplices.binary_search_by(|x| x.as_slice().cmp(s)).is_ok()
    }

    /// All `k`-dimensional faces (`k + 1` vertices), deduplicated and sorted.
    pub fn faces(&self, k: usize) -> BTreeSet<Simplex> {
        let mut out = BTreeSet::new();
        if k > self.dimension {
            return out;
        }
        for s in &self.simplices {
            for f in s.iter().copied().combinations(k + 1) {
                out.insert(f);
            }
        }
        out
    }

    /// Edges as sorted vertex pairs.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        self.faces(1).into_iter().map(|e| (e[0], e[1])).collect()
    }

    /// Face counts `f_0, ..., f_n`.
    pub fn f_vector(&self) -> Vec<usize> {
        (0..=self.dimension).map(|k| self.faces(k).len()).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(k, &f)| if k % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum()
    }

    /// True when `face` is a face of some simplex.
    pub fn has_face(&self, face: &[u32]) -> bool {
        self.simplices.iter().any(|s| is_subset(face, s))
    }

    /// Top simplices containing `face`.
    pub fn star(&self, face: &[u32]) -> Vec<&Simplex> {
        self.simplices.iter().filter(|s| is_subset(face, s)).collect()
    }

    /// Violations of the closed pseudo-manifold conditions; empty iff valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (s, n) in self.simplices.iter().counts() {
            if n > 1 {
                out.push(Violation::DuplicateSimplex { simplex: s.clone() });
            }
        }
        let mut facets: BTreeMap<Simplex, usize> = BTreeMap::new();
        for s in &self.simplices {
            for f in s.iter().copied().combinations(self.dimension) {
                *facets.entry(f).or_default() += 1;
            }
        }
        for (facet, count) in facets {
            if count != 2 {
                out.push(Violation::FacetDegree {
                    facet,
                    count,
                    dimension: self.dimension,
                });
            }
        }
        let used: BTreeSet<u32> = self.simplices.iter().flatten().copied().collect();
        for v in 0..self.vertices {
            if !used.contains(&v) {
                out.push(Violation::UnusedVertex { vertex: v });
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Subcomplex made of the given simplices, keeping vertex ids.
    pub fn with_simplices(&self, simplices: Vec<Simplex>) -> Triangulation {
        Triangulation::new(self.dimension, self.vertices, simplices).expect("same shape")
    }

    /// Apply a vertex relabeling; `map` must be a bijection of `0..V`.
    pub fn relabel(&self, map: impl Fn(u32) -> u32) -> Triangulation {
        let simplices = self
            .simplices
            .iter()
            .map(|s| {
                let mut t: Vec<u32> = s.iter().map(|&v| map(v)).collect();
                t.sort_unstable();
                t
            })
            .collect();
        Triangulation::new(self.dimension, self.vertices, simplices).expect("bijective relabel")
    }
}

pub(crate) fn is_subset(small: &[u32], big: &[u32]) -> bool {
    small.iter().all(|v| big.binary_search(v).is_ok())
}
