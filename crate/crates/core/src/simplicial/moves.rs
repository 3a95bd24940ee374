//! Bistellar (Pachner) moves.
//!
//! Every move in dimension `n` lives inside the boundary of an `(n+2)`-vertex
//! simplex `U = C ∪ D`: the `|D|` simplices `U \ {d}` for `d ∈ D` are replaced
//! by the `|C|` simplices `U \ {c}` for `c ∈ C`. The locus of a move is the
//! core face `C` (the tetrahedron shared by the two pentachora of a 2-4 move,
//! the bulk triangle of a 3-3 move, ...), except for the subdividing moves
//! 1-4 and 1-5, whose locus is the simplex being coned from a fresh vertex.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::{Simplex, SimplicialError, Triangulation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    OneFour,
    TwoThree,
    ThreeTwo,
    FourOne,
    OneFive,
    TwoFour,
    ThreeThree,
    FourTwo,
    FiveOne,
}

impl MoveKind {
    pub const ALL: [MoveKind; 9] = [
        MoveKind::OneFour,
        MoveKind::TwoThree,
        MoveKind::ThreeTwo,
        MoveKind::FourOne,
        MoveKind::OneFive,
        MoveKind::TwoFour,
        MoveKind::ThreeThree,
        MoveKind::FourTwo,
        MoveKind::FiveOne,
    ];

    pub fn dimension(self) -> usize {
        match self {
            MoveKind::OneFour | MoveKind::TwoThree | MoveKind::ThreeTwo | MoveKind::FourOne => 3,
            _ => 4,
        }
    }

    /// Number of top simplices the move removes.
    pub fn removed(self) -> usize {
        match self {
            MoveKind::OneFour | MoveKind::OneFive => 1,
            MoveKind::TwoThree | MoveKind::TwoFour => 2,
            MoveKind::ThreeTwo | MoveKind::ThreeThree => 3,
            MoveKind::FourOne | MoveKind::FourTwo => 4,
            MoveKind::FiveOne => 5,
        }
    }

    pub fn added(self) -> usize {
        self.dimension() + 2 - self.removed()
    }

    pub fn inverse(self) -> MoveKind {
        Self::from_counts(self.dimension(), self.added()).expect("inverse exists")
    }

    /// Vertex count of the locus face.
    pub fn locus_size(self) -> usize {
        if self.removed() == 1 {
            self.dimension() + 1
        } else {
            self.added()
        }
    }

    pub fn from_counts(dimension: usize, removed: usize) -> Option<MoveKind> {
        Self::ALL
            .into_iter()
            .find(|k| k.dimension() == dimension && k.removed() == removed)
    }

    pub fn for_dimension(dimension: usize) -> impl Iterator<Item = MoveKind> {
        Self::ALL.into_iter().filter(move |k| k.dimension() == dimension)
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.removed(), self.added())
    }
}

impl FromStr for MoveKind {
    type Err = SimplicialError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.to_string() == s.trim())
            .ok_or_else(|| SimplicialError::UnknownKind(s.to_string()))
    }
}

impl Serialize for MoveKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MoveKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MoveLocus {
    pub kind: MoveKind,
    pub face: Simplex,
}

impl MoveLocus {
    pub fn new(kind: MoveKind, mut face: Simplex) -> Self {
        face.sort_unstable();
        MoveLocus { kind, face }
    }
}

/// Result of a move together with the data needed to undo it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveOutcome {
    pub result: Triangulation,
    pub removed: Vec<Simplex>,
    pub added: Vec<Simplex>,
    /// Locus of the inverse move in `result`.
    pub inverse: MoveLocus,
    /// Vertex deleted by an `(n+1)-1` move; larger ids shift down by one.
    pub deleted_vertex: Option<u32>,
}

struct Plan {
    core: Simplex,
    apexes: Simplex,
}

fn mismatch(kind: MoveKind, reason: impl Into<String>) -> SimplicialError {
    SimplicialError::LocusMismatch {
        kind,
        reason: reason.into(),
    }
}

fn plan(t: &Triangulation, locus: &MoveLocus) -> Result<Plan, SimplicialError> {
    let kind = locus.kind;
    let n = t.dimension();
    if kind.dimension() != n {
        return Err(SimplicialError::KindDimension { kind, dimension: n });
    }
    let face = &locus.face;
    if face.len() != kind.locus_size() {
        return Err(mismatch(
            kind,
            format!("locus has {} vertices, expected {}", face.len(), kind.locus_size()),
        ));
    }
    if face.windows(2).any(|w| w[0] >= w[1]) || face.iter().any(|&v| v >= t.vertex_count()) {
        return Err(mismatch(kind, "locus vertices must be distinct existing ids"));
    }
    if kind.removed() == 1 {
        if !t.contains_simplex(face) {
            return Err(mismatch(kind, format!("{face:?} is not a top simplex")));
        }
        return Ok(Plan {
            core: face.clone(),
            apexes: vec![t.vertex_count()],
        });
    }
    let star = t.star(face);
    if star.len() != kind.removed() {
        return Err(mismatch(
            kind,
            format!("{face:?} lies in {} top simplices, expected {}", star.len(), kind.removed()),
        ));
    }
    let union: Simplex = star.iter().flat_map(|s| s.iter().copied()).sorted().dedup().collect();
    if union.len() != n + 2 {
        return Err(mismatch(kind, "star of the locus is not a bistellar configuration"));
    }
    let apexes: Simplex = union
        .iter()
        .copied()
        .filter(|v| face.binary_search(v).is_err())
        .collect();
    for &d in &apexes {
        let expected: Simplex = union.iter().copied().filter(|&v| v != d).collect();
        if !t.contains_simplex(&expected) {
            return Err(mismatch(kind, format!("missing simplex {expected:?}")));
        }
    }
    if t.has_face(&apexes) {
        return Err(SimplicialError::Inadmissible {
            kind,
            face: apexes,
        });
    }
    Ok(Plan {
        core: face.clone(),
        apexes,
    })
}

/// Apply a move, returning the new triangulation and its inverse locus.
pub fn apply_move(t: &Triangulation, locus: &MoveLocus) -> Result<MoveOutcome, SimplicialError> {
    let Plan { core, apexes } = plan(t, locus)?;
    let kind = locus.kind;
    let n = t.dimension();
    let union: Simplex = core.iter().chain(&apexes).copied().sorted().collect();
    let without = |x: u32| -> Simplex { union.iter().copied().filter(|&v| v != x).collect() };
    let removed: Vec<Simplex> = apexes.iter().map(|&d| without(d)).collect();
    let added: Vec<Simplex> = core.iter().map(|&c| without(c)).collect();

    let mut simplices: Vec<Simplex> = t
        .simplices()
        .iter()
        .filter(|s| !removed.contains(s))
        .cloned()
        .collect();
    simplices.extend(added.iter().cloned());

    let mut vertices = t.vertex_count();
    if kind.removed() == 1 {
        vertices += 1;
    }
    let result = Triangulation::new(n, vertices, simplices)?;

    if kind.removed() == n + 1 {
        // The core vertex disappears; close the gap in the id range.
        let gone = core[0];
        let shift = |v: u32| if v > gone { v - 1 } else { v };
        let simplices = result
            .simplices()
            .iter()
            .map(|s| s.iter().map(|&v| shift(v)).collect())
            .collect();
        let result = Triangulation::new(n, vertices - 1, simplices)?;
        let face: Simplex = apexes.iter().map(|&v| shift(v)).collect();
        let added = added
            .iter()
            .map(|s| s.iter().map(|&v| shift(v)).collect())
            .collect();
        return Ok(MoveOutcome {
            result,
            removed,
            added,
            inverse: MoveLocus::new(kind.inverse(), face),
            deleted_vertex: Some(gone),
        });
    }

    Ok(MoveOutcome {
        result,
        removed,
        added,
        inverse: MoveLocus::new(kind.inverse(), apexes),
        deleted_vertex: None,
    })
}

/// Apply a move and return only the new triangulation.
pub fn pachner(t: &Triangulation, locus: &MoveLocus) -> Result<Triangulation, SimplicialError> {
    apply_move(t, locus).map(|o| o.result)
}

/// Every admissible locus of the given kind, in a deterministic order.
pub fn candidate_loci(t: &Triangulation, kind: MoveKind) -> Vec<MoveLocus> {
    if kind.dimension() != t.dimension() {
        return Vec::new();
    }
    let faces: Vec<Simplex> = if kind.removed() == 1 {
        t.simplices().to_vec()
    } else {
        t.faces(kind.locus_size() - 1).into_iter().collect()
    };
    faces
        .into_iter()
        .map(|f| MoveLocus::new(kind, f))
        .filter(|l| plan(t, l).is_ok())
        .collect()
}
