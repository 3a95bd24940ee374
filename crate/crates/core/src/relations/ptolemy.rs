use serde::{Deserialize, Serialize};

use super::{RelationError, RelationSystem};
use crate::algebra::{Field, Monomial, Polynomial, Var};
use crate::simplicial::Triangulation;

/// The three opposite corner pairs `(a, c)`, `(b, d)`, `(x, y)` at a true
/// vertex of a spine.
pub type Butterfly = [[String; 2]; 3];

/// A spine given directly by its 2-cells and butterflies. A cell may meet a
/// vertex more than once, so pairs can repeat names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinePresentation {
    pub cells: Vec<String>,
    pub butterflies: Vec<Butterfly>,
}

impl SpinePresentation {
    pub fn from_json(text: &str) -> Result<Self, RelationError> {
        serde_json::from_str(text).map_err(|e| RelationError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

fn product(field: Field, a: Var, b: Var) -> Polynomial {
    Polynomial::term(field.one(), Monomial::from_pairs([(a, 1), (b, 1)]))
}

/// `ac + bd + xy` (or `ac + bd - xy` when signed).
fn ptolemy_relation(field: Field, pairs: [(Var, Var); 3], signed: bool) -> Polynomial {
    let [(a, c), (b, d), (x, y)] = pairs;
    let sum = product(field, a, c)
        .try_add(&product(field, b, d))
        .expect("same field");
    let diagonals = product(field, x, y);
    if signed {
        sum.try_sub(&diagonals).expect("same field")
    } else {
        sum.try_add(&diagonals).expect("same field")
    }
}

fn check_sign_mode(field: Field, signed: bool) -> Result<(), RelationError> {
    if !signed && field.characteristic() != 2 {
        return Err(RelationError::NotCharacteristicTwo(field));
    }
    Ok(())
}

/// One Ptolemy relation per butterfly, with the 2-cells as variables.
///
/// Without `signed` the field must have characteristic 2, where the sign
/// pattern is immaterial. With `signed` the experimental pattern `+, +, -`
/// is used over any field.
pub fn ptolemy_system_from_spine(
    spine: &SpinePresentation,
    field: Field,
    signed: bool,
) -> Result<RelationSystem, RelationError> {
    check_sign_mode(field, signed)?;
    let lookup = |name: &String| -> Result<Var, RelationError> {
        spine
            .cells
            .iter()
            .position(|c| c == name)
            .map(|i| Var(i as u32))
            .ok_or_else(|| RelationError::UndeclaredCell(name.clone()))
    };
    let mut relations = Vec::with_capacity(spine.butterflies.len());
    for b in &spine.butterflies {
        let mut pairs = [(Var(0), Var(0)); 3];
        for (slot, [p, q]) in pairs.iter_mut().zip(b) {
            *slot = (lookup(p)?, lookup(q)?);
        }
        relations.push(ptolemy_relation(field, pairs, signed));
    }
    RelationSystem::new(field, spine.cells.clone(), relations)
}

/// Name of the variable attached to edge `(i, j)`: `p_ij` when every vertex
/// id is a single digit, `p_i_j` otherwise.
pub(crate) fn edge_name(prefix: &str, i: u32, j: u32, compact: bool) -> String {
    if compact {
        format!("{prefix}_{i}{j}")
    } else {
        format!("{prefix}_{i}_{j}")
    }
}

pub(crate) fn edge_variables(t: &Triangulation, prefix: &str) -> (Vec<(u32, u32)>, Vec<String>) {
    let edges = t.edges();
    let compact = t.vertex_count() <= 10;
    let names = edges
        .iter()
        .map(|&(i, j)| edge_name(prefix, i, j, compact))
        .collect();
    (edges, names)
}

/// Ptolemy relations of a 3D triangulation: one variable per edge, and for
/// each tetrahedron `(v0, v1, v2, v3)` the relation on its three pairs of
/// opposite edges.
pub fn ptolemy_system_from_3d(
    t: &Triangulation,
    field: Field,
    signed: bool,
) -> Result<RelationSystem, RelationError> {
    check_sign_mode(field, signed)?;
    if t.dimension() != 3 {
        return Err(RelationError::WrongDimension {
            expected: 3,
            got: t.dimension(),
        });
    }
    super::check_patch(t)?;
    let (edges, names) = edge_variables(t, "a");
    let var = |i: u32, j: u32| Var(edges.binary_search(&(i, j)).expect("edge of t") as u32);
    let relations = t
        .simplices()
        .iter()
        .map(|s| {
            let pairs = [
                (var(s[0], s[1]), var(s[2], s[3])),
                (var(s[0], s[2]), var(s[1], s[3])),
                (var(s[0], s[3]), var(s[1], s[2])),
            ];
            ptolemy_relation(field, pairs, signed)
        })
        .collect();
    RelationSystem::new(field, names, relations)
}
