//! Consistency systems and geometric predicates.
//!
//! Two families of polynomial systems are generated here: Ptolemy relations
//! `ac + bd + xy` attached to spine vertices or 3D tetrahedra, and bordered
//! Cayley-Menger determinants attached to pentachora of 4D triangulations.
//! Alongside them live the exact and floating predicates used as independent
//! ground truth: Menger realisability, four-point (co)cyclicity determinants,
//! and the Euclidean and hyperbolic quadrilateral identities.

mod cayley_menger;
mod cocyclic;
pub mod fixtures;
mod pentagon;
mod ptolemy;
mod quadrilateral;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, Field, Polynomial};
use crate::simplicial::SimplicialError;

pub use cayley_menger::{
    cayley_menger_polynomial, cayley_menger_system, cm_det_exact, locally_realisable,
    menger_realisable, EdgeLabelling, MengerReport, MengerViolation,
    SquaredDistanceMatrix,
};
pub use cocyclic::{berger_cocyclic, concyclic_det4, hyperbolic_det4, spherical_det4};
pub use pentagon::{pentagon_complete, PentagonRing, PentagonSolution};
pub use ptolemy::{ptolemy_system_from_3d, ptolemy_system_from_spine, Butterfly, SpinePresentation};
pub use quadrilateral::{lambert_check, ptolemy_residual, quad_diagonal};
pub(crate) use ptolemy::edge_variables;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RelationError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
    #[error("cell {0:?} is not declared")]
    UndeclaredCell(String),
    #[error("unsigned Ptolemy relations need characteristic 2, got {0}")]
    NotCharacteristicTwo(Field),
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),
    #[error("expected a {expected}-dimensional triangulation, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("distance matrix is not square")]
    NotSquare,
    #[error("distance matrix is not symmetric at ({0}, {1})")]
    Asymmetric(usize, usize),
    #[error("distance matrix has a nonzero diagonal entry at {0}")]
    NotHollow(usize),
    #[error("expected {expected} points, got {got}")]
    WrongSize { expected: usize, got: usize },
    #[error("edge ({0}, {1}) has no label")]
    MissingLabel(u32, u32),
    #[error("{0} is not invertible")]
    NotInvertible(&'static str),
    #[error("negative radicand {0}: side lengths are not realisable")]
    NegativeRadicand(f64),
    #[error("separating diagonal must be positive")]
    ZeroDiagonal,
    #[error("variable {0:?} is not declared")]
    UnknownVariable(String),
    #[error("json: {0}")]
    Json(String),
}

/// Relations are defined on any patch of simplices, closed or not, so only
/// violations that break the simplicial-complex structure are rejected.
pub(crate) fn check_patch(t: &crate::simplicial::Triangulation) -> Result<(), RelationError> {
    use crate::simplicial::Violation;
    let bad = t.validate().into_iter().find(|v| match v {
        Violation::DuplicateSimplex { .. } => true,
        Violation::FacetDegree { count, .. } => *count > 2,
        Violation::UnusedVertex { .. } => false,
    });
    match bad {
        Some(v) => Err(RelationError::InvalidTriangulation(v.to_string())),
        None => Ok(()),
    }
}

/// A list of polynomials over one field that are required to vanish, with
/// named variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationSystem {
    field: Field,
    variables: Vec<String>,
    relations: Vec<Polynomial>,
}

#[derive(Serialize, Deserialize)]
struct RelationSystemFile {
    field: String,
    variables: Vec<String>,
    relations: Vec<String>,
}

impl RelationSystem {
    pub fn new(
        field: Field,
        variables: Vec<String>,
        relations: Vec<Polynomial>,
    ) -> Result<Self, RelationError> {
        for r in &relations {
            if r.field() != field {
                return Err(AlgebraError::FieldMismatch(r.field(), field).into());
            }
            if let Some(v) = r.vars().into_iter().find(|v| v.0 as usize >= variables.len()) {
                return Err(RelationError::UnknownVariable(format!("v{}", v.0)));
            }
        }
        Ok(RelationSystem {
            field,
            variables,
            relations,
        })
    }

    pub fn empty(field: Field, variables: Vec<String>) -> Self {
        RelationSystem {
            field,
            variables,
            relations: Vec::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    /// Canonical strings of the relations.
    pub fn relation_texts(&self) -> Vec<String> {
        self.relations
            .iter()
            .map(|r| r.to_text(&self.variables))
            .collect()
    }

    /// Same relations with coefficients moved into `field`.
    pub fn embed(&self, field: Field) -> Result<RelationSystem, RelationError> {
        let relations = self
            .relations
            .iter()
            .map(|r| r.embed(field))
            .collect::<Result<_, _>>()?;
        Ok(RelationSystem {
            field,
            variables: self.variables.clone(),
            relations,
        })
    }

    /// Re-express the system over a larger variable list. Every current
    /// variable must appear in `universe`.
    pub fn over_variables(&self, universe: &[String]) -> Result<RelationSystem, RelationError> {
        let map = self
            .variables
            .iter()
            .map(|name| {
                universe
                    .iter()
                    .position(|u| u == name)
                    .map(|i| i as u32)
                    .ok_or_else(|| RelationError::UnknownVariable(name.clone()))
            })
            .collect::<Result<Vec<u32>, _>>()?;
        let relations = self
            .relations
            .iter()
            .map(|r| r.rename(|v| crate::algebra::Var(map[v.0 as usize])))
            .collect();
        Ok(RelationSystem {
            field: self.field,
            variables: universe.to_vec(),
            relations,
        })
    }

    /// Append a relation list (same field and variables).
    pub fn extended(&self, extra: &RelationSystem) -> Result<RelationSystem, RelationError> {
        let extra = extra.over_variables(&self.variables)?;
        if extra.field != self.field {
            return Err(AlgebraError::FieldMismatch(extra.field, self.field).into());
        }
        let mut relations = self.relations.clone();
        relations.extend(extra.relations);
        Ok(RelationSystem {
            field: self.field,
            variables: self.variables.clone(),
            relations,
        })
    }

    pub fn to_json(&self) -> String {
        let file = RelationSystemFile {
            field: self.field.tag(),
            variables: self.variables.clone(),
            relations: self.relation_texts(),
        };
        serde_json::to_string(&file).expect("serializable")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::from_str(&self.to_json()).expect("valid json")
    }

    pub fn from_json(text: &str) -> Result<Self, RelationError> {
        let file: RelationSystemFile =
            serde_json::from_str(text).map_err(|e| RelationError::Json(e.to_string()))?;
        let field: Field = file.field.parse()?;
        let relations = file
            .relations
            .iter()
            .map(|r| Polynomial::parse(r, field, &file.variables))
            .collect::<Result<_, _>>()?;
        RelationSystem::new(field, file.variables, relations)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let text = r#"{"field":"F2","variables":["x","y","z"],"relations":["x^2 + z^2 + y*z"]}"#;
        let sys = RelationSystem::from_json(text).unwrap();
        assert_eq!(sys.to_json(), text);
    }

    #[test]
    fn moving_to_a_larger_universe_keeps_names() {
        let text = r#"{"field":"Q","variables":["b","a"],"relations":["a*b + -1"]}"#;
        let sys = RelationSystem::from_json(text).unwrap();
        let universe: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let moved = sys.over_variables(&universe).unwrap();
        assert_eq!(moved.relation_texts(), vec!["a*b + -1"]);
        assert!(sys.over_variables(&universe[..1]).is_err());
    }

    #[test]
    fn rejects_bad_files() {
        assert!(RelationSystem::from_json("{").is_err());
        assert!(RelationSystem::from_json(r#"{"field":"F6","variables":[],"relations":[]}"#).is_err());
        assert!(RelationSystem::from_json(r#"{"field":"F2","variables":["x"],"relations":["y"]}"#).is_err());
    }
}
