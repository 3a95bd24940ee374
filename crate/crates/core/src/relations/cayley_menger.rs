use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::ptolemy::edge_variables;
use super::{RelationError, RelationSystem};
use crate::algebra::{determinant, rational_determinant, Field, PolyMatrix, Polynomial, Var};
use crate::simplicial::Triangulation;

/// Symmetric hollow matrix of squared distances.
#[derive(Debug, Clone, PartialEq)]
pub struct SquaredDistanceMatrix<T> {
    rows: Vec<Vec<T>>,
}

impl<T> SquaredDistanceMatrix<T>
where
    T: Clone + PartialEq + Zero,
{
    pub fn new(rows: Vec<Vec<T>>) -> Result<Self, RelationError> {
        let k = rows.len();
        if rows.iter().any(|r| r.len() != k) {
            return Err(RelationError::NotSquare);
        }
        for i in 0..k {
            if !rows[i][i].is_zero() {
                return Err(RelationError::NotHollow(i));
            }
            for j in i + 1..k {
                if rows[i][j] != rows[j][i] {
                    return Err(RelationError::Asymmetric(i, j));
                }
            }
        }
        Ok(SquaredDistanceMatrix { rows })
    }

    /// Squared distances between coordinate vectors.
    pub fn from_points(points: &[Vec<T>]) -> Self
    where
        T: Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
    {
        let k = points.len();
        let mut rows = vec![vec![T::zero(); k]; k];
        for i in 0..k {
            for j in i + 1..k {
                let d = points[i]
                    .iter()
                    .zip(&points[j])
                    .fold(T::zero(), |acc, (x, y)| {
                        let t = x.clone() - y.clone();
                        acc + t.clone() * t
                    });
                rows[i][j] = d.clone();
                rows[j][i] = d;
            }
        }
        SquaredDistanceMatrix { rows }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &T {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    /// Principal submatrix on the given indices.
    pub fn restrict(&self, indices: &[usize]) -> Self {
        let rows = indices
            .iter()
            .map(|&i| indices.iter().map(|&j| self.rows[i][j].clone()).collect())
            .collect();
        SquaredDistanceMatrix { rows }
    }

    /// The matrix bordered by a row and column of ones with a zero corner.
    pub fn bordered(&self) -> Vec<Vec<T>>
    where
        T: One,
    {
        let mut out: Vec<Vec<T>> = self
            .rows
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.push(T::one());
                r
            })
            .collect();
        let mut last = vec![T::one(); self.size()];
        last.push(T::zero());
        out.push(last);
        out
    }
}

/// Bordered Cayley-Menger determinant of exact squared distances.
pub fn cm_det_exact(m: &SquaredDistanceMatrix<BigRational>) -> BigRational {
    rational_determinant(&m.bordered())
}

/// First subset that breaks the Menger conditions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MengerViolation {
    pub subset: Vec<usize>,
    pub determinant: String,
    pub expected: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MengerReport {
    pub realisable: bool,
    pub violation: Option<MengerViolation>,
}

fn sign_ok(det: &BigRational, points: usize, strict: bool) -> bool {
    if det.is_zero() {
        return !strict;
    }
    det.is_positive() == points.is_multiple_of(2)
}

/// Menger's criterion for a squared distance matrix to come from points in
/// `R^d`: every subset of at most `d + 1` points has bordered determinant of
/// sign `(-1)^k` or zero, every `(d + 2)`-subset gives zero, and for exactly
/// `d + 3` points the full determinant vanishes too.
pub fn menger_realisable(m: &SquaredDistanceMatrix<BigRational>, d: usize) -> MengerReport {
    let n = m.size();
    let fail = |subset: Vec<usize>, det: BigRational, expected| MengerReport {
        realisable: false,
        violation: Some(MengerViolation {
            subset,
            determinant: det.to_string(),
            expected,
        }),
    };
    for k in 1..=(d + 1).min(n) {
        for subset in (0..n).combinations(k) {
            let det = cm_det_exact(&m.restrict(&subset));
            if !sign_ok(&det, k, false) {
                let expected = if k % 2 == 0 { "positive or zero" } else { "negative or zero" };
                return fail(subset, det, expected);
            }
        }
    }
    if n >= d + 2 {
        for subset in (0..n).combinations(d + 2) {
            let det = cm_det_exact(&m.restrict(&subset));
            if !det.is_zero() {
                return fail(subset, det, "zero");
            }
        }
    }
    if n == d + 3 {
        let det = cm_det_exact(m);
        if !det.is_zero() {
            return fail((0..n).collect(), det, "zero");
        }
    }
    MengerReport {
        realisable: true,
        violation: None,
    }
}

/// Squared edge lengths keyed by sorted vertex pairs.
pub type EdgeLabelling = BTreeMap<(u32, u32), BigRational>;

fn face_matrix(
    face: &[u32],
    labelling: &EdgeLabelling,
) -> Result<SquaredDistanceMatrix<BigRational>, RelationError> {
    let k = face.len();
    let mut rows = vec![vec![BigRational::zero(); k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let key = (face[i].min(face[j]), face[i].max(face[j]));
            let b = labelling
                .get(&key)
                .ok_or(RelationError::MissingLabel(key.0, key.1))?;
            rows[i][j] = b.clone();
            rows[j][i] = b.clone();
        }
    }
    Ok(SquaredDistanceMatrix { rows })
}

/// Whether a labelling is locally `d`-realisable on `t`: every face of
/// dimension `k <= d` has `sgn F = (-1)^(k-1)` or zero, and every face of
/// dimension `d + 1` has `F = 0`. With `nondegenerate` the sign must be
/// strict for `2 <= k <= d`.
pub fn locally_realisable(
    t: &Triangulation,
    labelling: &EdgeLabelling,
    d: usize,
    nondegenerate: bool,
) -> Result<bool, RelationError> {
    if let Some(&(i, j)) = t.edges().iter().find(|e| !labelling.contains_key(e)) {
        return Err(RelationError::MissingLabel(i, j));
    }
    for k in 1..=d {
        for face in t.faces(k) {
            let det = cm_det_exact(&face_matrix(&face, labelling)?);
            if !sign_ok(&det, k + 1, nondegenerate && k >= 2) {
                return Ok(false);
            }
        }
    }
    for face in t.faces(d + 1) {
        if !cm_det_exact(&face_matrix(&face, labelling)?).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Bordered Cayley-Menger determinant of `k` points as a polynomial in the
/// squared lengths. Variable `Var(i)` is the `i`-th pair of `0..k` in
/// lexicographic order.
pub fn cayley_menger_polynomial(field: Field, k: usize) -> Result<Polynomial, RelationError> {
    let pairs: Vec<(usize, usize)> = (0..k).tuple_combinations().collect();
    let var = |i: usize, j: usize| {
        let key = (i.min(j), i.max(j));
        Var(pairs.binary_search(&key).expect("pair") as u32)
    };
    let mut rows = vec![vec![Polynomial::zero(field); k + 1]; k + 1];
    for i in 0..k {
        for j in 0..k {
            if i != j {
                rows[i][j] = Polynomial::var(field, var(i, j));
            }
        }
        rows[i][k] = Polynomial::one(field);
        rows[k][i] = Polynomial::one(field);
    }
    Ok(determinant(&PolyMatrix::new(field, rows)?)?)
}

/// One bordered determinant per pentachoron, in variables `b_ij` for the
/// squared edge lengths.
pub fn cayley_menger_system(t: &Triangulation, field: Field) -> Result<RelationSystem, RelationError> {
    if t.dimension() != 4 {
        return Err(RelationError::WrongDimension {
            expected: 4,
            got: t.dimension(),
        });
    }
    super::check_patch(t)?;
    let (edges, names) = edge_variables(t, "b");
    let template = cayley_menger_polynomial(field, 5)?;
    let local: Vec<(usize, usize)> = (0..5).tuple_combinations().collect();
    let relations = t
        .simplices()
        .iter()
        .map(|s| {
            let global: Vec<u32> = local
                .iter()
                .map(|&(i, j)| edges.binary_search(&(s[i], s[j])).expect("edge of t") as u32)
                .collect();
            template.rename(|v| Var(global[v.0 as usize]))
        })
        .collect();
    RelationSystem::new(field, names, relations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn constant(k: usize, b: i64) -> SquaredDistanceMatrix<BigRational> {
        let rows = (0..k)
            .map(|i| (0..k).map(|j| if i == j { q(0) } else { q(b) }).collect())
            .collect();
        SquaredDistanceMatrix::new(rows).unwrap()
    }

    fn points(coords: &[&[i64]]) -> SquaredDistanceMatrix<BigRational> {
        let pts: Vec<Vec<BigRational>> = coords.iter().map(|p| p.iter().map(|&x| q(x)).collect()).collect();
        SquaredDistanceMatrix::from_points(&pts)
    }

    #[test]
    fn exact_determinants() {
        assert_eq!(cm_det_exact(&constant(4, 1)), q(4));
        assert_eq!(cm_det_exact(&constant(2, 1)), q(2));
        assert_eq!(cm_det_exact(&constant(3, 1)), q(-3));
        let five = points(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]);
        assert_eq!(cm_det_exact(&five), q(0));
    }

    #[test]
    fn matrix_validation() {
        assert_eq!(
            SquaredDistanceMatrix::new(vec![vec![q(0), q(1)], vec![q(2), q(0)]]),
            Err(RelationError::Asymmetric(0, 1))
        );
        assert_eq!(
            SquaredDistanceMatrix::new(vec![vec![q(1)]]),
            Err(RelationError::NotHollow(0))
        );
        assert_eq!(
            SquaredDistanceMatrix::new(vec![vec![q(0), q(1)]]),
            Err(RelationError::NotSquare)
        );
    }

    #[test]
    fn menger_examples() {
        assert!(menger_realisable(&constant(4, 1), 3).realisable);
        let report = menger_realisable(&constant(4, 1), 2);
        assert!(!report.realisable);
        let v = report.violation.unwrap();
        assert_eq!(v.subset, vec![0, 1, 2, 3]);
        assert_eq!(v.determinant, "4");
        let bad = SquaredDistanceMatrix::new(vec![
            vec![q(0), q(100), q(1)],
            vec![q(100), q(0), q(1)],
            vec![q(1), q(1), q(0)],
        ])
        .unwrap();
        let report = menger_realisable(&bad, 3);
        assert!(!report.realisable);
        assert_eq!(report.violation.unwrap().subset, vec![0, 1, 2]);
    }

    #[test]
    fn five_points_in_space_are_realisable_in_three_dimensions() {
        let five = points(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 2, 3]]);
        assert!(menger_realisable(&five, 3).realisable);
        assert!(!menger_realisable(&five, 2).realisable);
    }

    #[test]
    fn displayed_determinant_shape() {
        let p = cayley_menger_polynomial(Field::Rational, 5).unwrap();
        assert_eq!(p.terms().len(), 130);
        assert_eq!(p.degree(), Some(4));
        let p2 = cayley_menger_polynomial(Field::Binary(1), 5).unwrap();
        assert_eq!(p2.terms().len(), 15);
        assert!(p2.terms().iter().all(|(m, _)| m.factors().iter().all(|&(_, e)| e == 2)));
        // two points: 2 b
        let line = cayley_menger_polynomial(Field::Rational, 2).unwrap();
        assert_eq!(line.to_text(&["b".to_string()]), "2*b");
    }

    #[test]
    fn boundary_system_counts() {
        let t = Triangulation::boundary_of_simplex(4);
        let sys = cayley_menger_system(&t, Field::Rational).unwrap();
        assert_eq!(sys.relations().len(), 6);
        assert_eq!(sys.variables().len(), 15);
        assert_eq!(sys.variables()[0], "b_01");
        let doubled = Triangulation::new(4, 6, vec![vec![0, 1, 2, 3, 4], vec![0, 1, 2, 3, 4]]).unwrap();
        assert!(matches!(
            cayley_menger_system(&doubled, Field::Rational),
            Err(RelationError::InvalidTriangulation(_))
        ));
    }

    #[test]
    fn vertex_permutation_symmetry() {
        // Relabel vertices of one pentachoron and compare the polynomial
        // after mapping variables back.
        let t = Triangulation::new(4, 6, vec![vec![1, 2, 3, 4, 5]]).unwrap();
        let sys = cayley_menger_system(&t, Field::Rational).unwrap();
        assert_eq!(sys.relations().len(), 1);
        assert_eq!(sys.variables().len(), 10);
        assert_eq!(sys.variables()[0], "b_12");
        let p = cayley_menger_polynomial(Field::Rational, 5).unwrap();
        let pairs: Vec<(usize, usize)> = (0..5).tuple_combinations().collect();
        for perm in (0..5usize).permutations(5).step_by(7) {
            let renamed = p.rename(|v| {
                let (i, j) = pairs[v.0 as usize];
                let (a, b) = (perm[i].min(perm[j]), perm[i].max(perm[j]));
                Var(pairs.binary_search(&(a, b)).unwrap() as u32)
            });
            assert_eq!(renamed, p);
        }
    }

    #[test]
    fn local_realisability() {
        let t = Triangulation::boundary_of_simplex(4);
        let zero: EdgeLabelling = t.edges().into_iter().map(|e| (e, q(0))).collect();
        assert!(!locally_realisable(&t, &zero, 3, true).unwrap());
        assert!(locally_realisable(&t, &zero, 3, false).unwrap());
        let coords: [&[i64]; 6] = [&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 2, 3], &[-2, 1, 5]];
        let m = points(&coords);
        let lab: EdgeLabelling = t
            .edges()
            .into_iter()
            .map(|(i, j)| ((i, j), m.entry(i as usize, j as usize).clone()))
            .collect();
        assert!(locally_realisable(&t, &lab, 3, true).unwrap());
        let mut partial = lab.clone();
        partial.remove(&(0, 1));
        assert_eq!(
            locally_realisable(&t, &partial, 3, true),
            Err(RelationError::MissingLabel(0, 1))
        );
    }
}
