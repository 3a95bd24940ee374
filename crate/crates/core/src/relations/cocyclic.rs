use num_rational::BigRational;

use super::{RelationError, SquaredDistanceMatrix};
use crate::algebra::{float_determinant, rational_determinant};

/// Unbordered determinant of the squared distances of four plane points.
/// Vanishes exactly when the points are concyclic or collinear.
pub fn concyclic_det4(m: &SquaredDistanceMatrix<BigRational>) -> Result<BigRational, RelationError> {
    berger_cocyclic(m, 2)
}

/// Unbordered determinant of the squared distances of `n + 2` points in
/// `R^n`. Vanishes exactly when they share an `(n-1)`-sphere or hyperplane.
pub fn berger_cocyclic(
    m: &SquaredDistanceMatrix<BigRational>,
    n: usize,
) -> Result<BigRational, RelationError> {
    if m.size() != n + 2 {
        return Err(RelationError::WrongSize {
            expected: n + 2,
            got: m.size(),
        });
    }
    Ok(rational_determinant(m.rows()))
}

fn det_of(d: &[[f64; 4]; 4], f: impl Fn(f64) -> f64) -> f64 {
    let rows: Vec<Vec<f64>> = (0..4)
        .map(|i| (0..4).map(|j| if i == j { 0.0 } else { f(d[i][j]) }).collect())
        .collect();
    float_determinant(&rows)
}

/// Determinant of `sinh^2(d_ij / 2)` for four points of the hyperbolic plane
/// of curvature -1.
pub fn hyperbolic_det4(d: &[[f64; 4]; 4]) -> f64 {
    det_of(d, |x| (x / 2.0).sinh().powi(2))
}

/// Determinant of `sin^2(d_ij / (2 rho))` for four points on a sphere of
/// radius `rho`. Never positive; zero on a great circle.
pub fn spherical_det4(d: &[[f64; 4]; 4], rho: f64) -> f64 {
    det_of(d, |x| (x / (2.0 * rho)).sin().powi(2))
}
