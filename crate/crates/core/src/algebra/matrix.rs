//! Determinants of small matrices.
//!
//! Symbolic determinants use Laplace (cofactor) expansion along rows. Minors
//! are memoized by their column set, so an `n x n` matrix costs `n * 2^(n-1)`
//! polynomial products rather than `n!`. Scalar matrices additionally have a
//! Gaussian-elimination route, used to cross-check the symbolic one.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::field::{Field, Scalar};
use super::polynomial::Polynomial;
use super::AlgebraError;

/// Largest matrix size accepted by [`determinant`].
pub const MAX_SIZE: usize = 8;

/// Square matrix of polynomials over one field.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMatrix {
    field: Field,
    rows: Vec<Vec<Polynomial>>,
}

impl PolyMatrix {
    pub fn new(field: Field, rows: Vec<Vec<Polynomial>>) -> Result<Self, AlgebraError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(AlgebraError::NotSquare);
        }
        if n > MAX_SIZE {
            return Err(AlgebraError::TooLarge(n));
        }
        if let Some(p) = rows.iter().flatten().find(|p| p.field() != field) {
            return Err(AlgebraError::FieldMismatch(p.field(), field));
        }
        Ok(PolyMatrix { field, rows })
    }

    pub fn from_scalars(field: Field, rows: &[Vec<Scalar>]) -> Result<Self, AlgebraError> {
        let rows = rows
            .iter()
            .map(|r| r.iter().cloned().map(Polynomial::constant).collect())
            .collect();
        Self::new(field, rows)
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn entry(&self, i: usize, j: usize) -> &Polynomial {
        &self.rows[i][j]
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        self.rows.swap(i, j);
    }

    pub fn set_row(&mut self, i: usize, row: Vec<Polynomial>) {
        assert_eq!(row.len(), self.size());
        self.rows[i] = row;
    }

    /// Entry-wise evaluation at a point indexed by variable id.
    pub fn evaluate_dense(&self, point: &[Scalar]) -> Result<Vec<Vec<Scalar>>, AlgebraError> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|p| p.evaluate_dense(point)).collect())
            .collect()
    }
}

/// Exact determinant by memoized cofactor expansion.
pub fn determinant(m: &PolyMatrix) -> Result<Polynomial, AlgebraError> {
    let n = m.size();
    if n == 0 {
        return Ok(Polynomial::one(m.field));
    }
    // minors[mask] = determinant of the bottom rows restricted to the columns
    // in `mask`, for masks with popcount equal to the number of bottom rows.
    let mut minors: Vec<Option<Polynomial>> = vec![None; 1 << n];
    minors[0] = Some(Polynomial::one(m.field));
    for row in (0..n).rev() {
        let width = n - row;
        for mask in 0usize..1 << n {
            if mask.count_ones() as usize != width {
                continue;
            }
            let mut acc = Polynomial::zero(m.field);
            // Columns of `mask` in increasing order; the sign alternates with
            // the position of the column inside the mask.
            for (pos, col) in (0..n).filter(|c| mask >> c & 1 == 1).enumerate() {
                let entry = &m.rows[row][col];
                if entry.is_zero() {
                    continue;
                }
                let minor = minors[mask & !(1 << col)].as_ref().expect("computed");
                if minor.is_zero() {
                    continue;
                }
                let prod = entry.try_mul(minor)?;
                acc = if pos % 2 == 0 {
                    acc.try_add(&prod)?
                } else {
                    acc.try_sub(&prod)?
                };
            }
            minors[mask] = Some(acc);
        }
        // Minors two levels down are no longer needed.
        if width >= 2 {
            for mask in 0usize..1 << n {
                if mask.count_ones() as usize == width - 1 && mask != 0 {
                    minors[mask] = None;
                }
            }
        }
    }
    Ok(minors[(1 << n) - 1].take().expect("full minor"))
}

/// Determinant of a scalar matrix by Gaussian elimination over its field.
pub fn scalar_determinant(field: Field, rows: &[Vec<Scalar>]) -> Result<Scalar, AlgebraError> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(AlgebraError::NotSquare);
    }
    if let Some(s) = rows.iter().flatten().find(|s| s.field() != field) {
        return Err(AlgebraError::FieldMismatch(s.field(), field));
    }
    let mut a = rows.to_vec();
    let mut det = field.one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Ok(field.zero());
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -&det;
        }
        det = &det * &a[col][col];
        let inv = a[col][col].inverse()?;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] * &inv;
            for c in col..n {
                let t = &factor * &a[col][c];
                a[r][c] = &a[r][c] - &t;
            }
        }
    }
    Ok(det)
}

/// Exact rational determinant by Gaussian elimination.
pub fn rational_determinant(rows: &[Vec<BigRational>]) -> BigRational {
    let n = rows.len();
    let mut a = rows.to_vec();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &p;
            for c in col..n {
                let t = &factor * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    det
}

/// Floating determinant by Gaussian elimination with partial pivoting.
pub fn float_determinant(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    let mut a = rows.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("non-empty range");
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col];
        det *= p;
        for r in col + 1..n {
            let factor = a[r][col] / p;
            for c in col..n {
                a[r][c] -= factor * a[col][c];
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Var;

    fn names(ns: &[&str]) -> Vec<String> {
        ns.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn two_by_two_symbolic() {
        let q = Field::Rational;
        let v = |i| Polynomial::var(q, Var(i));
        let m = PolyMatrix::new(q, vec![vec![v(0), v(1)], vec![v(2), v(3)]]).unwrap();
        let d = determinant(&m).unwrap();
        assert_eq!(d.to_text(&names(&["a", "b", "c", "d"])), "a*d + -b*c");
    }

    #[test]
    fn identity_six_by_six() {
        let q = Field::Rational;
        let rows: Vec<Vec<Scalar>> = (0..6)
            .map(|i| (0..6).map(|j| q.from_int((i == j) as i64)).collect())
            .collect();
        let m = PolyMatrix::from_scalars(q, &rows).unwrap();
        assert_eq!(determinant(&m).unwrap(), Polynomial::one(q));
    }

    #[test]
    fn hollow_ones_three_by_three() {
        // 0*(0-1) - 1*(0-1) + 1*(1-0) = 2
        let q = Field::Rational;
        let rows: Vec<Vec<Scalar>> = [[0, 1, 1], [1, 0, 1], [1, 1, 0]]
            .iter()
            .map(|r| r.iter().map(|&x| q.from_int(x)).collect())
            .collect();
        let m = PolyMatrix::from_scalars(q, &rows).unwrap();
        assert_eq!(determinant(&m).unwrap(), Polynomial::constant(q.from_int(2)));
        assert_eq!(scalar_determinant(q, &rows).unwrap(), q.from_int(2));
    }

    #[test]
    fn non_square_is_rejected() {
        let q = Field::Rational;
        let rows = vec![vec![Polynomial::one(q), Polynomial::one(q)]];
        assert!(matches!(PolyMatrix::new(q, rows), Err(AlgebraError::NotSquare)));
        assert!(matches!(
            scalar_determinant(q, &[vec![q.one(), q.one()]]),
            Err(AlgebraError::NotSquare)
        ));
    }

    #[test]
    fn float_route_matches_exact_route() {
        let rows = [[2.0, -1.0, 0.5], [1.0, 3.0, -2.0], [0.0, 4.0, 1.0]];
        let f: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
        let exact: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_float(x).unwrap()).collect())
            .collect();
        let e = rational_determinant(&exact);
        let e: f64 = num_traits::ToPrimitive::to_f64(&e).unwrap();
        assert!((float_determinant(&f) - e).abs() < 1e-12);
    }
}
