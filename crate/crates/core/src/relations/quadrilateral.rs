use super::RelationError;

/// `(P1P2)(P3P4) + (P1P4)(P2P3) - (P1P3)(P2P4)` for sides `a = P1P2`,
/// `b = P2P3`, `c = P3P4`, `d = P4P1` and diagonals `x = P1P3`, `y = P2P4`.
pub fn ptolemy_residual(a: f64, b: f64, c: f64, d: f64, x: f64, y: f64) -> f64 {
    a * c + d * b - x * y
}

/// Second diagonal `f = P2P4` of a convex quadrilateral from its sides
/// `a = P1P2`, `b = P2P3`, `c = P3P4`, `d = P4P1` and the diagonal
/// `e = P1P3`:
///
/// `2f^2 = a^2+b^2+c^2+d^2-e^2 + (a^2-b^2)(c^2-d^2)/e^2 + sqrt(X1 X2)/e^2`
///
/// with `X1 = 4a^2b^2 - (a^2+b^2-e^2)^2` and `X2 = 4c^2d^2 - (c^2+d^2-e^2)^2`,
/// each sixteen times a squared triangle area. The positive root is the
/// convex configuration.
pub fn quad_diagonal(a: f64, b: f64, c: f64, d: f64, e: f64) -> Result<f64, RelationError> {
    if e <= 0.0 {
        return Err(RelationError::ZeroDiagonal);
    }
    let (a2, b2, c2, d2, e2) = (a * a, b * b, c * c, d * d, e * e);
    // Degenerate triangles may come out as tiny negatives.
    let slack = 1e-12 * (a2 + b2 + c2 + d2 + e2).powi(2);
    let area = |p2: f64, q2: f64| {
        let x = 4.0 * p2 * q2 - (p2 + q2 - e2).powi(2);
        if x < -slack {
            Err(RelationError::NegativeRadicand(x))
        } else {
            Ok(x.max(0.0))
        }
    };
    let x1 = area(a2, b2)?;
    let x2 = area(c2, d2)?;
    let two_f2 = a2 + b2 + c2 + d2 - e2 + (a2 - b2) * (c2 - d2) / e2 + (x1 * x2).sqrt() / e2;
    if two_f2 < 0.0 {
        return Err(RelationError::NegativeRadicand(two_f2));
    }
    Ok((two_f2 / 2.0).sqrt())
}

/// `(cosh OF - cosh OA cosh AF, cosh OF - cosh OB cosh BF)`, both zero for a
/// Lambert quadrilateral with right angles at `A`, `O` and `B`.
pub fn lambert_check(oa: f64, af: f64, ob: f64, bf: f64, of: f64) -> (f64, f64) {
    let c = of.cosh();
    (c - oa.cosh() * af.cosh(), c - ob.cosh() * bf.cosh())
}
