use serde::Serialize;

use super::RelationError;
use crate::algebra::{AlgebraError, Scalar};

/// Commutative ring operations needed to complete a pentagon.
pub trait PentagonRing: Clone {
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// `None` when `other` is not invertible.
    fn div(&self, other: &Self) -> Option<Self>;
    /// Equality used for the relation checks: exact for field elements,
    /// relative `1e-9` for floats.
    fn agrees(&self, other: &Self) -> bool;
    fn compatible(_values: &[&Self]) -> Result<(), RelationError> {
        Ok(())
    }
}

impl PentagonRing for Scalar {
    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn div(&self, other: &Self) -> Option<Self> {
        self.try_div(other).ok()
    }

    fn agrees(&self, other: &Self) -> bool {
        self == other
    }

    fn compatible(values: &[&Self]) -> Result<(), RelationError> {
        let field = values[0].field();
        match values.iter().find(|v| v.field() != field) {
            Some(v) => Err(AlgebraError::FieldMismatch(v.field(), field).into()),
            None => Ok(()),
        }
    }
}

pub const FLOAT_RELATIVE_TOLERANCE: f64 = 1e-9;

impl PentagonRing for f64 {
    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn div(&self, other: &Self) -> Option<Self> {
        (*other != 0.0).then(|| self / other)
    }

    fn agrees(&self, other: &Self) -> bool {
        let scale = self.abs().max(other.abs()).max(1.0);
        (self - other).abs() <= FLOAT_RELATIVE_TOLERANCE * scale
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PentagonSolution<R> {
    pub i: R,
    pub j: R,
    pub k: R,
    /// Whether each relation listed on [`pentagon_complete`] holds, in order.
    pub relations: [bool; 5],
}

impl<R> PentagonSolution<R> {
    pub fn all_hold(&self) -> bool {
        self.relations.iter().all(|&r| r)
    }
}

/// Given five sides and two diagonals of a pentagon, solve for the other
/// three diagonals:
///
/// `j = (ce + dg)/f`, `k = (ac + bf)/g`, `i = (ace + bef + adg)/(fg)`
///
/// and check the five relations `jf = gd + ec`, `kg = ac + bf`,
/// `if = ad + ke`, `ig = aj + be`, `kj = ic + bd`.
#[allow(clippy::too_many_arguments, clippy::many_single_char_names)]
pub fn pentagon_complete<R: PentagonRing>(
    a: &R,
    b: &R,
    c: &R,
    d: &R,
    e: &R,
    f: &R,
    g: &R,
) -> Result<PentagonSolution<R>, RelationError> {
    R::compatible(&[a, b, c, d, e, f, g])?;
    let one_over = |x: &R, name| {
        x.div(x)
            .and_then(|one| one.div(x))
            .ok_or(RelationError::NotInvertible(name))
    };
    one_over(c, "c")?;
    let inv_f = one_over(f, "f")?;
    let inv_g = one_over(g, "g")?;
    let j = c.mul(e).add(&d.mul(g)).mul(&inv_f);
    let k = a.mul(c).add(&b.mul(f)).mul(&inv_g);
    let i = a
        .mul(c)
        .mul(e)
        .add(&b.mul(e).mul(f))
        .add(&a.mul(d).mul(g))
        .mul(&inv_f)
        .mul(&inv_g);
    let relations = [
        j.mul(f).agrees(&g.mul(d).add(&e.mul(c))),
        k.mul(g).agrees(&a.mul(c).add(&b.mul(f))),
        i.mul(f).agrees(&a.mul(d).add(&k.mul(e))),
        i.mul(g).agrees(&a.mul(&j).add(&b.mul(e))),
        k.mul(&j).agrees(&i.mul(c).add(&b.mul(d))),
    ];
    Ok(PentagonSolution { i, j, k, relations })
}
