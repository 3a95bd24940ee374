//! Coefficient domains and scalar arithmetic.
//!
//! Three kinds of domain are supported: prime fields `F_p` for `p < 2^16`,
//! binary extension fields `F_{2^m}` for `m` in `1..=4`, and the exact
//! rationals. Binary field elements are stored as bit patterns of their
//! polynomial representation over `F_2`, reduced modulo a fixed irreducible:
//!
//! | m | modulus       |
//! |---|---------------|
//! | 1 | `x`           |
//! | 2 | `x^2 + x + 1` |
//! | 3 | `x^3 + x + 1` |
//! | 4 | `x^4 + x + 1` |

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::AlgebraError;

/// Largest prime modulus accepted for `F_p`.
pub const MAX_PRIME: u32 = 1 << 16;

/// Irreducible moduli for `F_{2^m}`, indexed by `m`, as bit patterns.
const BINARY_MODULI: [u32; 5] = [0, 0b10, 0b111, 0b1011, 0b1_0011];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    /// `F_p` for a prime `p`.
    Prime(u32),
    /// `F_{2^m}` with the fixed modulus for `m`.
    Binary(u8),
    Rational,
}

impl Field {
    pub fn prime(p: u32) -> Result<Self, AlgebraError> {
        if !(2..MAX_PRIME).contains(&p) || !is_prime(p) {
            return Err(AlgebraError::InvalidField(format!("Fp:{p}")));
        }
        Ok(Field::Prime(p))
    }

    pub fn binary(m: u8) -> Result<Self, AlgebraError> {
        if !(1..=4).contains(&m) {
            return Err(AlgebraError::InvalidField(format!("F_2^{m}")));
        }
        Ok(Field::Binary(m))
    }

    /// The field with `q` elements among the supported ones: binary fields for
    /// `q` in {2, 4, 8, 16}, prime fields otherwise.
    pub fn with_order(q: u32) -> Result<Self, AlgebraError> {
        match q {
            2 => Ok(Field::Binary(1)),
            4 => Ok(Field::Binary(2)),
            8 => Ok(Field::Binary(3)),
            16 => Ok(Field::Binary(4)),
            _ => Field::prime(q),
        }
    }

    /// Number of elements, `None` for the rationals.
    pub fn order(self) -> Option<u32> {
        match self {
            Field::Prime(p) => Some(p),
            Field::Binary(m) => Some(1 << m),
            Field::Rational => None,
        }
    }

    pub fn characteristic(self) -> u32 {
        match self {
            Field::Prime(p) => p,
            Field::Binary(_) => 2,
            Field::Rational => 0,
        }
    }

    pub fn is_finite(self) -> bool {
        !matches!(self, Field::Rational)
    }

    pub fn zero(self) -> Scalar {
        self.from_int(0)
    }

    pub fn one(self) -> Scalar {
        self.from_int(1)
    }

    /// Image of an integer under the canonical ring map `Z -> field`.
    pub fn from_int(self, n: i64) -> Scalar {
        match self {
            Field::Prime(p) => Scalar::Prime {
                p,
                v: n.rem_euclid(p as i64) as u32,
            },
            Field::Binary(m) => Scalar::Binary {
                m,
                v: (n.rem_euclid(2)) as u8,
            },
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
        }
    }

    /// Element with the given index. For `F_p` the index is the residue, for
    /// `F_{2^m}` it is the bit pattern.
    pub fn element(self, index: u32) -> Result<Scalar, AlgebraError> {
        match self {
            Field::Prime(p) if index < p => Ok(Scalar::Prime { p, v: index }),
            Field::Binary(m) if index < (1 << m) => Ok(Scalar::Binary { m, v: index as u8 }),
            _ => Err(AlgebraError::InvalidElement {
                field: self,
                value: index.to_string(),
            }),
        }
    }

    /// All elements in index order. Empty for the rationals.
    pub fn elements(self) -> Vec<Scalar> {
        match self.order() {
            Some(q) => (0..q).map(|i| self.element(i).unwrap()).collect(),
            None => Vec::new(),
        }
    }

    /// Tag used in JSON files: `F2`, `F4`, `F8`, `F16`, `Fp:<p>`, `Q`.
    pub fn tag(self) -> String {
        self.to_string()
    }

    /// Map a scalar from another domain into this one, when the map is
    /// canonical: integers and rationals with invertible denominators reduce
    /// into any field, prime-subfield elements move between fields of the
    /// same characteristic.
    pub fn embed(self, s: &Scalar) -> Result<Scalar, AlgebraError> {
        if s.field() == self {
            return Ok(s.clone());
        }
        let mismatch = || AlgebraError::FieldMismatch(s.field(), self);
        match (s, self) {
            (Scalar::Rational(r), Field::Rational) => Ok(Scalar::Rational(r.clone())),
            (Scalar::Rational(r), _) => {
                let c = self.characteristic() as i64;
                let num = (r.numer() % BigInt::from(c)).to_i64().ok_or_else(mismatch)?;
                let den = (r.denom() % BigInt::from(c)).to_i64().ok_or_else(mismatch)?;
                let den = self.from_int(den);
                let inv = den.inverse().map_err(|_| mismatch())?;
                Ok(&self.from_int(num) * &inv)
            }
            (Scalar::Prime { p, v }, Field::Prime(p2)) if *p == p2 => Ok(self.from_int(*v as i64)),
            (Scalar::Prime { p: 2, v }, Field::Binary(_)) => Ok(self.from_int(*v as i64)),
            (Scalar::Binary { v, .. }, Field::Binary(_)) if *v <= 1 => Ok(self.from_int(*v as i64)),
            (Scalar::Binary { v, .. }, Field::Prime(2)) if *v <= 1 => Ok(self.from_int(*v as i64)),
            _ => Err(mismatch()),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "Fp:{p}"),
            Field::Binary(m) => write!(f, "F{}", 1u32 << m),
            Field::Rational => write!(f, "Q"),
        }
    }
}

impl FromStr for Field {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || AlgebraError::InvalidField(s.to_string());
        let s = s.trim();
        if s == "Q" {
            return Ok(Field::Rational);
        }
        if let Some(p) = s.strip_prefix("Fp:") {
            return Field::prime(p.parse().map_err(|_| bad())?);
        }
        // `F101` is accepted as shorthand for `Fp:101`.
        if let Some(q) = s.strip_prefix('F') {
            return Field::with_order(q.parse().map_err(|_| bad())?);
        }
        Err(bad())
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Carry-less multiplication in `F_{2^m}` with the fixed modulus.
pub(crate) fn binary_mul(m: u8, mut a: u32, mut b: u32) -> u32 {
    let modulus = BINARY_MODULI[m as usize];
    let mut r = 0;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> m & 1 == 1 {
            a ^= modulus;
        }
    }
    r
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// An element of one of the supported coefficient domains.
///
/// Arithmetic operators panic when the operands live in different fields;
/// polynomial-level operations check domains first and report a
/// [`AlgebraError::FieldMismatch`] instead.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Prime { p: u32, v: u32 },
    Binary { m: u8, v: u8 },
    Rational(BigRational),
}

impl Scalar {
    pub fn rational(r: BigRational) -> Self {
        Scalar::Rational(r)
    }

    pub fn integer(n: i64) -> Self {
        Field::Rational.from_int(n)
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Prime { p, .. } => Field::Prime(*p),
            Scalar::Binary { m, .. } => Field::Binary(*m),
            Scalar::Rational(_) => Field::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Prime { v, .. } => *v == 0,
            Scalar::Binary { v, .. } => *v == 0,
            Scalar::Rational(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Prime { v, .. } => *v == 1,
            Scalar::Binary { v, .. } => *v == 1,
            Scalar::Rational(r) => r.is_one(),
        }
    }

    /// Index of a finite-field element (see [`Field::element`]).
    pub fn index(&self) -> Option<u32> {
        match self {
            Scalar::Prime { v, .. } => Some(*v),
            Scalar::Binary { v, .. } => Some(*v as u32),
            Scalar::Rational(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn inverse(&self) -> Result<Scalar, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Prime { p, v } => Scalar::Prime {
                p: *p,
                v: pow_mod(*v as u64, *p as u64 - 2, *p as u64) as u32,
            },
            Scalar::Binary { m, v } => {
                // a^(2^m - 2) = a^-1 in a field of order 2^m.
                let mut acc = 1u32;
                for _ in 0..(1u32 << m) - 2 {
                    acc = binary_mul(*m, acc, *v as u32);
                }
                Scalar::Binary { m: *m, v: acc as u8 }
            }
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
        })
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar, AlgebraError> {
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, mut exp: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Sign of a rational scalar; `None` in finite fields.
    pub fn signum(&self) -> Option<i32> {
        self.as_rational().map(|r| {
            if r.is_zero() {
                0
            } else if r.is_positive() {
                1
            } else {
                -1
            }
        })
    }

    /// Textual form used inside polynomial strings: the residue for `F_p`,
    /// the bit pattern for `F_{2^m}`, `n` or `n/d` for rationals.
    pub fn to_text(&self) -> String {
        match self {
            Scalar::Prime { v, .. } => v.to_string(),
            Scalar::Binary { v, .. } => v.to_string(),
            Scalar::Rational(r) => {
                if r.is_integer() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
        }
    }

    /// Parse the output of [`Scalar::to_text`] (optionally signed) in `field`.
    pub fn parse(text: &str, field: Field) -> Result<Scalar, AlgebraError> {
        let bad = || AlgebraError::InvalidElement {
            field,
            value: text.to_string(),
        };
        let (neg, body) = match text.trim().strip_prefix('-') {
            Some(rest) => (true, rest.trim()),
            None => (false, text.trim()),
        };
        let value = match field {
            Field::Rational => {
                let r = match body.split_once('/') {
                    Some((n, d)) => {
                        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                        if d.is_zero() {
                            return Err(bad());
                        }
                        BigRational::new(n, d)
                    }
                    None => BigRational::from_integer(body.parse().map_err(|_| bad())?),
                };
                Scalar::Rational(r)
            }
            Field::Prime(p) => {
                let v: u64 = body.parse().map_err(|_| bad())?;
                field.from_int((v % p as u64) as i64)
            }
            Field::Binary(_) => {
                let v: u32 = body.parse().map_err(|_| bad())?;
                field.element(v).map_err(|_| bad())?
            }
        };
        Ok(if neg { -&value } else { value })
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn mixed(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar arithmetic across fields: {} and {}", a.field(), b.field())
}

impl Add for &Scalar {
    type Output = Scalar;

    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Prime { p, v }, Scalar::Prime { p: p2, v: w }) if p == p2 => Scalar::Prime {
                p: *p,
                v: ((*v as u64 + *w as u64) % *p as u64) as u32,
            },
            (Scalar::Binary { m, v }, Scalar::Binary { m: m2, v: w }) if m == m2 => {
                Scalar::Binary { m: *m, v: v ^ w }
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            _ => mixed(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Prime { p, v } => Scalar::Prime {
                p: *p,
                v: (*p - *v) % *p,
            },
            Scalar::Binary { .. } => self.clone(),
            Scalar::Rational(r) => Scalar::Rational(-r),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Prime { p, v }, Scalar::Prime { p: p2, v: w }) if p == p2 => Scalar::Prime {
                p: *p,
                v: ((*v as u64 * *w as u64) % *p as u64) as u32,
            },
            (Scalar::Binary { m, v }, Scalar::Binary { m: m2, v: w }) if m == m2 => {
                Scalar::Binary {
                    m: *m,
                    v: binary_mul(*m, *v as u32, *w as u32) as u8,
                }
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            _ => mixed(self, rhs),
        }
    }
}
