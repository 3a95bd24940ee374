//! Sparse multivariate polynomials in canonical form.
//!
//! Terms are kept sorted by [`Monomial`]'s order (largest first) with no zero
//! coefficients, so structural equality is mathematical equality.
//!
//! Monomials compare by total degree, then by their exponent partition (the
//! exponents sorted in decreasing order, compared lexicographically), then
//! lexicographically on the exponent vector with lower variable ids more
//! significant. Within a degree this lists pure powers before mixed products,
//! which reproduces the conventional printing of the complexity-2 Ptolemy
//! presentations, e.g. `x^2 + z^2 + y*z`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::field::{Field, Scalar};
use super::AlgebraError;

/// Index of a variable in some external name table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u32);

/// Product of variables with positive exponents, sorted by variable id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    /// Build from arbitrary `(var, exponent)` pairs; repeated variables are
    /// merged and zero exponents dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut map = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Rename variables; the map must be injective on this monomial.
    pub fn rename(&self, f: impl Fn(Var) -> Var) -> Monomial {
        Monomial::from_pairs(self.0.iter().map(|&(v, e)| (f(v), e)))
    }

    fn partition(&self) -> Vec<u32> {
        let mut p: Vec<u32> = self.0.iter().map(|&(_, e)| e).collect();
        p.sort_unstable_by(|a, b| b.cmp(a));
        p
    }

    fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        for k in 0..a.len().min(b.len()) {
            if a[k].0 != b[k].0 {
                // The monomial carrying the lower variable id is larger.
                return b[k].0.cmp(&a[k].0);
            }
            if a[k].1 != b[k].1 {
                return a[k].1.cmp(&b[k].1);
            }
        }
        a.len().cmp(&b.len())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.partition().cmp(&other.partition()))
            .then_with(|| self.lex_cmp(other))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: Field,
    terms: Vec<(Monomial, Scalar)>,
}

impl Polynomial {
    pub fn zero(field: Field) -> Self {
        Polynomial {
            field,
            terms: Vec::new(),
        }
    }

    pub fn constant(c: Scalar) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn one(field: Field) -> Self {
        Self::constant(field.one())
    }

    pub fn var(field: Field, v: Var) -> Self {
        Self::term(field.one(), Monomial::var(v))
    }

    pub fn term(c: Scalar, m: Monomial) -> Self {
        let field = c.field();
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        Polynomial { field, terms }
    }

    /// Collect terms into canonical form. All coefficients must lie in `field`.
    pub fn from_terms(
        field: Field,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Result<Self, AlgebraError> {
        let mut acc: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m, c) in terms {
            if c.field() != field {
                return Err(AlgebraError::FieldMismatch(c.field(), field));
            }
            match acc.get_mut(&m) {
                Some(existing) => *existing = &*existing + &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Ok(Self::from_sorted_map(field, acc))
    }

    fn from_sorted_map(field: Field, acc: BTreeMap<Monomial, Scalar>) -> Self {
        let terms = acc
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Polynomial { field, terms }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    /// Coefficient of the empty monomial.
    pub fn constant_term(&self) -> Scalar {
        self.terms
            .iter()
            .find(|(m, _)| m.is_one())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.field.zero())
    }

    /// Variables occurring in the polynomial, ascending.
    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.iter().flat_map(|(m, _)| m.vars()).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    fn check(&self, other: &Polynomial) -> Result<(), AlgebraError> {
        if self.field != other.field {
            return Err(AlgebraError::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, AlgebraError> {
        self.check(other)?;
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a[i].1 + &b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Ok(Polynomial {
            field: self.field,
            terms: out,
        })
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            field: self.field,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, AlgebraError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, AlgebraError> {
        self.check(other)?;
        let mut acc: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(existing) => *existing = &*existing + &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Ok(Self::from_sorted_map(self.field, acc))
    }

    pub fn scale(&self, c: &Scalar) -> Result<Polynomial, AlgebraError> {
        self.try_mul(&Polynomial::constant(c.clone()))
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.field);
        for _ in 0..e {
            acc = acc.try_mul(self).expect("same field");
        }
        acc
    }

    /// Value at a point. Every variable of the polynomial must be assigned a
    /// scalar of the polynomial's field.
    pub fn evaluate(&self, point: &BTreeMap<Var, Scalar>) -> Result<Scalar, AlgebraError> {
        self.evaluate_with(|v| point.get(&v).cloned())
    }

    /// Value at a point given as a slice indexed by variable id.
    pub fn evaluate_dense(&self, point: &[Scalar]) -> Result<Scalar, AlgebraError> {
        self.evaluate_with(|v| point.get(v.0 as usize).cloned())
    }

    pub fn evaluate_with(
        &self,
        lookup: impl Fn(Var) -> Option<Scalar>,
    ) -> Result<Scalar, AlgebraError> {
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.factors() {
                let x = lookup(v).ok_or(AlgebraError::MissingVariable(v))?;
                if x.field() != self.field {
                    return Err(AlgebraError::FieldMismatch(x.field(), self.field));
                }
                t = &t * &x.pow(e);
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Reinterpret the coefficients in another field via [`Field::embed`].
    pub fn embed(&self, target: Field) -> Result<Polynomial, AlgebraError> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| Ok((m.clone(), target.embed(c)?)))
            .collect::<Result<Vec<_>, AlgebraError>>()?;
        Polynomial::from_terms(target, terms)
    }

    /// Rename variables with an injective map.
    pub fn rename(&self, f: impl Fn(Var) -> Var) -> Polynomial {
        Polynomial::from_terms(
            self.field,
            self.terms.iter().map(|(m, c)| (m.rename(&f), c.clone())),
        )
        .expect("coefficients already in field")
    }

    /// Canonical text: terms joined by `" + "`, factors by `*`, powers as
    /// `name^e`, coefficient 1 omitted, `-1` printed as a leading `-`.
    pub fn to_text(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let factors: Vec<String> = m
                .factors()
                .iter()
                .map(|&(v, e)| {
                    let name = names
                        .get(v.0 as usize)
                        .cloned()
                        .unwrap_or_else(|| format!("v{}", v.0));
                    if e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            let mono = factors.join("*");
            let neg_one = c == &-&self.field.one() && self.field.characteristic() != 2;
            let part = if m.is_one() {
                c.to_text()
            } else if c.is_one() {
                mono
            } else if neg_one {
                format!("-{mono}")
            } else {
                format!("{}*{mono}", c.to_text())
            };
            parts.push(part);
        }
        parts.join(" + ")
    }

    /// Parse canonical (or any equivalent) text. Accepts `+` and binary `-`
    /// between terms, numeric coefficients, and names from `names`.
    pub fn parse(text: &str, field: Field, names: &[String]) -> Result<Polynomial, AlgebraError> {
        super::parse::parse_polynomial(text, field, names)
    }
}
