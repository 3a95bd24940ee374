//! Exact solution counts of relation systems over finite fields, and the
//! point-count heuristics built on them.
//!
//! Counts over `F_q` for several `q` stand in for the dimension of the
//! solution variety: a variety of dimension `d` has roughly `c q^d` points.
//! Nothing here certifies a birational equivalence; the comparisons are
//! necessary-style heuristics and are labelled as such in every report.

mod engine;

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::algebra::Field;
use crate::relations::{RelationError, RelationSystem};
use engine::{Arith, BinaryArith, Plan, PrimeArith};

/// Default cap on `q^v` for one run.
pub const DEFAULT_BUDGET: u128 = 1 << 34;
/// Runs whose search space exceeds this are flagged `long`.
pub const LONG_RUN: u128 = 1 << 28;
/// Largest solution list kept in memory by collect mode.
pub const DEFAULT_COLLECT_CAP: usize = 1 << 20;
/// Distance from an integer accepted for a fitted exponent.
pub const EXPONENT_TOLERANCE: f64 = 0.15;
/// Diff reports list entries only up to this many per side.
pub const DIFF_LISTING_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VarietyError {
    #[error("search space {required} exceeds the budget {budget}")]
    BudgetExceeded { required: String, budget: String },
    #[error("{0} is not a finite field")]
    NotFinite(Field),
    #[error("system over {system} cannot be read over {field}: {reason}")]
    DomainMismatch {
        system: Field,
        field: Field,
        reason: String,
    },
    #[error("solution sets differ in {0}")]
    Mismatch(&'static str),
    #[error("solution set with {0} elements was not materialized")]
    NotMaterialized(String),
    #[error("at least two fields are needed")]
    TooFewFields,
    #[error(transparent)]
    Relation(#[from] RelationError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Count,
    Collect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    pub budget: u128,
    /// Worker threads; 0 uses the global pool, 1 runs sequentially.
    pub threads: usize,
    pub collect_cap: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            budget: DEFAULT_BUDGET,
            threads: 0,
            collect_cap: DEFAULT_COLLECT_CAP,
        }
    }
}

pub(crate) fn serialize_u128<S: serde::Serializer>(n: &u128, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

/// Exact count over one field.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldCount {
    pub field: String,
    pub q: u32,
    #[serde(serialize_with = "serialize_u128")]
    pub count: u128,
    /// Search space `q^v` exceeded the long-run threshold.
    pub long: bool,
}

/// Solutions over one field; `assignments` is present only when the count
/// fits under the collect cap. Values are element indices (the integer for
/// `F_p`, the bit pattern for `F_{2^m}`), listed in variable order and
/// sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolutionSet {
    pub field: String,
    pub variables: Vec<String>,
    #[serde(serialize_with = "serialize_u128")]
    pub count: u128,
    pub assignments: Option<Vec<Vec<u32>>>,
}

fn checked_pow(q: u32, v: usize) -> u128 {
    (0..v).try_fold(1u128, |acc, _| acc.checked_mul(q as u128)).unwrap_or(u128::MAX)
}

fn prefix_length(q: u32, depth: usize) -> usize {
    let mut s = 0;
    let mut n = 1u64;
    while s < depth && n < 256 {
        n *= q as u64;
        s += 1;
    }
    s
}

fn all_prefixes(q: u32, s: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..s {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..q).map(move |a| {
                    let mut p = p.clone();
                    p.push(a);
                    p
                })
            })
            .collect();
    }
    out
}

type TaskResult = (u128, Option<Vec<Vec<u32>>>);

fn run_tasks<A: Arith>(plan: &Plan, arith: &A, collect: bool, threads: usize) -> Vec<TaskResult> {
    let prefixes = all_prefixes(plan.q, prefix_length(plan.q, plan.depth()));
    crate::parallel::map_ordered(&prefixes, threads, |p| {
        if collect {
            let mut sols = Vec::new();
            let n = plan.run_prefix(arith, p, Some(&mut sols));
            (n, Some(sols))
        } else {
            (plan.run_prefix(arith, p, None), None)
        }
    })
}

fn prepare(sys: &RelationSystem, field: Field) -> Result<RelationSystem, VarietyError> {
    if !field.is_finite() {
        return Err(VarietyError::NotFinite(field));
    }
    sys.embed(field).map_err(|e| VarietyError::DomainMismatch {
        system: sys.field(),
        field,
        reason: e.to_string(),
    })
}

fn search_space(q: u32, v: usize, budget: u128) -> Result<u128, VarietyError> {
    let space = checked_pow(q, v);
    if space > budget {
        return Err(VarietyError::BudgetExceeded {
            required: format!("{q}^{v}"),
            budget: budget.to_string(),
        });
    }
    Ok(space)
}

fn dispatch(plan: &Plan, field: Field, collect: bool, threads: usize) -> Vec<TaskResult> {
    match field {
        Field::Prime(p) => run_tasks(plan, &PrimeArith(p as u64), collect, threads),
        Field::Binary(m) => run_tasks(plan, &BinaryArith::new(m), collect, threads),
        Field::Rational => unreachable!("checked finite"),
    }
}

/// Number of points of the system over `field`. Unconstrained variables
/// contribute a factor `q` each without being enumerated.
pub fn count_solutions(sys: &RelationSystem, field: Field, opts: &Options) -> Result<FieldCount, VarietyError> {
    let sys = prepare(sys, field)?;
    let plan = Plan::new(field, sys.variables().len(), sys.relations(), false);
    let space = search_space(plan.q, plan.depth(), opts.budget)?;
    let total: u128 = dispatch(&plan, field, false, opts.threads)
        .iter()
        .map(|r| r.0)
        .sum();
    Ok(FieldCount {
        field: field.tag(),
        q: plan.q,
        count: total * checked_pow(plan.q, plan.free as usize),
        long: space > LONG_RUN,
    })
}

/// All points of the system over `field`.
pub fn collect_solutions(sys: &RelationSystem, field: Field, opts: &Options) -> Result<SolutionSet, VarietyError> {
    let sys = prepare(sys, field)?;
    let nvars = sys.variables().len();
    let plan = Plan::new(field, nvars, sys.relations(), true);
    search_space(plan.q, plan.depth(), opts.budget)?;
    let results = dispatch(&plan, field, true, opts.threads);
    let count: u128 = results.iter().map(|r| r.0).sum();
    let assignments = (count <= opts.collect_cap as u128).then(|| {
        let mut all: Vec<Vec<u32>> = results
            .into_iter()
            .flat_map(|r| r.1.unwrap_or_default())
            .map(|by_depth| {
                let mut row = vec![0; nvars];
                for (d, &v) in plan.order.iter().enumerate() {
                    row[v] = by_depth[d];
                }
                row
            })
            .collect();
        all.sort_unstable();
        all
    });
    Ok(SolutionSet {
        field: field.tag(),
        variables: sys.variables().to_vec(),
        count,
        assignments,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Enumeration {
    Count(FieldCount),
    Collect(SolutionSet),
}

pub fn enumerate_solutions(
    sys: &RelationSystem,
    field: Field,
    mode: Mode,
    opts: &Options,
) -> Result<Enumeration, VarietyError> {
    Ok(match mode {
        Mode::Count => Enumeration::Count(count_solutions(sys, field, opts)?),
        Mode::Collect => Enumeration::Collect(collect_solutions(sys, field, opts)?),
    })
}

/// Growth exponent between two adjacent fields.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairExponent {
    pub from: u32,
    pub to: u32,
    pub raw: f64,
    pub rounded: i64,
    pub near_integer: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimEstimate {
    pub dimension: Option<i64>,
    pub exponents: Vec<PairExponent>,
    pub diagnostic: Option<String>,
}

/// Common exponent `log(N'/N) / log(q'/q)` over adjacent fields, accepted
/// when every pair lands within `EXPONENT_TOLERANCE` of the same integer.
pub fn dim_estimate(counts: &[(u32, u128)]) -> DimEstimate {
    let fail = |exponents, why: &str| DimEstimate {
        dimension: None,
        exponents,
        diagnostic: Some(why.to_string()),
    };
    if counts.len() < 2 {
        return fail(Vec::new(), "at least two fields are needed");
    }
    if counts.iter().any(|&(_, n)| n == 0) {
        return fail(Vec::new(), "empty variety");
    }
    let exponents: Vec<PairExponent> = counts
        .windows(2)
        .map(|w| {
            let (q0, n0) = w[0];
            let (q1, n1) = w[1];
            let raw = ((n1 as f64) / (n0 as f64)).ln() / ((q1 as f64) / (q0 as f64)).ln();
            let rounded = raw.round() as i64;
            PairExponent {
                from: q0,
                to: q1,
                raw,
                rounded,
                near_integer: (raw - rounded as f64).abs() <= EXPONENT_TOLERANCE,
            }
        })
        .collect();
    let first = exponents[0].rounded;
    if exponents.iter().all(|e| e.near_integer && e.rounded == first) {
        DimEstimate {
            dimension: Some(first),
            exponents,
            diagnostic: None,
        }
    } else {
        fail(exponents, "inconsistent")
    }
}

/// Outcome of comparing point counts of two systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "k", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    /// `N_b = N_a q^k` exactly over every field.
    Consistent(i64),
    /// Growth exponents differ by about `k` but the exact ratios fail.
    Approximate(i64),
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub verdict: Verdict,
    pub counts_a: Vec<FieldCount>,
    pub counts_b: Vec<FieldCount>,
    pub note: &'static str,
}

pub const HEURISTIC_NOTE: &str =
    "heuristic: equal point-count growth is necessary for stable equivalence, not sufficient";

/// Integer `k` with `b = a q^k`, if any.
fn exact_shift(a: u128, b: u128, q: u32) -> Option<i64> {
    if a == 0 || b == 0 {
        return None;
    }
    let (small, big, sign) = if b >= a { (a, b, 1) } else { (b, a, -1) };
    let mut k = 0i64;
    let mut x = small;
    while x < big {
        x = x.checked_mul(q as u128)?;
        k += 1;
    }
    (x == big).then_some(sign * k)
}

fn verdict_from(a: &[FieldCount], b: &[FieldCount]) -> Verdict {
    let pairs: Vec<(u32, u128, u128)> = a.iter().zip(b).map(|(x, y)| (x.q, x.count, y.count)).collect();
    let nonempty: Vec<_> = pairs.iter().filter(|p| p.1 != 0 || p.2 != 0).collect();
    if nonempty.is_empty() {
        return Verdict::Consistent(0);
    }
    let shifts: Vec<Option<i64>> = nonempty.iter().map(|&&(q, x, y)| exact_shift(x, y, q)).collect();
    if let Some(Some(k)) = shifts.first() {
        if shifts.iter().all(|s| *s == Some(*k)) {
            return Verdict::Consistent(*k);
        }
    }
    let ea = dim_estimate(&pairs.iter().map(|p| (p.0, p.1)).collect::<Vec<_>>());
    let eb = dim_estimate(&pairs.iter().map(|p| (p.0, p.2)).collect::<Vec<_>>());
    if ea.exponents.is_empty() || eb.exponents.is_empty() {
        return Verdict::Inconsistent;
    }
    let diffs: Vec<f64> = ea
        .exponents
        .iter()
        .zip(&eb.exponents)
        .map(|(x, y)| y.raw - x.raw)
        .collect();
    let k = diffs[0].round();
    if diffs.iter().all(|d| (d - k).abs() <= EXPONENT_TOLERANCE) {
        Verdict::Approximate(k as i64)
    } else {
        Verdict::Inconsistent
    }
}

/// Compare the point counts of two systems field by field.
pub fn stable_equiv_compare(
    a: &RelationSystem,
    b: &RelationSystem,
    fields: &[Field],
    opts: &Options,
) -> Result<Comparison, VarietyError> {
    let counts_a = fields
        .iter()
        .map(|&f| count_solutions(a, f, opts))
        .collect::<Result<Vec<_>, _>>()?;
    let counts_b = fields
        .iter()
        .map(|&f| count_solutions(b, f, opts))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Comparison {
        verdict: verdict_from(&counts_a, &counts_b),
        counts_a,
        counts_b,
        note: HEURISTIC_NOTE,
    })
}

/// Symmetric difference of two solution sets over the same variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiffReport {
    pub field: String,
    pub variables: Vec<String>,
    #[serde(serialize_with = "serialize_u128")]
    pub count_a: u128,
    #[serde(serialize_with = "serialize_u128")]
    pub count_b: u128,
    pub only_a: usize,
    pub only_b: usize,
    pub equal: bool,
    /// SHA-256 of the canonical listing of both differences.
    pub digest: String,
    pub only_a_entries: Option<Vec<Vec<u32>>>,
    pub only_b_entries: Option<Vec<Vec<u32>>>,
}

pub(crate) fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn solution_diff(a: &SolutionSet, b: &SolutionSet) -> Result<DiffReport, VarietyError> {
    if a.field != b.field {
        return Err(VarietyError::Mismatch("field"));
    }
    if a.variables != b.variables {
        return Err(VarietyError::Mismatch("variables"));
    }
    let list = |s: &SolutionSet| {
        s.assignments
            .clone()
            .ok_or_else(|| VarietyError::NotMaterialized(s.count.to_string()))
    };
    let (xs, ys) = (list(a)?, list(b)?);
    // Both lists are sorted, so a merge finds the differences.
    let (mut only_a, mut only_b) = (Vec::new(), Vec::new());
    let (mut i, mut j) = (0, 0);
    while i < xs.len() || j < ys.len() {
        match (xs.get(i), ys.get(j)) {
            (Some(x), Some(y)) if x == y => {
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                only_a.push(x.clone());
                i += 1;
            }
            (Some(_), Some(y)) => {
                only_b.push(y.clone());
                j += 1;
            }
            (Some(x), None) => {
                only_a.push(x.clone());
                i += 1;
            }
            (None, Some(y)) => {
                only_b.push(y.clone());
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    let mut text = String::new();
    for (tag, rows) in [("a", &only_a), ("b", &only_b)] {
        for r in rows {
            text.push_str(tag);
            for v in r {
                text.push_str(&format!(" {v}"));
            }
            text.push('\n');
        }
    }
    let small = |rows: Vec<Vec<u32>>| (rows.len() <= DIFF_LISTING_CAP).then_some(rows);
    Ok(DiffReport {
        field: a.field.clone(),
        variables: a.variables.clone(),
        count_a: a.count,
        count_b: b.count,
        only_a: only_a.len(),
        only_b: only_b.len(),
        equal: only_a.is_empty() && only_b.is_empty(),
        digest: hex_digest(text.as_bytes()),
        only_a_entries: small(only_a),
        only_b_entries: small(only_b),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Polynomial, Scalar};
    use crate::relations::{fixtures, ptolemy_system_from_spine};

    fn fixture(name: &str) -> RelationSystem {
        ptolemy_system_from_spine(&fixtures::spine(name).unwrap(), Field::Binary(1), false).unwrap()
    }

    fn counts(sys: &RelationSystem, ms: &[u8]) -> Vec<u128> {
        ms.iter()
            .map(|&m| count_solutions(sys, Field::Binary(m), &Options::default()).unwrap().count)
            .collect()
    }

    #[test]
    fn fixture_counts() {
        assert_eq!(counts(&fixture("2_4"), &[1, 2, 3, 4]), vec![4, 16, 64, 256]);
        assert_eq!(counts(&fixture("2_1"), &[1, 2, 3, 4]), vec![3, 13, 15, 61]);
        assert_eq!(counts(&fixture("2_2"), &[1, 2, 3, 4]), vec![2, 4, 29, 16]);
        assert_eq!(counts(&fixture("2_3"), &[1, 2, 3, 4]), vec![2, 4, 8, 16]);
    }

    #[test]
    fn collect_matches_count_and_verifies() {
        for name in fixtures::SPINES {
            let sys = fixture(name);
            for m in 1..=3 {
                let f = Field::Binary(m);
                let set = collect_solutions(&sys, f, &Options::default()).unwrap();
                let rows = set.assignments.as_ref().unwrap();
                assert_eq!(rows.len() as u128, count_solutions(&sys, f, &Options::default()).unwrap().count);
                let embedded = sys.embed(f).unwrap();
                for row in rows {
                    let point: Vec<Scalar> = row.iter().map(|&i| f.element(i).unwrap()).collect();
                    for r in embedded.relations() {
                        assert!(r.evaluate_dense(&point).unwrap().is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn empty_system_is_affine_space() {
        let sys = RelationSystem::empty(Field::Binary(1), vec!["a".into(), "b".into(), "c".into()]);
        assert_eq!(counts(&sys, &[1]), vec![8]);
        let c = counts(&sys, &[1, 2, 3]);
        let est = dim_estimate(&[(2, c[0]), (4, c[1]), (8, c[2])]);
        assert_eq!(est.dimension, Some(3));
        let set = collect_solutions(&sys, Field::Binary(1), &Options::default()).unwrap();
        assert_eq!(set.assignments.unwrap().len(), 8);
    }

    #[test]
    fn dim_estimates() {
        assert_eq!(dim_estimate(&[(2, 4), (4, 16), (8, 64)]).dimension, Some(2));
        let bad = dim_estimate(&[(2, 3), (4, 13), (8, 15)]);
        assert_eq!(bad.dimension, None);
        assert_eq!(bad.diagnostic.as_deref(), Some("inconsistent"));
        assert_eq!(dim_estimate(&[(2, 0), (4, 1)]).diagnostic.as_deref(), Some("empty variety"));
        assert_eq!(dim_estimate(&[(2, 2), (4, 4), (8, 8), (16, 16)]).dimension, Some(1));
    }

    #[test]
    fn comparisons() {
        let opts = Options::default();
        let fields = [Field::Binary(1), Field::Binary(2), Field::Binary(3)];
        let a = fixture("2_3");
        let same = stable_equiv_compare(&a, &a, &fields, &opts).unwrap();
        assert_eq!(same.verdict, Verdict::Consistent(0));
        let mut names = a.variables().to_vec();
        names.push("w".into());
        let wider = a.over_variables(&names).unwrap();
        assert_eq!(stable_equiv_compare(&a, &wider, &fields, &opts).unwrap().verdict, Verdict::Consistent(1));
        assert_eq!(stable_equiv_compare(&wider, &a, &fields, &opts).unwrap().verdict, Verdict::Consistent(-1));
        let v = stable_equiv_compare(&fixture("2_1"), &fixture("2_4"), &fields, &opts).unwrap();
        assert!(!matches!(v.verdict, Verdict::Consistent(_)));
        let json = serde_json::to_string(&Verdict::Consistent(2)).unwrap();
        assert_eq!(json, r#"{"verdict":"CONSISTENT","k":2}"#);
    }

    #[test]
    fn diffs() {
        let set = |rows: Vec<Vec<u32>>| SolutionSet {
            field: "F2".into(),
            variables: vec!["x".into()],
            count: rows.len() as u128,
            assignments: Some(rows),
        };
        let same = solution_diff(&set(vec![vec![0], vec![1]]), &set(vec![vec![0], vec![1]])).unwrap();
        assert!(same.equal);
        let d = solution_diff(&set(vec![vec![0]]), &set(vec![vec![1]])).unwrap();
        assert_eq!((d.only_a, d.only_b), (1, 1));
        assert_eq!(d.only_a_entries, Some(vec![vec![0]]));
        let mut other = set(vec![]);
        other.variables = vec!["y".into()];
        assert_eq!(solution_diff(&set(vec![]), &other), Err(VarietyError::Mismatch("variables")));
    }

    #[test]
    fn budget_and_domain() {
        let sys = fixture("2_1");
        let tight = Options { budget: 7, ..Options::default() };
        assert!(matches!(
            count_solutions(&sys, Field::Binary(1), &tight),
            Err(VarietyError::BudgetExceeded { .. })
        ));
        assert!(matches!(
            count_solutions(&sys, Field::prime(101).unwrap(), &Options::default()),
            Err(VarietyError::DomainMismatch { .. })
        ));
        assert!(matches!(
            count_solutions(&sys, Field::Rational, &Options::default()),
            Err(VarietyError::NotFinite(_))
        ));
    }

    #[test]
    fn contradictory_constant() {
        let f = Field::prime(5).unwrap();
        let sys = RelationSystem::new(f, vec!["x".into()], vec![Polynomial::constant(f.one())]).unwrap();
        assert_eq!(count_solutions(&sys, f, &Options::default()).unwrap().count, 0);
    }

    #[test]
    fn prime_field_circle() {
        // x^2 + y^2 - 1 over F_p has p - (-1|p) points.
        let f = Field::prime(7).unwrap();
        let names: Vec<String> = vec!["x".into(), "y".into()];
        let p = Polynomial::parse("x^2 + y^2 - 1", f, &names).unwrap();
        let sys = RelationSystem::new(f, names, vec![p]).unwrap();
        assert_eq!(count_solutions(&sys, f, &Options::default()).unwrap().count, 8);
    }

    #[test]
    fn threads_do_not_change_results() {
        let t = crate::simplicial::Triangulation::boundary_of_simplex(3);
        let sys = crate::relations::ptolemy_system_from_3d(&t, Field::Binary(1), false).unwrap();
        let f = Field::Binary(1);
        let base = collect_solutions(&sys, f, &Options { threads: 1, ..Options::default() }).unwrap();
        for threads in [0, 2, 3] {
            let o = Options { threads, ..Options::default() };
            assert_eq!(collect_solutions(&sys, f, &o).unwrap(), base);
        }
    }
}
