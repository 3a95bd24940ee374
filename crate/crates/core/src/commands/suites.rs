//! Randomized property suites. Trial `i` draws from its own stream of the
//! seeded source, so results do not depend on how trials are scheduled.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use super::{CommandError, ExitStatus, Recorder, RunContext, RunReport};
use crate::algebra::{Field, Scalar};
use crate::oracle::float::{
    cyclic_quadrilateral, hyperbolic_sampler, spherical_sampler, HyperbolicKind, HyperbolicSample,
    SphericalKind,
};
use crate::oracle::{
    induced_labelling, random_config, random_generic_config, rational_circle_points,
    rational_sphere_points, RandomSource, TrialRng,
};
use crate::parallel::map_ordered;
use crate::relations::{
    berger_cocyclic, cayley_menger_system, cm_det_exact, concyclic_det4, edge_variables,
    hyperbolic_det4, lambert_check, locally_realisable, menger_realisable, pentagon_complete,
    ptolemy_residual, quad_diagonal, spherical_det4,
};
use crate::simplicial::{apply_move, candidate_loci, MoveKind, Triangulation};

/// Float tolerance of the hyperbolic, spherical and Lambert suites.
pub const DET_TOLERANCE: f64 = 1e-8;
/// Relative tolerance of the Euclidean quadrilateral suites.
pub const RELATIVE_TOLERANCE: f64 = 1e-9;
/// Failures listed in a report; the rest are only counted.
pub const FAILURE_LISTING_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Cm,
    Concyclic,
    Berger,
    Ptolemy,
    Quad,
    Pentagon,
    Hyperbolic,
    Spherical,
    Invariance,
    Pachner,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Cm,
        Suite::Concyclic,
        Suite::Berger,
        Suite::Ptolemy,
        Suite::Quad,
        Suite::Pentagon,
        Suite::Hyperbolic,
        Suite::Spherical,
        Suite::Invariance,
        Suite::Pachner,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Cm => "cm",
            Suite::Concyclic => "concyclic",
            Suite::Berger => "berger",
            Suite::Ptolemy => "ptolemy",
            Suite::Quad => "quad",
            Suite::Pentagon => "pentagon",
            Suite::Hyperbolic => "hyperbolic",
            Suite::Spherical => "spherical",
            Suite::Invariance => "invariance",
            Suite::Pachner => "pachner",
        }
    }

    pub fn default_trials(self) -> usize {
        match self {
            Suite::Pentagon => 10_000,
            Suite::Invariance => 200,
            Suite::Pachner => 500,
            _ => 1000,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = CommandError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| CommandError::Input(format!("unknown oracle suite {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleArgs {
    pub suite: Suite,
    pub seed: u64,
    pub trials: Option<usize>,
    /// Field of the pentagon suite; `F101` when absent.
    pub field: Option<Field>,
}

impl OracleArgs {
    pub fn new(suite: Suite) -> Self {
        OracleArgs {
            suite,
            seed: 0,
            trials: None,
            field: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct Trial {
    ok: bool,
    /// Worst measured residual, for the floating suites.
    #[serde(skip_serializing_if = "Option::is_none")]
    residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

impl Trial {
    fn exact(ok: bool, detail: impl FnOnce() -> String) -> Self {
        Trial {
            ok,
            residual: None,
            detail: (!ok).then(detail),
        }
    }

    fn measured(residual: f64, bound: f64) -> Self {
        let ok = residual.abs() <= bound;
        Trial {
            ok,
            residual: Some(residual),
            detail: (!ok).then(|| format!("residual {residual:e} exceeds {bound:e}")),
        }
    }

    fn and(self, other: Trial) -> Trial {
        let residual = match (self.residual, other.residual) {
            (Some(a), Some(b)) => Some(if a.abs() >= b.abs() { a } else { b }),
            (a, b) => a.or(b),
        };
        let detail = match (self.detail, other.detail) {
            (Some(a), Some(b)) => Some(format!("{a}; {b}")),
            (a, b) => a.or(b),
        };
        Trial {
            ok: self.ok && other.ok,
            residual,
            detail,
        }
    }
}

fn distinct_rationals(rng: &mut TrialRng, k: usize) -> Vec<BigRational> {
    let mut out: Vec<BigRational> = Vec::with_capacity(k);
    while out.len() < k {
        let x = rng.rational();
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

fn cm_trial(src: &RandomSource, i: u64) -> Trial {
    let flat = random_config(3, 5, &mut src.stream(2 * i));
    let det3 = cm_det_exact(&flat.squared_distances());
    let generic = random_generic_config(4, 5, &mut src.stream(2 * i + 1));
    let det4 = cm_det_exact(&generic.squared_distances());
    Trial::exact(det3.is_zero(), || format!("five points in R^3 give {det3}"))
        .and(Trial::exact(det4.is_negative(), || format!("five generic points in R^4 give {det4}")))
}

fn concyclic_trial(rng: &mut TrialRng) -> Trial {
    let params = distinct_rationals(rng, 4);
    let det = rational_circle_points(&params)
        .map_err(|e| e.to_string())
        .and_then(|c| concyclic_det4(&c.squared_distances()).map_err(|e| e.to_string()));
    match det {
        Ok(d) => Trial::exact(d.is_zero(), || format!("determinant {d}")),
        Err(e) => Trial::exact(false, || e),
    }
}

fn berger_trial(rng: &mut TrialRng) -> Trial {
    let mut params: Vec<Vec<BigRational>> = Vec::with_capacity(5);
    while params.len() < 5 {
        let p = rng.rational_point(2);
        if !params.contains(&p) {
            params.push(p);
        }
    }
    let det = rational_sphere_points(3, &params)
        .map_err(|e| e.to_string())
        .and_then(|c| berger_cocyclic(&c.squared_distances(), 3).map_err(|e| e.to_string()));
    match det {
        Ok(d) => Trial::exact(d.is_zero(), || format!("determinant {d}")),
        Err(e) => Trial::exact(false, || e),
    }
}

fn ptolemy_trial(rng: &mut TrialRng) -> Trial {
    let q = cyclic_quadrilateral(rng);
    let r = ptolemy_residual(q.a, q.b, q.c, q.d, q.e, q.f) / (q.e * q.f);
    Trial::measured(r, RELATIVE_TOLERANCE)
}

fn quad_trial(rng: &mut TrialRng) -> Trial {
    let q = cyclic_quadrilateral(rng);
    match quad_diagonal(q.a, q.b, q.c, q.d, q.e) {
        Ok(f) => Trial::measured((f - q.f) / q.f, RELATIVE_TOLERANCE),
        Err(e) => Trial::exact(false, || e.to_string()),
    }
}

fn random_element(field: Field, rng: &mut TrialRng, nonzero: bool) -> Scalar {
    loop {
        let x = match field.order() {
            Some(q) => field.element(rng.below(q as usize) as u32).expect("in range"),
            None => Scalar::rational(rng.rational()),
        };
        if !(nonzero && x.is_zero()) {
            return x;
        }
    }
}

fn pentagon_trial(field: Field, rng: &mut TrialRng) -> Trial {
    let v: Vec<Scalar> = (0..7)
        .map(|k| random_element(field, rng, matches!(k, 2 | 5 | 6)))
        .collect();
    pentagon_check(&v)
}

fn pentagon_check(v: &[Scalar]) -> Trial {
    match pentagon_complete(&v[0], &v[1], &v[2], &v[3], &v[4], &v[5], &v[6]) {
        Ok(s) => Trial::exact(s.all_hold(), || {
            let args: Vec<String> = v.iter().map(|x| x.to_text()).collect();
            format!("relations {:?} at ({})", s.relations, args.join(", "))
        }),
        Err(e) => Trial::exact(false, || e.to_string()),
    }
}

/// Every tuple over `field` with `c, f, g` nonzero.
fn pentagon_exhaustive(field: Field) -> Value {
    let all = field.elements();
    let nonzero: Vec<Scalar> = all.iter().filter(|x| !x.is_zero()).cloned().collect();
    let pools = [&all, &all, &nonzero, &all, &all, &nonzero, &nonzero];
    let total: usize = pools.iter().map(|p| p.len()).product();
    let mut failures = 0usize;
    let mut first = None;
    let mut idx = [0usize; 7];
    for _ in 0..total {
        let v: Vec<Scalar> = (0..7).map(|k| pools[k][idx[k]].clone()).collect();
        let t = pentagon_check(&v);
        if !t.ok {
            failures += 1;
            first = first.or(t.detail);
        }
        for k in (0..7).rev() {
            idx[k] += 1;
            if idx[k] < pools[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
    json!({ "field": field.tag(), "tuples": total, "failures": failures, "first_failure": first })
}

fn hyperbolic_trial(rng: &mut TrialRng) -> (Trial, f64) {
    let HyperbolicSample::Circle { distances } = hyperbolic_sampler(HyperbolicKind::Circle, rng) else {
        unreachable!("circle sampler")
    };
    let circle = Trial::measured(hyperbolic_det4(&distances), DET_TOLERANCE);
    let HyperbolicSample::Lambert(l) = hyperbolic_sampler(HyperbolicKind::Lambert, rng) else {
        unreachable!("lambert sampler")
    };
    let (r1, r2) = lambert_check(l.oa, l.af, l.ob, l.bf, l.of);
    let lambert = Trial::measured(r1, DET_TOLERANCE).and(Trial::measured(r2, DET_TOLERANCE));
    let HyperbolicSample::Generic { distances } = hyperbolic_sampler(HyperbolicKind::Generic, rng) else {
        unreachable!("generic sampler")
    };
    (circle.and(lambert), hyperbolic_det4(&distances))
}

fn spherical_trial(rng: &mut TrialRng) -> Trial {
    let rho = rng.uniform(0.5, 3.0);
    let on_circle = spherical_det4(&spherical_sampler(SphericalKind::GreatCircle, rho, rng), rho);
    let random = spherical_det4(&spherical_sampler(SphericalKind::Random, rho, rng), rho);
    let sign = Trial {
        ok: random <= DET_TOLERANCE,
        residual: Some(random.max(0.0)),
        detail: (random > DET_TOLERANCE).then(|| format!("random sample determinant {random:e} is positive")),
    };
    Trial::measured(on_circle, DET_TOLERANCE).and(sign)
}

/// Labelling induced by six generic points of `R^3` on the boundary of the
/// 5-simplex: every pentachoron relation vanishes and the labelling is
/// locally realisable.
fn invariance_trial(rng: &mut TrialRng) -> Trial {
    let t = Triangulation::boundary_of_simplex(4);
    let cfg = random_generic_config(3, 6, rng);
    let run = || -> Result<Trial, String> {
        let lab = induced_labelling(&cfg, &t).map_err(|e| e.to_string())?;
        let sys = cayley_menger_system(&t, Field::Rational).map_err(|e| e.to_string())?;
        let (edges, names) = edge_variables(&t, "b");
        debug_assert_eq!(names, sys.variables());
        let point: Vec<Scalar> = edges.iter().map(|e| Scalar::rational(lab[e].clone())).collect();
        let nonzero: Vec<usize> = sys
            .relations()
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.evaluate_dense(&point).map(|v| v.is_zero()).unwrap_or(false))
            .map(|(k, _)| k)
            .collect();
        let vanish = Trial::exact(nonzero.is_empty(), || format!("relations {nonzero:?} do not vanish"));
        let local = locally_realisable(&t, &lab, 3, true).map_err(|e| e.to_string())?;
        let menger = menger_realisable(&cfg.squared_distances(), 3);
        Ok(vanish
            .and(Trial::exact(local, || "labelling is not locally realisable".into()))
            .and(Trial::exact(menger.realisable, || format!("menger check failed: {:?}", menger.violation))))
    };
    run().unwrap_or_else(|e| Trial::exact(false, || e))
}

/// Random admissible move after a short random walk from a sphere; checks
/// validity, Euler characteristic and that the inverse undoes it.
fn pachner_trial(rng: &mut TrialRng) -> Trial {
    let mut t = Triangulation::boundary_of_simplex(if rng.below(2) == 0 { 4 } else { 3 });
    let warmup = rng.below(4);
    for step in 0..=warmup {
        let candidates: Vec<_> = MoveKind::for_dimension(t.dimension())
            .flat_map(|k| candidate_loci(&t, k))
            .collect();
        if candidates.is_empty() {
            return Trial::exact(false, || "no admissible move".into());
        }
        let locus = &candidates[rng.below(candidates.len())];
        let out = match apply_move(&t, locus) {
            Ok(o) => o,
            Err(e) => return Trial::exact(false, || format!("{locus:?}: {e}")),
        };
        if step < warmup {
            t = out.result;
            continue;
        }
        let violations = out.result.validate();
        let valid = Trial::exact(violations.is_empty(), || format!("{locus:?}: {violations:?}"));
        let (chi0, chi1) = (t.euler_characteristic(), out.result.euler_characteristic());
        let euler = Trial::exact(chi0 == chi1, || format!("{locus:?}: Euler characteristic {chi0} -> {chi1}"));
        let expected = match out.deleted_vertex {
            // The inverse re-creates the deleted vertex with the last id.
            Some(g) => {
                let last = t.vertex_count() - 1;
                t.relabel(|v| if v == g { last } else if v > g { v - 1 } else { v })
            }
            None => t.clone(),
        };
        let back = apply_move(&out.result, &out.inverse).map(|o| o.result);
        let inverse = Trial::exact(back.as_ref() == Ok(&expected), || {
            format!("{locus:?}: inverse {:?} does not restore the complex", out.inverse)
        });
        return valid.and(euler).and(inverse);
    }
    unreachable!("loop returns on the last step")
}

fn summarize(trials: &[Trial]) -> (usize, Value) {
    let failures: Vec<Value> = trials
        .iter()
        .enumerate()
        .filter(|(_, t)| !t.ok)
        .take(FAILURE_LISTING_CAP)
        .map(|(i, t)| json!({ "trial": i, "detail": t.detail }))
        .collect();
    let failed = trials.iter().filter(|t| !t.ok).count();
    let residuals: Vec<f64> = trials.iter().filter_map(|t| t.residual).collect();
    let max = residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let mut v = json!({
        "trials": trials.len(),
        "passed": trials.len() - failed,
        "failed": failed,
        "failures": failures,
    });
    if !residuals.is_empty() {
        v["max_abs_residual"] = json!(max);
        v["residuals"] = json!(residuals);
    } else {
        v["exact"] = json!(true);
    }
    (failed, v)
}

/// Run one property suite and report per-trial residuals and failures.
pub fn cmd_oracle(args: &OracleArgs, ctx: &RunContext) -> Result<RunReport, CommandError> {
    let rec = Recorder::new(ctx);
    let src = RandomSource::new(args.seed);
    let trials = args.trials.unwrap_or(args.suite.default_trials());
    let idx: Vec<u64> = (0..trials as u64).collect();
    let per = |f: &(dyn Fn(&mut TrialRng) -> Trial + Sync)| -> Vec<Trial> {
        map_ordered(&idx, ctx.threads, |&i| f(&mut src.stream(i)))
    };
    let mut extra = BTreeMap::new();
    let results = match args.suite {
        Suite::Cm => map_ordered(&idx, ctx.threads, |&i| cm_trial(&src, i)),
        Suite::Concyclic => per(&concyclic_trial),
        Suite::Berger => per(&berger_trial),
        Suite::Ptolemy => per(&ptolemy_trial),
        Suite::Quad => per(&quad_trial),
        Suite::Pentagon => {
            let field = args.field.unwrap_or(Field::Prime(101));
            let exhaustive: Vec<Value> = [Field::Binary(1), Field::Binary(2)]
                .into_iter()
                .map(pentagon_exhaustive)
                .collect();
            let bad = exhaustive.iter().any(|e| e["failures"] != 0);
            extra.insert("field", json!(field.tag()));
            extra.insert("exhaustive", json!(exhaustive));
            let mut r = per(&|rng| pentagon_trial(field, rng));
            if bad {
                r.push(Trial::exact(false, || "exhaustive check failed".into()));
            }
            r
        }
        Suite::Hyperbolic => {
            let pairs = map_ordered(&idx, ctx.threads, |&i| hyperbolic_trial(&mut src.stream(i)));
            let generic: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            let min = generic.iter().fold(f64::INFINITY, |m, d| m.min(d.abs()));
            extra.insert("generic_min_abs_det", json!(if min.is_finite() { Some(min) } else { None }));
            extra.insert("generic_dets", json!(generic));
            pairs.into_iter().map(|p| p.0).collect()
        }
        Suite::Spherical => per(&spherical_trial),
        Suite::Invariance => per(&invariance_trial),
        Suite::Pachner => per(&pachner_trial),
    };
    let (failed, mut payload) = summarize(&results);
    payload["suite"] = json!(args.suite.name());
    payload["seed"] = json!(args.seed);
    for (k, v) in extra {
        payload[k] = v;
    }
    let status = if failed == 0 {
        ExitStatus::Pass
    } else {
        ExitStatus::PropertyFailure
    };
    let mut arguments = BTreeMap::new();
    arguments.insert("suite".into(), args.suite.name().to_string());
    arguments.insert("seed".into(), args.seed.to_string());
    arguments.insert("trials".into(), trials.to_string());
    if args.suite == Suite::Pentagon {
        arguments.insert("field".into(), args.field.unwrap_or(Field::Prime(101)).tag());
    }
    Ok(rec.finish("oracle", arguments, &[], status, payload))
}
