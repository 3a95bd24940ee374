//! Acceptance run: one PASS/FAIL line per criterion, with the tolerances and
//! time limits pinned below. Exits nonzero when any criterion fails.

use std::time::{Duration, Instant};

use manifold_relations::algebra::Field;
use manifold_relations::commands::{
    cmd_check_move, cmd_count, cmd_oracle, cmd_relations, CheckMoveArgs, CountArgs, ExitStatus, LocusSpec,
    OracleArgs, RelationsArgs, RunContext, RunReport, Source, Suite,
};
use manifold_relations::relations::RelationSystem;
use manifold_relations::simplicial::{apply_move, candidate_loci, MoveKind, MoveLocus, Triangulation};
use manifold_relations::variety::DEFAULT_BUDGET;

const SEED: u64 = 0;
const TABLE: [(&str, &str); 4] = [
    ("2_1", "x^2 + z^2 + y*z, y^2 + z^2 + x*z"),
    ("2_2", "x^2 + y^2 + y*z, x^2 + z^2 + x*y"),
    ("2_3", "x^2 + y^2 + y*z, x^2 + z^2 + y*z"),
    ("2_4", "x^2 + y^2 + z^2"),
];
const EXPECTED_DIMENSIONS: [i64; 4] = [1, 1, 1, 2];
/// Point counts of the 1-5 comparison, recorded from a full run. Before:
/// the pentachoron's ten variables; after: the fifteen of its image.
const FIBER_SNAPSHOT: [(u32, u128, u128); 2] = [(2, 576, 4992), (4, 274_432, 17_809_408)];
const PREDICTED_FIBER: i64 = 3;

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Duration,
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn ctx(threads: usize) -> RunContext {
    RunContext { threads, timing: false }
}

fn oracle(suite: Suite, trials: usize, field: Option<Field>, threads: usize) -> RunReport {
    let args = OracleArgs {
        suite,
        seed: SEED,
        trials: Some(trials),
        field,
    };
    cmd_oracle(&args, &ctx(threads)).expect("oracle suites take no input")
}

fn suite_outcome(r: &RunReport) -> Outcome {
    let p = &r.payload;
    let mut line = format!("{} {}/{} trials", p["suite"].as_str().unwrap_or("?"), p["passed"], p["trials"]);
    if let Some(m) = p["max_abs_residual"].as_f64() {
        line.push_str(&format!(", max |residual| {m:.3e}"));
    }
    if r.status == ExitStatus::Pass {
        Ok(line)
    } else {
        Err(format!("{line}; first failures {}", p["failures"]))
    }
}

fn all_ok(parts: Vec<Outcome>) -> Outcome {
    let ok = parts.iter().all(|p| p.is_ok());
    let text = parts
        .into_iter()
        .map(|p| p.unwrap_or_else(|e| format!("FAILED {e}")))
        .collect::<Vec<_>>()
        .join("; ");
    if ok {
        Ok(text)
    } else {
        Err(text)
    }
}

fn c1_table() -> Outcome {
    let parts = TABLE
        .iter()
        .map(|(name, want)| {
            let text = cmd_relations(&Source::fixture(name).unwrap(), &RelationsArgs::default())
                .map_err(|e| e.to_string())?;
            let got = RelationSystem::from_json(&text).map_err(|e| e.to_string())?.relation_texts().join(", ");
            if got == *want {
                Ok(format!("{name} ok"))
            } else {
                Err(format!("{name}: got {got:?}, want {want:?}"))
            }
        })
        .collect();
    all_ok(parts)
}

fn counts(r: &RunReport) -> Vec<String> {
    r.payload["counts"]
        .as_array()
        .map(|a| a.iter().map(|c| c["count"].as_str().unwrap_or("?").to_string()).collect())
        .unwrap_or_default()
}

fn c2_dimensions() -> Outcome {
    let parts = TABLE
        .iter()
        .zip(EXPECTED_DIMENSIONS)
        .map(|((name, _), want)| {
            let r = cmd_count(&Source::fixture(name).unwrap(), &CountArgs::default(), &ctx(0))
                .map_err(|e| e.to_string())?;
            let c = counts(&r);
            let dim = &r.payload["dimension"];
            let got = dim["dimension"].as_i64();
            let mut line = format!("{name} counts ({}) dim {}", c.join(", "), dim["dimension"]);
            if got.is_none() {
                line.push_str(&format!(" [{}]", dim["diagnostic"].as_str().unwrap_or("")));
            }
            let exact = *name != "2_4" || c == ["4", "16", "64"];
            if got == Some(want) && exact {
                Ok(line)
            } else {
                Err(format!("{line}, want dim {want}"))
            }
        })
        .collect();
    all_ok(parts)
}

fn c3_pentagon(threads: usize) -> RunReport {
    oracle(Suite::Pentagon, 10_000, Some(Field::Prime(101)), threads)
}

fn c3_outcome(r: &RunReport) -> Outcome {
    let exhaustive = r.payload["exhaustive"].as_array().cloned().unwrap_or_default();
    let ex: Vec<String> = exhaustive
        .iter()
        .map(|e| format!("{} {} tuples {} failures", e["field"].as_str().unwrap_or("?"), e["tuples"], e["failures"]))
        .collect();
    suite_outcome(r).map(|s| format!("{s}; exhaustive {}", ex.join(", ")))
}

/// Local flip loci on the 1-5 subdivision of the boundary of the 5-simplex:
/// a 2-4 locus, and a 3-3 locus after applying it.
fn flip_fixtures() -> [(Triangulation, MoveLocus); 2] {
    let s4 = Triangulation::boundary_of_simplex(4);
    let t = apply_move(&s4, &MoveLocus::new(MoveKind::OneFive, vec![0, 1, 2, 3, 4])).unwrap().result;
    let two_four = candidate_loci(&t, MoveKind::TwoFour)
        .into_iter()
        .next()
        .expect("2-4 locus");
    let t2 = apply_move(&t, &two_four).unwrap().result;
    let three_three = candidate_loci(&t2, MoveKind::ThreeThree)
        .into_iter()
        .next()
        .expect("3-3 locus");
    [(t, two_four), (t2, three_three)]
}

fn c6_reports(threads: usize) -> Vec<RunReport> {
    flip_fixtures()
        .into_iter()
        .map(|(t, locus)| {
            let args = CheckMoveArgs {
                kind: Some(locus.kind),
                locus: LocusSpec::Vertices(locus.face.clone()),
                fields: vec![Field::Binary(1)],
                budget: DEFAULT_BUDGET,
            };
            cmd_check_move(&Source::new(format!("{}-local", locus.kind), t.to_json()), &args, &ctx(threads))
                .expect("check-move runs")
        })
        .collect()
}

fn c6_outcome(reports: &[RunReport], reruns: &[Vec<RunReport>]) -> Outcome {
    let mut parts = Vec::new();
    for r in reports {
        let p = &r.payload;
        let vars = p["shared_variables"].as_array().map_or(0, |v| v.len());
        let cmp = &p["comparison"];
        parts.push(format!(
            "{} on {} vars: counts {} vs {}, only_before {} only_after {}, digest {}",
            p["move"].as_str().unwrap_or("?"),
            vars,
            cmp["counts_a"][0]["count"].as_str().unwrap_or("?"),
            cmp["counts_b"][0]["count"].as_str().unwrap_or("?"),
            p["diff"]["only_a"],
            p["diff"]["only_b"],
            p["diff"]["digest"].as_str().unwrap_or("?").chars().take(12).collect::<String>()
        ));
        if vars != 15 {
            return Err(format!("{}: expected 15 variables", parts.join("; ")));
        }
    }
    let stable = reruns
        .iter()
        .all(|rs| rs.iter().zip(reports).all(|(a, b)| a.to_json() == b.to_json()));
    if stable {
        Ok(format!("{}; byte-stable across reruns and threads", parts.join("; ")))
    } else {
        Err(format!("{}; reports differ between runs", parts.join("; ")))
    }
}

fn c7_report(threads: usize) -> RunReport {
    let args = CheckMoveArgs {
        kind: Some(MoveKind::OneFive),
        locus: LocusSpec::Index(0),
        fields: vec![Field::Binary(1), Field::Binary(2)],
        budget: DEFAULT_BUDGET,
    };
    cmd_check_move(&Source::fixture("pentachoron").unwrap(), &args, &ctx(threads)).expect("check-move runs")
}

fn c7_outcome(r: &RunReport) -> Outcome {
    let f = &r.payload["fiber"];
    let count = |side: &str, i: usize| -> Option<u128> { f[side][i]["count"].as_str()?.parse().ok() };
    let observed: Vec<(u32, Option<u128>, Option<u128>)> = (0..2)
        .map(|i| {
            (
                f["before_counts"][i]["q"].as_u64().unwrap_or(0) as u32,
                count("before_counts", i),
                count("after_counts", i),
            )
        })
        .collect();
    let snapshot_ok = observed
        .iter()
        .zip(FIBER_SNAPSHOT)
        .all(|(o, s)| o.0 == s.0 && o.1 == Some(s.1) && o.2 == Some(s.2));
    let raw: Vec<String> = f["raw_deltas"]
        .as_array()
        .map(|a| a.iter().map(|d| format!("{:.2}", d.as_f64().unwrap_or(f64::NAN))).collect())
        .unwrap_or_default();
    let before = f["before_dimension"]["exponents"][0]["raw"].as_f64().unwrap_or(f64::NAN);
    let after = f["after_dimension"]["exponents"][0]["raw"].as_f64().unwrap_or(f64::NAN);
    let delta = f["delta"].as_i64();
    let verdict = match delta {
        Some(d) if d == PREDICTED_FIBER => "matches predicted +3".to_string(),
        Some(d) => format!("MISMATCH with predicted +3 (observed {d:+})"),
        None => "no integer delta".to_string(),
    };
    let line = format!(
        "exponents {before:.2} -> {after:.2}, raw delta {}, rounded {}, {verdict}; F4 run long={}",
        raw.join(", "),
        f["delta"],
        r.payload["comparison"]["counts_b"][1]["long"]
    );
    // The criterion asks for the delta to be recorded and compared; a
    // mismatch is reported in the line, while drift from the recorded
    // counts is a failure.
    if snapshot_ok && delta.is_some() {
        Ok(line)
    } else {
        Err(format!("{line}; counts {observed:?} differ from snapshot {FIBER_SNAPSHOT:?}"))
    }
}

fn c8_reports(threads: usize) -> Vec<RunReport> {
    [
        Suite::Concyclic,
        Suite::Berger,
        Suite::Hyperbolic,
        Suite::Spherical,
        Suite::Ptolemy,
        Suite::Quad,
    ]
    .into_iter()
    .map(|s| oracle(s, 1000, None, threads))
    .collect()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

fn report_line(c: &Criterion, outcome: Outcome, elapsed: Duration) -> bool {
    let in_time = elapsed <= c.limit;
    let (ok, text) = match outcome {
        Ok(t) => (in_time, t),
        Err(t) => (false, t),
    };
    let time = format!("{:.2}s/{}s", elapsed.as_secs_f64(), c.limit.as_secs());
    let slow = if in_time { "" } else { " TOO SLOW" };
    println!(
        "[{}] {:>2} {} ({time}{slow}): {text}",
        if ok { "PASS" } else { "FAIL" },
        c.id,
        c.title
    );
    ok
}

fn main() {
    println!("acceptance run, seed {SEED}");
    let mut results = Vec::new();
    let mut check = |id, title, limit, outcome, elapsed| {
        results.push(report_line(&Criterion { id, title, limit }, outcome, elapsed));
    };

    let (o, t) = timed(c1_table);
    check(1, "complexity-2 table", secs(1), o, t);

    let (o, t) = timed(c2_dimensions);
    check(2, "dimension estimates of the complexity-2 fixtures", secs(1), o, t);

    let (r3, t) = timed(|| c3_pentagon(0));
    check(3, "pentagon relations", secs(10), c3_outcome(&r3), t);

    let (r4, t) = timed(|| oracle(Suite::Cm, 1000, None, 0));
    check(4, "Cayley-Menger vanishing and sign", secs(30), suite_outcome(&r4), t);

    let (r5, t) = timed(|| oracle(Suite::Invariance, 200, None, 0));
    check(5, "induced labellings solve the pentachoron relations", secs(60), suite_outcome(&r5), t);

    let (r6, t) = timed(|| c6_reports(0));
    let reruns = vec![c6_reports(1), c6_reports(4)];
    check(6, "F2 exhaustive 2-4 and 3-3 comparison", secs(5), c6_outcome(&r6, &reruns), t);

    let (r7, t) = timed(|| c7_report(0));
    check(7, "1-5 fiber dimension", secs(600), c7_outcome(&r7), t);

    let (r8, t) = timed(|| c8_reports(0));
    check(8, "four-point and quadrilateral suites", secs(60), all_ok(r8.iter().map(suite_outcome).collect()), t);

    let (r9, t) = timed(|| oracle(Suite::Pachner, 500, None, 0));
    check(9, "Pachner engine properties", secs(10), suite_outcome(&r9), t);

    // Rerun every randomized criterion sequentially and on four workers.
    let (o, t) = timed(|| {
        let base: Vec<&RunReport> = [&r3, &r4, &r5, &r9].into_iter().chain(&r8).collect();
        let mut mismatched = Vec::new();
        for threads in [1, 4] {
            let again: Vec<RunReport> = [
                c3_pentagon(threads),
                oracle(Suite::Cm, 1000, None, threads),
                oracle(Suite::Invariance, 200, None, threads),
                oracle(Suite::Pachner, 500, None, threads),
            ]
            .into_iter()
            .chain(c8_reports(threads))
            .collect();
            for (a, b) in base.iter().zip(&again) {
                if a.to_json() != b.to_json() {
                    mismatched.push(format!("{} at {threads} threads", a.payload["suite"]));
                }
            }
        }
        let again7 = c7_report(4);
        if again7.to_json() != r7.to_json() {
            mismatched.push("1-5 check-move at 4 threads".into());
        }
        if mismatched.is_empty() {
            Ok(format!("{} reports identical at 1 and 4 threads", base.len() * 2 + 1))
        } else {
            Err(format!("differing reports: {}", mismatched.join(", ")))
        }
    });
    check(10, "determinism across thread counts", secs(900), o, t);

    let failed = results.iter().filter(|ok| !**ok).count();
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
