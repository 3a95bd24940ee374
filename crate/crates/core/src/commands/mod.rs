//! The operations behind the `mrel` binary, kept in the library so they can
//! be driven and compared in tests without spawning processes.
//!
//! Every command is a pure function of its input texts and flags. Reports
//! are serialized with sorted keys, and elapsed time is only recorded when
//! asked for, so two runs with equal inputs produce identical bytes.

mod suites;

use std::collections::BTreeMap;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{AlgebraError, Field};
use crate::oracle::OracleError;
use crate::relations::{
    cayley_menger_system, edge_variables, fixtures, ptolemy_system_from_3d, ptolemy_system_from_spine,
    RelationError, RelationSystem, SpinePresentation,
};
use crate::simplicial::{apply_move, MoveKind, MoveLocus, SimplicialError, Simplex, Triangulation};
use crate::variety::{
    collect_solutions, count_solutions, dim_estimate, solution_diff, stable_equiv_compare, FieldCount,
    Mode, Options, VarietyError,
};

pub use suites::{cmd_oracle, OracleArgs, Suite};

pub const TOOL: &str = concat!("mrel ", env!("CARGO_PKG_VERSION"));

/// Process exit status of a command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExitStatus {
    Pass,
    PropertyFailure,
    InputError,
    BudgetExceeded,
    Inadmissible,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Pass => 0,
            ExitStatus::PropertyFailure => 1,
            ExitStatus::InputError => 2,
            ExitStatus::BudgetExceeded => 3,
            ExitStatus::Inadmissible => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CommandError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Inadmissible(String),
}

impl CommandError {
    pub fn status(&self) -> ExitStatus {
        match self {
            CommandError::Input(_) => ExitStatus::InputError,
            CommandError::Budget(_) => ExitStatus::BudgetExceeded,
            CommandError::Inadmissible(_) => ExitStatus::Inadmissible,
        }
    }
}

impl From<SimplicialError> for CommandError {
    fn from(e: SimplicialError) -> Self {
        match e {
            SimplicialError::Inadmissible { .. } | SimplicialError::LocusMismatch { .. } => {
                CommandError::Inadmissible(e.to_string())
            }
            _ => CommandError::Input(e.to_string()),
        }
    }
}

impl From<VarietyError> for CommandError {
    fn from(e: VarietyError) -> Self {
        match e {
            VarietyError::BudgetExceeded { .. } => CommandError::Budget(e.to_string()),
            _ => CommandError::Input(e.to_string()),
        }
    }
}

macro_rules! input_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CommandError {
            fn from(e: $t) -> Self {
                CommandError::Input(e.to_string())
            }
        }
    )*};
}
input_error!(RelationError, AlgebraError, OracleError);

/// Named input text: a file's contents or a built-in fixture.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Source {
    pub name: String,
    pub text: String,
}

impl Source {
    pub fn new(name: impl Into<String>, text: impl Into<String>) -> Self {
        Source {
            name: name.into(),
            text: text.into(),
        }
    }

    /// Spine fixtures `2_1`..`2_4` or triangulation fixtures `S3`, `S4`,
    /// `tetrahedron`, `pentachoron`.
    pub fn fixture(name: &str) -> Result<Source, CommandError> {
        let text = if let Some(s) = fixtures::spine(name) {
            s.to_json()
        } else if let Some(t) = fixtures::triangulation(name) {
            t.to_json()
        } else {
            return Err(CommandError::Input(format!(
                "unknown fixture {name:?}; known: {}, {}",
                fixtures::SPINES.join(", "),
                fixtures::TRIANGULATIONS.join(", ")
            )));
        };
        Ok(Source::new(format!("fixture:{name}"), text))
    }

    pub fn digest(&self) -> String {
        crate::variety::hex_digest(self.text.as_bytes())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub name: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

/// Machine-readable record of one command run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub command: String,
    /// Flags that can affect the result. Worker count is left out because
    /// it never does.
    pub arguments: BTreeMap<String, String>,
    pub inputs: Vec<InputDigest>,
    /// Present only when requested, so that reports stay reproducible.
    pub timing: Option<Timing>,
    pub status: ExitStatus,
    pub payload: Value,
}

impl RunReport {
    /// Pretty JSON with sorted keys.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("serializable");
        let mut text = serde_json::to_string_pretty(&value).expect("serializable");
        text.push('\n');
        text
    }
}

/// Settings shared by all commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunContext {
    pub threads: usize,
    pub timing: bool,
}

struct Recorder {
    start: Instant,
    timing: bool,
}

impl Recorder {
    fn new(ctx: &RunContext) -> Self {
        Recorder {
            start: Instant::now(),
            timing: ctx.timing,
        }
    }

    fn finish(
        self,
        command: &str,
        arguments: BTreeMap<String, String>,
        inputs: &[&Source],
        status: ExitStatus,
        payload: Value,
    ) -> RunReport {
        RunReport {
            tool: TOOL,
            command: command.to_string(),
            arguments,
            inputs: inputs
                .iter()
                .map(|s| InputDigest {
                    name: s.name.clone(),
                    sha256: s.digest(),
                })
                .collect(),
            timing: self.timing.then(|| Timing {
                elapsed_ms: self.start.elapsed().as_secs_f64() * 1e3,
            }),
            status,
            payload,
        }
    }
}

/// Parsed input file.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Spine(SpinePresentation),
    Triangulation(Triangulation),
    System(RelationSystem),
}

fn json_error(src: &Source, e: serde_json::Error) -> CommandError {
    // serde's message already ends with the line and column.
    CommandError::Input(format!("{}: {e}", src.name))
}

/// Recognise a spine, triangulation or relation system by its keys.
pub fn parse_document(src: &Source) -> Result<Document, CommandError> {
    let value: Value = serde_json::from_str(&src.text).map_err(|e| json_error(src, e))?;
    let has = |k: &str| value.get(k).is_some();
    let context = |e: String| CommandError::Input(format!("{}: {e}", src.name));
    if has("butterflies") {
        let s: SpinePresentation = serde_json::from_value(value).map_err(|e| json_error(src, e))?;
        Ok(Document::Spine(s))
    } else if has("simplices") {
        Triangulation::from_json(&src.text)
            .map(Document::Triangulation)
            .map_err(|e| context(e.to_string()))
    } else if has("relations") {
        RelationSystem::from_json(&src.text)
            .map(Document::System)
            .map_err(|e| context(e.to_string()))
    } else {
        Err(context(
            "expected a spine (\"butterflies\"), triangulation (\"simplices\") or system (\"relations\")".into(),
        ))
    }
}

fn parse_triangulation(src: &Source) -> Result<Triangulation, CommandError> {
    match parse_document(src)? {
        Document::Triangulation(t) => Ok(t),
        _ => Err(CommandError::Input(format!("{}: expected a triangulation", src.name))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RelationsArgs {
    /// Defaults to `F2` for Ptolemy systems and `Q` for Cayley-Menger ones.
    pub field: Option<Field>,
    /// Use the experimental `+, +, -` Ptolemy sign pattern.
    pub signed: bool,
}

/// The relation system attached to a spine, 3D or 4D triangulation. A
/// system file passes through, optionally re-read over another field.
pub fn build_system(doc: &Document, args: &RelationsArgs) -> Result<RelationSystem, CommandError> {
    let f2 = Field::Binary(1);
    Ok(match doc {
        Document::Spine(s) => ptolemy_system_from_spine(s, args.field.unwrap_or(f2), args.signed)?,
        Document::Triangulation(t) if t.dimension() == 3 => {
            ptolemy_system_from_3d(t, args.field.unwrap_or(f2), args.signed)?
        }
        Document::Triangulation(t) => cayley_menger_system(t, args.field.unwrap_or(Field::Rational))?,
        Document::System(s) => match args.field {
            Some(f) => s.embed(f)?,
            None => s.clone(),
        },
    })
}

/// Canonical system JSON for a spine or triangulation.
pub fn cmd_relations(src: &Source, args: &RelationsArgs) -> Result<String, CommandError> {
    let doc = parse_document(src)?;
    if matches!(doc, Document::System(_)) {
        return Err(CommandError::Input(format!(
            "{}: expected a spine or triangulation",
            src.name
        )));
    }
    let mut text = build_system(&doc, args)?.to_json();
    text.push('\n');
    Ok(text)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountArgs {
    pub fields: Vec<Field>,
    pub mode: Mode,
    pub budget: u128,
    pub relations: RelationsArgs,
}

impl Default for CountArgs {
    fn default() -> Self {
        CountArgs {
            fields: vec![Field::Binary(1), Field::Binary(2), Field::Binary(3)],
            mode: Mode::Count,
            budget: crate::variety::DEFAULT_BUDGET,
            relations: RelationsArgs::default(),
        }
    }
}

/// Read a comma-separated field list. Bare numbers are field orders, so
/// `2,4,8` means `F2,F4,F8`; tags such as `Fp:101` or `Q` are also accepted.
pub fn parse_fields(text: &str) -> Result<Vec<Field>, CommandError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| match s.parse::<u32>() {
            Ok(q) => Field::with_order(q),
            Err(_) => s.parse::<Field>(),
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(CommandError::from)
        .and_then(|v| {
            if v.is_empty() {
                Err(CommandError::Input("empty field list".into()))
            } else {
                Ok(v)
            }
        })
}

fn field_list(fields: &[Field]) -> String {
    fields.iter().map(|f| f.tag()).collect::<Vec<_>>().join(",")
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Count => "count",
        Mode::Collect => "collect",
    }
}

fn system_summary(sys: &RelationSystem) -> Value {
    json!({
        "field": sys.field().tag(),
        "variables": sys.variables(),
        "relations": sys.relation_texts(),
    })
}

fn counts_of(report: &[FieldCount]) -> Vec<(u32, u128)> {
    report.iter().map(|c| (c.q, c.count)).collect()
}

/// Exact counts (or solution lists) over each field, with the dimension
/// estimate.
pub fn cmd_count(src: &Source, args: &CountArgs, ctx: &RunContext) -> Result<RunReport, CommandError> {
    let rec = Recorder::new(ctx);
    let sys = build_system(&parse_document(src)?, &args.relations)?;
    let opts = Options {
        budget: args.budget,
        threads: ctx.threads,
        ..Options::default()
    };
    let counts = args
        .fields
        .iter()
        .map(|&f| count_solutions(&sys, f, &opts))
        .collect::<Result<Vec<_>, _>>()?;
    let mut payload = json!({
        "system": system_summary(&sys),
        "counts": counts,
        "dimension": dim_estimate(&counts_of(&counts)),
    });
    if args.mode == Mode::Collect {
        let sets = args
            .fields
            .iter()
            .map(|&f| collect_solutions(&sys, f, &opts))
            .collect::<Result<Vec<_>, _>>()?;
        payload["solutions"] = serde_json::to_value(sets).expect("serializable");
    }
    let mut arguments = BTreeMap::new();
    arguments.insert("fields".into(), field_list(&args.fields));
    arguments.insert("mode".into(), mode_name(args.mode).into());
    arguments.insert("budget".into(), args.budget.to_string());
    if let Some(f) = args.relations.field {
        arguments.insert("field".into(), f.tag());
    }
    Ok(rec.finish("count", arguments, &[src], ExitStatus::Pass, payload))
}

/// How a move locus is given on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocusSpec {
    /// Index into the simplex list, for moves that act on one top simplex.
    Index(usize),
    Vertices(Simplex),
}

impl FromStr for LocusSpec {
    type Err = CommandError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CommandError::Input(format!("cannot read locus {s:?}; use an index or a vertex list like 0,1,2"));
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let nums = parts
            .iter()
            .map(|p| p.parse::<u32>().map_err(|_| bad()))
            .collect::<Result<Vec<u32>, _>>()?;
        if nums.len() == 1 && !s.contains(',') {
            Ok(LocusSpec::Index(nums[0] as usize))
        } else {
            Ok(LocusSpec::Vertices(nums))
        }
    }
}

impl std::fmt::Display for LocusSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LocusSpec::Index(i) => write!(f, "{i}"),
            LocusSpec::Vertices(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", parts.join(","))
            }
        }
    }
}

fn resolve_locus(t: &Triangulation, kind: MoveKind, spec: &LocusSpec) -> Result<MoveLocus, CommandError> {
    let face = match spec {
        LocusSpec::Vertices(v) => v.clone(),
        LocusSpec::Index(i) if kind.removed() == 1 => t
            .simplices()
            .get(*i)
            .cloned()
            .ok_or_else(|| CommandError::Input(format!("no simplex with index {i}")))?,
        LocusSpec::Index(v) if kind.locus_size() == 1 => vec![*v as u32],
        LocusSpec::Index(_) => {
            return Err(CommandError::Input(format!(
                "a {kind} move needs its locus as a vertex list"
            )))
        }
    };
    Ok(MoveLocus::new(kind, face))
}

/// Apply one move and return the canonical triangulation JSON.
pub fn cmd_pachner(src: &Source, kind: MoveKind, locus: &LocusSpec) -> Result<String, CommandError> {
    let t = parse_triangulation(src)?;
    let locus = resolve_locus(&t, kind, locus)?;
    let mut text = apply_move(&t, &locus)?.result.to_json();
    text.push('\n');
    Ok(text)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckMoveArgs {
    /// `None` compares the star of the locus with itself.
    pub kind: Option<MoveKind>,
    pub locus: LocusSpec,
    pub fields: Vec<Field>,
    pub budget: u128,
}

/// Fiber dimension the move is expected to add, if any is predicted: a
/// bijection for the flips that keep the vertex set, three free
/// coordinates for the new vertex of a 1-5 move.
fn predicted_delta(kind: Option<MoveKind>) -> Option<i64> {
    match kind {
        None => Some(0),
        Some(MoveKind::TwoFour | MoveKind::ThreeThree | MoveKind::FourTwo) => Some(0),
        Some(MoveKind::OneFive) => Some(3),
        Some(MoveKind::FiveOne) => Some(-3),
        Some(_) => None,
    }
}

struct LocalComplexes {
    before: Vec<Simplex>,
    after: Vec<Simplex>,
    vertices: u32,
    inverse: Option<MoveLocus>,
}

fn local_complexes(t: &Triangulation, kind: Option<MoveKind>, spec: &LocusSpec) -> Result<LocalComplexes, CommandError> {
    let Some(kind) = kind else {
        let face = match spec {
            LocusSpec::Vertices(v) => v.clone(),
            LocusSpec::Index(i) => t
                .simplices()
                .get(*i)
                .cloned()
                .ok_or_else(|| CommandError::Input(format!("no simplex with index {i}")))?,
        };
        let mut face = face;
        face.sort_unstable();
        let star: Vec<Simplex> = t.star(&face).into_iter().cloned().collect();
        if star.is_empty() {
            return Err(CommandError::Inadmissible(format!("{face:?} is not a face")));
        }
        return Ok(LocalComplexes {
            before: star.clone(),
            after: star,
            vertices: t.vertex_count(),
            inverse: None,
        });
    };
    let locus = resolve_locus(t, kind, spec)?;
    let outcome = apply_move(t, &locus)?;
    // Undo the id shift of a vertex-deleting move so both sides share ids.
    let after = match outcome.deleted_vertex {
        Some(g) => outcome
            .added
            .iter()
            .map(|s| s.iter().map(|&v| if v >= g { v + 1 } else { v }).collect())
            .collect(),
        None => outcome.added.clone(),
    };
    Ok(LocalComplexes {
        before: outcome.removed.clone(),
        after,
        vertices: t.vertex_count().max(outcome.result.vertex_count()),
        inverse: Some(outcome.inverse),
    })
}

fn local_system(
    dimension: usize,
    vertices: u32,
    simplices: &[Simplex],
    universe: &[String],
) -> Result<(RelationSystem, RelationSystem), CommandError> {
    let t = Triangulation::new(dimension, vertices, simplices.to_vec())?;
    let own = build_system(&Document::Triangulation(t), &RelationsArgs::default())?;
    let wide = own.over_variables(universe)?;
    Ok((own, wide))
}

/// Compare the relation systems of the local complexes before and after a
/// move: point counts over each field on the shared variable universe,
/// growth exponents on each side's own variables, and for the first field
/// the exact symmetric difference of the solution sets.
pub fn cmd_check_move(src: &Source, args: &CheckMoveArgs, ctx: &RunContext) -> Result<RunReport, CommandError> {
    let rec = Recorder::new(ctx);
    let t = parse_triangulation(src)?;
    let local = local_complexes(&t, args.kind, &args.locus)?;
    let all: Vec<Simplex> = local.before.iter().chain(&local.after).cloned().collect();
    let union = Triangulation::new(t.dimension(), local.vertices, all)?;
    let (_, universe) = edge_variables(&union, if t.dimension() == 4 { "b" } else { "a" });
    let (before_own, before) = local_system(t.dimension(), local.vertices, &local.before, &universe)?;
    let (after_own, after) = local_system(t.dimension(), local.vertices, &local.after, &universe)?;
    let opts = Options {
        budget: args.budget,
        threads: ctx.threads,
        ..Options::default()
    };
    let comparison = stable_equiv_compare(&before, &after, &args.fields, &opts)?;

    // Counts on a side's own variables differ from the shared ones by the
    // exact factor q^(unused variables).
    let own_counts = |wide: &[FieldCount], own: &RelationSystem| -> Vec<(u32, u128)> {
        let unused = universe.len() - own.variables().len();
        wide.iter()
            .map(|c| (c.q, c.count / (c.q as u128).pow(unused as u32)))
            .collect()
    };
    let before_counts = own_counts(&comparison.counts_a, &before_own);
    let after_counts = own_counts(&comparison.counts_b, &after_own);
    let dim_before = dim_estimate(&before_counts);
    let dim_after = dim_estimate(&after_counts);
    let raw_deltas: Vec<f64> = dim_before
        .exponents
        .iter()
        .zip(&dim_after.exponents)
        .map(|(a, b)| b.raw - a.raw)
        .collect();
    let delta = raw_deltas.first().map(|d| d.round() as i64);
    let delta_consistent = delta.is_some_and(|k| {
        raw_deltas
            .iter()
            .all(|d| (d - k as f64).abs() <= crate::variety::EXPONENT_TOLERANCE)
    });
    let predicted = predicted_delta(args.kind);
    let fiber = json!({
        "before_counts": before_counts.iter().map(|c| json!({"q": c.0, "count": c.1.to_string()})).collect::<Vec<_>>(),
        "after_counts": after_counts.iter().map(|c| json!({"q": c.0, "count": c.1.to_string()})).collect::<Vec<_>>(),
        "before_dimension": dim_before,
        "after_dimension": dim_after,
        "raw_deltas": raw_deltas,
        "delta": delta,
        "delta_consistent": delta_consistent,
        "predicted_delta": predicted,
        "matches_prediction": match (delta, predicted) {
            (Some(d), Some(p)) if delta_consistent => Some(d == p),
            _ => None,
        },
    });

    let diff = match args.fields.first() {
        Some(&f) => {
            let a = collect_solutions(&before, f, &opts);
            let b = collect_solutions(&after, f, &opts);
            match (a, b) {
                (Ok(a), Ok(b)) if a.assignments.is_some() && b.assignments.is_some() => {
                    serde_json::to_value(solution_diff(&a, &b)?).expect("serializable")
                }
                (Err(e), _) | (_, Err(e)) => json!({ "skipped": e.to_string() }),
                _ => json!({ "skipped": "solution sets too large to materialize" }),
            }
        }
        None => Value::Null,
    };

    let side = |simplices: &[Simplex], own: &RelationSystem| {
        json!({
            "simplices": simplices,
            "variables": own.variables().len(),
            "relations": own.relations().len(),
        })
    };
    let payload = json!({
        "move": args.kind.map(|k| k.to_string()).unwrap_or_else(|| "identity".into()),
        "inverse": local.inverse,
        "before": side(&local.before, &before_own),
        "after": side(&local.after, &after_own),
        "shared_variables": universe,
        "comparison": comparison,
        "fiber": fiber,
        "diff": diff,
    });
    let mut arguments = BTreeMap::new();
    arguments.insert(
        "move".into(),
        args.kind.map(|k| k.to_string()).unwrap_or_else(|| "identity".into()),
    );
    arguments.insert("locus".into(), args.locus.to_string());
    arguments.insert("fields".into(), field_list(&args.fields));
    arguments.insert("budget".into(), args.budget.to_string());
    Ok(rec.finish("check-move", arguments, &[src], ExitStatus::Pass, payload))
}
