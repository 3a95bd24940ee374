use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use manifold_relations::algebra::Field;
use manifold_relations::commands::{
    cmd_check_move, cmd_count, cmd_oracle, cmd_pachner, cmd_relations, parse_fields, CheckMoveArgs,
    CommandError, CountArgs, ExitStatus, LocusSpec, OracleArgs, RelationsArgs, RunContext, RunReport,
    Source, Suite,
};
use manifold_relations::simplicial::MoveKind;
use manifold_relations::variety::{Mode, DEFAULT_BUDGET};

/// Consistency systems on triangulations, Pachner moves and
/// finite-field point counts.
#[derive(Parser)]
#[command(name = "mrel", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Spine, triangulation or relation system JSON file.
    #[arg(required_unless_present = "fixture", conflicts_with = "fixture")]
    input: Option<PathBuf>,
    /// Built-in fixture: 2_1..2_4, S3, S4, tetrahedron, pentachoron.
    #[arg(long)]
    fixture: Option<String>,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Worker threads; 0 picks one per core. Never changes results.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Record elapsed time in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Count,
    Collect,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the relation system of a spine or triangulation.
    Relations {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        field: Option<Field>,
        /// Experimental `ac + bd - xy` sign pattern.
        #[arg(long)]
        signed: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Count solutions over finite fields.
    Count {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "2,4,8")]
        fields: String,
        #[arg(long, value_enum, default_value = "count")]
        mode: ModeArg,
        /// Largest search space `q^variables` allowed per field.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        /// Field the system is built over, before counting.
        #[arg(long)]
        field: Option<Field>,
        #[arg(long)]
        signed: bool,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Apply one Pachner move.
    Pachner {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long = "move")]
        kind: MoveKind,
        /// Vertex list such as `0,1,2`, or an index: a simplex index for
        /// 1-n moves, a vertex id for n-1 moves.
        #[arg(long)]
        locus: LocusSpec,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compare the local systems before and after a move.
    CheckMove {
        #[command(flatten)]
        input: InputArgs,
        /// Omit to compare the star of the locus with itself.
        #[arg(long = "move")]
        kind: Option<MoveKind>,
        #[arg(long)]
        locus: LocusSpec,
        #[arg(long, default_value = "2,4")]
        fields: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a randomized property suite.
    Oracle {
        #[arg(value_parser = clap::value_parser!(Suite))]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Defaults to the suite's standard trial count.
        #[arg(long)]
        trials: Option<usize>,
        /// Field of the pentagon suite.
        #[arg(long)]
        field: Option<Field>,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn read_source(input: &InputArgs) -> Result<Source, CommandError> {
    match (&input.fixture, &input.input) {
        (Some(name), _) => Source::fixture(name),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map(|text| Source::new(path.display().to_string(), text))
            .map_err(|e| CommandError::Input(format!("{}: {e}", path.display()))),
        (None, None) => Err(CommandError::Input("no input given".into())),
    }
}

fn emit(text: &str, output: &OutputArgs) -> Result<(), CommandError> {
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CommandError::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_report(report: &RunReport, output: &OutputArgs) -> Result<ExitStatus, CommandError> {
    emit(&report.to_json(), output)?;
    Ok(report.status)
}

fn context(run: &RunArgs) -> RunContext {
    RunContext {
        threads: run.threads,
        timing: run.timing,
    }
}

fn run(cli: Cli) -> Result<ExitStatus, CommandError> {
    match cli.command {
        Command::Relations {
            input,
            field,
            signed,
            output,
        } => {
            let text = cmd_relations(&read_source(&input)?, &RelationsArgs { field, signed })?;
            emit(&text, &output)?;
            Ok(ExitStatus::Pass)
        }
        Command::Count {
            input,
            fields,
            mode,
            budget,
            field,
            signed,
            run,
            output,
        } => {
            let args = CountArgs {
                fields: parse_fields(&fields)?,
                mode: match mode {
                    ModeArg::Count => Mode::Count,
                    ModeArg::Collect => Mode::Collect,
                },
                budget,
                relations: RelationsArgs { field, signed },
            };
            emit_report(&cmd_count(&read_source(&input)?, &args, &context(&run))?, &output)
        }
        Command::Pachner {
            input,
            kind,
            locus,
            output,
        } => {
            emit(&cmd_pachner(&read_source(&input)?, kind, &locus)?, &output)?;
            Ok(ExitStatus::Pass)
        }
        Command::CheckMove {
            input,
            kind,
            locus,
            fields,
            budget,
            run,
            output,
        } => {
            let args = CheckMoveArgs {
                kind,
                locus,
                fields: parse_fields(&fields)?,
                budget,
            };
            emit_report(&cmd_check_move(&read_source(&input)?, &args, &context(&run))?, &output)
        }
        Command::Oracle {
            suite,
            seed,
            trials,
            field,
            run,
            output,
        } => {
            let args = OracleArgs {
                suite,
                seed,
                trials,
                field,
            };
            emit_report(&cmd_oracle(&args, &context(&run))?, &output)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = run(cli).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.status()
    });
    if status == ExitStatus::PropertyFailure {
        eprintln!("error: property check failed; see the report");
    }
    ExitCode::from(status.code() as u8)
}
