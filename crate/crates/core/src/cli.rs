//! The `linktrav` command line: `run`, `compare` and `explain`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::guidance::{
    parse_policy, parse_structure_registry, ContentPolicy, DefaultMode, LinkingStructureRegistry,
};
use crate::query::{parse_query, Query, Solutions};
use crate::rdf::Iri;
use crate::report::{explain_doc, explain_row, subtree_counts, Comparison, Mode, RunReport};
use crate::traversal::{
    evaluate_augmented, evaluate_unguided, Semantics, TraversalConfig, TraversalError, TraversalRun,
    DEFAULT_MAX_DOCUMENTS, DEFAULT_WORKERS,
};
use crate::webfetch::{live_http_source, load_fixture_web, DocumentSource};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_CAPPED: u8 = 2;
pub const EXIT_INPUT: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "linktrav", version, about = "Link-traversal query processing over fixture or live webs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Traverse from the seeds and evaluate the query.
    Run(RunArgs),
    /// Run unguided and guided traversal and report the differences.
    Compare(CompareArgs),
    /// Explain why a document was (not) fetched or where a result row came from.
    Explain(ExplainArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Unguided,
    Guided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[allow(clippy::enum_variant_names)]
enum SemanticsArg {
    #[value(name = "c-none")]
    CNone,
    #[value(name = "c-all")]
    CAll,
    #[value(name = "c-match")]
    CMatch,
}

impl From<SemanticsArg> for Semantics {
    fn from(s: SemanticsArg) -> Self {
        match s {
            SemanticsArg::CNone => Semantics::CNone,
            SemanticsArg::CAll => Semantics::CAll,
            SemanticsArg::CMatch => Semantics::CMatch,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Tsv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StructureDefault {
    Permissive,
    Restrictive,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("web").required(true).args(["fixtures", "live"]))]
struct Inputs {
    /// Query file.
    #[arg(long, value_name = "FILE")]
    query: PathBuf,
    /// Seed document or entity IRI; repeatable.
    #[arg(long = "seed", value_name = "IRI", required = true, value_parser = parse_iri)]
    seeds: Vec<Iri>,
    /// Linking-structure registry (JSON).
    #[arg(long, value_name = "FILE")]
    structures: Option<PathBuf>,
    /// Content policy (JSON).
    #[arg(long, value_name = "FILE")]
    policy: Option<PathBuf>,
    /// Overrides the registry's default mode.
    #[arg(long, value_enum, value_name = "MODE")]
    structure_default: Option<StructureDefault>,
    /// Fixture web manifest (JSON).
    #[arg(long, value_name = "FILE")]
    fixtures: Option<PathBuf>,
    /// Dereference over HTTP(S).
    #[arg(long)]
    live: bool,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Maximum number of documents to request.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_MAX_DOCUMENTS)]
    max_docs: usize,
    /// Concurrent fetches per wave.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_WORKERS)]
    workers: usize,
    /// Live mode: per-request timeout in seconds.
    #[arg(long, value_name = "SECS", default_value_t = 10)]
    timeout: u64,
    /// Live mode: largest accepted body in bytes.
    #[arg(long, value_name = "BYTES", default_value_t = 4 * 1024 * 1024)]
    max_bytes: u64,
    /// Live mode: Accept header.
    #[arg(long, value_name = "MEDIA-TYPE", default_value = "text/turtle")]
    accept: String,
    /// Print elapsed time.
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long, value_enum, default_value = "unguided")]
    mode: ModeArg,
    /// Link-following semantics for unguided mode.
    #[arg(long, value_enum, default_value = "c-match")]
    semantics: SemanticsArg,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    inputs: Inputs,
    /// Link-following semantics for the unguided side.
    #[arg(long, value_enum, default_value = "c-all")]
    semantics: SemanticsArg,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("target").required(true).args(["row", "doc"]))]
struct ExplainArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long, value_enum, default_value = "guided")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "c-match")]
    semantics: SemanticsArg,
    /// Result row, counting from 1.
    #[arg(long, value_name = "N")]
    row: Option<usize>,
    /// Document IRI.
    #[arg(long, value_name = "IRI", value_parser = parse_iri)]
    doc: Option<Iri>,
}

fn parse_iri(s: &str) -> Result<Iri, String> {
    Iri::parse(s).map_err(|e| e.to_string())
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }

    fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }
}

impl From<TraversalError> for Failure {
    fn from(e: TraversalError) -> Self {
        let message = match &e {
            TraversalError::Capped { partial, .. } => format!(
                "{e} ({} documents fetched before stopping; raise --max-docs)",
                partial.trace.ledger.distinct_ok()
            ),
            TraversalError::NoSeeds => e.to_string(),
        };
        let code = if matches!(e, TraversalError::Capped { .. }) { EXIT_CAPPED } else { EXIT_USAGE };
        Failure { code, message }
    }
}

struct Guidance {
    registry: LinkingStructureRegistry,
    policy: ContentPolicy,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn load_query(inputs: &Inputs) -> Result<Query, Failure> {
    let text = read(&inputs.query)?;
    parse_query(&text).map_err(|e| Failure::input(format!("{}: {e}", inputs.query.display())))
}

fn load_guidance(inputs: &Inputs) -> Result<Guidance, Failure> {
    let (Some(structures), Some(policy)) = (&inputs.structures, &inputs.policy) else {
        return Err(Failure::usage("guided mode needs both --structures and --policy"));
    };
    let mut registry = parse_structure_registry(&read(structures)?)
        .map_err(|e| Failure::input(format!("{}: {e}", structures.display())))?;
    if let Some(mode) = inputs.structure_default {
        registry.default_mode = match mode {
            StructureDefault::Permissive => DefaultMode::Permissive,
            StructureDefault::Restrictive => DefaultMode::Restrictive,
        };
    }
    let policy = parse_policy(&read(policy)?).map_err(|e| Failure::input(format!("{}: {e}", policy.display())))?;
    Ok(Guidance { registry, policy })
}

fn load_source(inputs: &Inputs) -> Result<Box<dyn DocumentSource>, Failure> {
    if inputs.live {
        let source = live_http_source(Duration::from_secs(inputs.timeout), inputs.max_bytes, &inputs.accept)
            .map_err(|e| Failure::usage(e.to_string()))?;
        return Ok(Box::new(source));
    }
    let path = inputs.fixtures.as_ref().expect("clap enforces --fixtures or --live");
    Ok(Box::new(load_fixture_web(path).map_err(|e| Failure::input(e.to_string()))?))
}

fn config(inputs: &Inputs) -> TraversalConfig {
    TraversalConfig::new(inputs.seeds.iter().cloned()).with_max_documents(inputs.max_docs).with_workers(inputs.workers)
}

fn traverse(
    inputs: &Inputs,
    mode: Mode,
    query: &Query,
    guidance: Option<&Guidance>,
    source: &dyn DocumentSource,
) -> Result<(Solutions, TraversalRun), Failure> {
    let config = config(inputs);
    Ok(match (mode, guidance) {
        (Mode::Unguided(sem), _) => evaluate_unguided(query, sem, &config, &source)?,
        (Mode::Guided, Some(g)) => evaluate_augmented(query, &g.registry, &g.policy, &config, &source)?,
        (Mode::Guided, None) => return Err(Failure::usage("guided mode needs both --structures and --policy")),
    })
}

fn mode_of(mode: ModeArg, semantics: SemanticsArg) -> Mode {
    match mode {
        ModeArg::Unguided => Mode::Unguided(semantics.into()),
        ModeArg::Guided => Mode::Guided,
    }
}

fn cmd_run(args: &RunArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let inputs = &args.inputs;
    let mode = mode_of(args.mode, args.semantics);
    let query = load_query(inputs)?;
    let guidance = if mode == Mode::Guided { Some(load_guidance(inputs)?) } else { None };
    let source = load_source(inputs)?;
    let start = Instant::now();
    let (solutions, run) = traverse(inputs, mode, &query, guidance.as_ref(), &source)?;
    let mut report = RunReport::new(mode, solutions, &run.trace);
    if inputs.timing {
        report.elapsed_us = Some(start.elapsed().as_micros());
    }
    let text = match inputs.format {
        Format::Table => format!("{}\n{}", report.solutions.to_table(), report.summary()),
        Format::Tsv => format!("{}\n{}", report.solutions.to_tsv(), report.summary()),
        Format::Json => serde_json::to_string_pretty(&report.to_json()).expect("report serializes") + "\n",
    };
    write_out(out, &text)
}

fn cmd_compare(args: &CompareArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let inputs = &args.inputs;
    let semantics: Semantics = args.semantics.into();
    let query = load_query(inputs)?;
    let guidance = load_guidance(inputs)?;
    let source = load_source(inputs)?;
    let config = config(inputs);

    let start = Instant::now();
    let (u_rows, u_run) = evaluate_unguided(&query, semantics, &config, &source)?;
    let u_elapsed = start.elapsed().as_micros();
    let start = Instant::now();
    let (g_rows, g_run) = evaluate_augmented(&query, &guidance.registry, &guidance.policy, &config, &source)?;
    let g_elapsed = start.elapsed().as_micros();

    let c_all_rows = if semantics == Semantics::CAll {
        u_rows.clone()
    } else {
        evaluate_unguided(&query, Semantics::CAll, &config, &source)?.0
    };
    let (s_rows, _) = evaluate_augmented(&query, &guidance.registry, &ContentPolicy::permissive(), &config, &source)?;

    let mut unguided = RunReport::new(Mode::Unguided(semantics), u_rows, &u_run.trace);
    let mut guided = RunReport::new(Mode::Guided, g_rows, &g_run.trace);
    if inputs.timing {
        unguided.elapsed_us = Some(u_elapsed);
        guided.elapsed_us = Some(g_elapsed);
    }
    let cmp = Comparison {
        subtrees: subtree_counts(&u_run.trace, &g_run.trace),
        unguided,
        guided,
        c_all_rows: c_all_rows.len(),
        structure_only_rows: s_rows.len(),
        structure_only_changed: s_rows != c_all_rows,
    };
    let text = match inputs.format {
        Format::Json => serde_json::to_string_pretty(&cmp.to_json()).expect("report serializes") + "\n",
        _ => cmp.to_text(),
    };
    write_out(out, &text)
}

fn cmd_explain(args: &ExplainArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let inputs = &args.inputs;
    let mode = mode_of(args.mode, args.semantics);
    let query = load_query(inputs)?;
    let guidance = if mode == Mode::Guided { Some(load_guidance(inputs)?) } else { None };
    let source = load_source(inputs)?;
    let (solutions, run) = traverse(inputs, mode, &query, guidance.as_ref(), &source)?;
    let text = match (&args.doc, args.row) {
        (Some(doc), _) => explain_doc(&run.trace, doc)
            .ok_or_else(|| Failure::usage(format!("{doc} was neither fetched nor linked during the run")))?,
        (None, Some(row)) => {
            explain_row(&query, &solutions, &run, guidance.as_ref().map(|g| &g.policy), row).ok_or_else(|| {
                Failure::usage(format!("no result row {row}; the run produced {} rows", solutions.len()))
            })?
        }
        (None, None) => return Err(Failure::usage("pass --row or --doc")),
    };
    write_out(out, &text)
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure::input(format!("cannot write output: {e}")))
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                EXIT_USAGE
            } else {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    let result = match &cli.command {
        Command::Run(a) => cmd_run(a, out),
        Command::Compare(a) => cmd_compare(a, out),
        Command::Explain(a) => cmd_explain(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
