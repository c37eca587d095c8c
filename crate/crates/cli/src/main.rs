//! `tsow` — command-line front end of the oracle-game workbench.
//!
//! Subcommands: `list` the problem families, `simulate` a circuit or the
//! period sampler, `predict` query counts from sharing instances, `compare`
//! classical/predicted/simulated counts, `verify` the consistency battery,
//! and `probe-simon` for the exhaustive bipartition sweep.
//!
//! Exit codes: 0 success, 2 configuration problems, 3 size or calibration
//! limits, 4 broken run-time assertions.  Every nonzero exit writes a JSON
//! error object to stderr naming the failed contract.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tsow_core::algorithms::{draw_setting, run_extended, run_relativized, run_simon};
use tsow_core::bits::BitString;
use tsow_core::complexity::{cell_strategy, QueryPlan};
use tsow_core::oracle::{OracleProblem, ProblemKind, SettingEncoding, SettingSet};
use tsow_core::rule::{
    build_kind, compare_row, predict, predict_setting, simon_advanced_knowledge_probe,
    ComparisonRow, PredictionReport, SettingPrediction, SimonProbeReport,
};
use tsow_core::symmetry::{
    bob_invariance_check, enumerate_pairs, make_instance, rebuild_check, round_trip_check,
    valid_instances, SharingMode,
};
use tsow_core::{Error as CoreError, NORM_DRIFT_PER_OP, STATE_TOL, SUCCESS_TOL};

const SCHEMA: &str = "tsow/1";

#[derive(Parser)]
#[command(name = "tsow", version, about = "Oracle-game workbench: simulate, share, predict")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Copy, Clone, ValueEnum)]
enum ModeArg {
    Coordinate,
    #[value(name = "gf2-linear")]
    Gf2Linear,
}

impl From<ModeArg> for SharingMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Coordinate => SharingMode::Coordinate,
            ModeArg::Gf2Linear => SharingMode::Linear,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Show the problem families, or one instantiated problem.
    List {
        /// Problem family: grover | dj | bv | simon.
        problem: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        /// Load a custom problem description instead.
        #[arg(long, conflicts_with_all = ["problem", "n"])]
        problem_file: Option<PathBuf>,
    },
    /// Run a quantum program (or the period sampler) and grade its output.
    Simulate {
        /// Problem family: grover | dj | bv | simon.
        problem: String,
        #[arg(long)]
        n: usize,
        /// Measure the setting register first and run only this branch;
        /// `random` lets the seeded generator draw the outcome.
        #[arg(long)]
        setting: Option<String>,
        /// Seed for the period sampler and for `--setting random`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Append the final statevector (basis bits, re, im per line).
        #[arg(long)]
        dump_states: bool,
    },
    /// Predict query counts from valid sharing instances.
    Predict {
        /// Problem family: grover | dj | bv | simon.
        problem: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        /// Load a custom problem description instead.
        #[arg(long, conflicts_with_all = ["problem", "n"])]
        problem_file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ModeArg::Coordinate)]
        mode: ModeArg,
        /// Allow shares whose sizes differ by one (odd setting widths).
        #[arg(long)]
        near_even: bool,
        /// Report a single setting, failing if it has no valid pair.
        #[arg(long)]
        setting: Option<String>,
    },
    /// One row: classical depth, predicted count, simulated count.
    Compare {
        /// Problem family: grover | dj | bv | simon.
        problem: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Coordinate)]
        mode: ModeArg,
        #[arg(long)]
        near_even: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the full consistency battery for one problem size.
    Verify {
        /// Problem family: grover | dj | bv | simon.
        problem: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Coordinate)]
        mode: ModeArg,
        #[arg(long)]
        near_even: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exhaustive bipartition sweep of the period problem's table register.
    ProbeSimon {
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
}

// ---------------------------------------------------------------------------
// failure plumbing
// ---------------------------------------------------------------------------

struct Failure {
    code: u8,
    contract: String,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Failure { code: 2, contract: "CONFIG".into(), message: message.into() }
    }

    fn check(contract: &str, message: impl Into<String>) -> Self {
        Failure { code: 4, contract: contract.into(), message: message.into() }
    }
}

impl From<CoreError> for Failure {
    fn from(err: CoreError) -> Self {
        let code = match err.contract() {
            "SIZE_LIMIT" | "LAYOUT_MISMATCH" | "CALIBRATION_FAILED" => 3,
            "OUTPUT_NOT_CANONICAL" | "INSTANCE_MISMATCH" | "SAMPLING_STALL" | "UNDETERMINED"
            | "NO_VALID_PAIR" => 4,
            _ => 2,
        };
        Failure { code, contract: err.contract().into(), message: err.to_string() }
    }
}

#[derive(Serialize)]
struct ErrorObject<'a> {
    schema: &'static str,
    error: ErrorBody<'a>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    contract: &'a str,
    message: &'a str,
}

fn emit_failure(f: &Failure) -> ExitCode {
    let obj = ErrorObject {
        schema: SCHEMA,
        error: ErrorBody { contract: &f.contract, message: &f.message },
    };
    eprintln!("{}", serde_json::to_string(&obj).expect("error objects serialize"));
    ExitCode::from(f.code)
}

/// A rendered report, plus a deferred failure for commands (verify) that
/// print their findings before failing.
struct Output {
    text: String,
    failure: Option<Failure>,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, failure: None }
    }
}

// ---------------------------------------------------------------------------
// main
// ---------------------------------------------------------------------------

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            return emit_failure(&Failure::config(e.to_string()));
        }
        Err(e) => {
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let format = cli.format;
    let result = match cli.command {
        Command::List { problem, n, problem_file } => cmd_list(problem, n, problem_file, format),
        Command::Simulate { problem, n, setting, seed, dump_states } => {
            cmd_simulate(&problem, n, setting, seed, dump_states, format)
        }
        Command::Predict { problem, n, problem_file, mode, near_even, setting } => {
            cmd_predict(problem, n, problem_file, mode.into(), near_even, setting, format)
        }
        Command::Compare { problem, n, mode, near_even, seed } => {
            cmd_compare(&problem, n, mode.into(), near_even, seed, format)
        }
        Command::Verify { problem, n, mode, near_even, seed } => {
            cmd_verify(&problem, n, mode.into(), near_even, seed, format)
        }
        Command::ProbeSimon { n } => cmd_probe(n, format),
    };
    let output = match result {
        Ok(o) => o,
        Err(f) => return emit_failure(&f),
    };
    match cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, output.text + "\n") {
                return emit_failure(&Failure::config(format!(
                    "cannot write {}: {e}",
                    path.display()
                )));
            }
        }
        None => {
            use std::io::Write as _;
            // A closed pipe (e.g. piping into `head`) is not an error.
            if let Err(e) = writeln!(std::io::stdout(), "{}", output.text) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    return emit_failure(&Failure::config(format!("cannot write stdout: {e}")));
                }
            }
        }
    }
    match output.failure {
        Some(f) => emit_failure(&f),
        None => ExitCode::SUCCESS,
    }
}

fn parse_kind(label: &str) -> Result<ProblemKind, Failure> {
    match label {
        "grover" => Ok(ProblemKind::Grover),
        "dj" => Ok(ProblemKind::DeutschJozsa),
        "bv" => Ok(ProblemKind::BernsteinVazirani),
        "simon" => Ok(ProblemKind::Simon),
        other => Err(Failure::config(format!(
            "unknown problem `{other}`; expected grover, dj, bv, or simon"
        ))),
    }
}

fn parse_setting(problem: &OracleProblem, text: &str) -> Result<BitString, Failure> {
    let b = BitString::parse(text, Some(problem.setting_width())).map_err(Failure::from)?;
    if !problem.sigma().contains(&b) {
        return Err(Failure::config(format!(
            "{b} is not a setting of {}; see `tsow list`",
            problem.name()
        )));
    }
    Ok(b)
}

fn csv_unsupported(command: &str) -> Failure {
    Failure::config(format!("csv is a flat projection of compare rows; `{command}` has none"))
}

fn envelope<T: Serialize>(command: &'static str, body: &T) -> String {
    #[derive(Serialize)]
    struct Envelope<'a, T: Serialize> {
        schema: &'static str,
        command: &'static str,
        #[serde(flatten)]
        body: &'a T,
    }
    serde_json::to_string_pretty(&Envelope { schema: SCHEMA, command, body })
        .expect("reports serialize")
}

// ---------------------------------------------------------------------------
// rendering helpers
// ---------------------------------------------------------------------------

fn fmt9(x: f64) -> String {
    format!("{x:.9}")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cell_text(members: &[BitString]) -> String {
    let inner: Vec<String> = members.iter().map(|b| b.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    let render = |out: &mut String, cells: &[String]| {
        let line: Vec<String> =
            cells.iter().enumerate().map(|(i, c)| format!("{:<w$}", c, w = widths[i])).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    };
    render(&mut out, &headers.iter().map(|h| h.to_string()).collect::<Vec<_>>());
    for row in rows {
        render(&mut out, row);
    }
    out.pop();
    out
}

fn kv(pairs: &[(&str, String)]) -> String {
    let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let lines: Vec<String> =
        pairs.iter().map(|(k, v)| format!("{k:<width$}  {v}")).collect();
    lines.join("\n")
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_line(fields: &[String]) -> String {
    fields.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",")
}

// ---------------------------------------------------------------------------
// list
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct FamilyRow {
    problem: &'static str,
    min_n: usize,
    max_n: usize,
    encoding: &'static str,
    solution: &'static str,
}

#[derive(Serialize)]
struct FamilyList {
    families: Vec<FamilyRow>,
}

#[derive(Serialize)]
struct ProblemView {
    problem: String,
    encoding: &'static str,
    settings: usize,
    setting_width: usize,
    query_arguments: usize,
    answer_width: usize,
    solution_width: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    members: Option<Vec<BitString>>,
}

fn problem_view(problem: &OracleProblem) -> ProblemView {
    let members = (problem.sigma().len() <= 64).then(|| problem.sigma().members().to_vec());
    ProblemView {
        problem: problem.name().into(),
        encoding: match problem.encoding() {
            SettingEncoding::Compact => "compact",
            SettingEncoding::Table => "table",
        },
        settings: problem.sigma().len(),
        setting_width: problem.setting_width(),
        query_arguments: problem.query_domain().len(),
        answer_width: problem.answer_width(),
        solution_width: problem.solution_width(),
        members,
    }
}

fn load_problem_file(path: &PathBuf) -> Result<Arc<OracleProblem>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
    OracleProblem::from_json_str(&text).map_err(Failure::from)
}

fn cmd_list(
    problem: Option<String>,
    n: Option<usize>,
    problem_file: Option<PathBuf>,
    format: Format,
) -> Result<Output, Failure> {
    if let Some(path) = problem_file {
        let p = load_problem_file(&path)?;
        return list_one(&p, format);
    }
    if let Some(label) = problem {
        let kind = parse_kind(&label)?;
        let n = n.ok_or_else(|| Failure::config("--n is required with a problem label"))?;
        let p = kind.build(n).map_err(Failure::from)?;
        return list_one(&p, format);
    }
    let families = FamilyList {
        families: [
            ProblemKind::Grover,
            ProblemKind::DeutschJozsa,
            ProblemKind::BernsteinVazirani,
            ProblemKind::Simon,
        ]
        .into_iter()
        .map(|k| {
            let (min_n, max_n) = k.supported_n();
            FamilyRow {
                problem: k.label(),
                min_n,
                max_n,
                encoding: match k {
                    ProblemKind::Grover | ProblemKind::BernsteinVazirani => "compact",
                    _ => "table",
                },
                solution: match k {
                    ProblemKind::Grover => "the hidden drawer index",
                    ProblemKind::DeutschJozsa => "0 constant, 1 balanced",
                    ProblemKind::BernsteinVazirani => "the hidden mask",
                    ProblemKind::Simon => "the hidden period",
                },
            }
        })
        .collect(),
    };
    let text = match format {
        Format::Json => envelope("list", &families),
        Format::Csv => return Err(csv_unsupported("list")),
        Format::Table => table(
            &["problem", "n", "encoding", "solution"],
            &families
                .families
                .iter()
                .map(|f| {
                    vec![
                        f.problem.to_string(),
                        format!("{}..={}", f.min_n, f.max_n),
                        f.encoding.to_string(),
                        f.solution.to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
    };
    Ok(Output::ok(text))
}

fn list_one(problem: &OracleProblem, format: Format) -> Result<Output, Failure> {
    let view = problem_view(problem);
    let text = match format {
        Format::Json => envelope("list", &view),
        Format::Csv => return Err(csv_unsupported("list")),
        Format::Table => {
            let mut pairs = vec![
                ("problem", view.problem.clone()),
                ("encoding", view.encoding.to_string()),
                ("settings", view.settings.to_string()),
                ("setting width", view.setting_width.to_string()),
                ("query arguments", view.query_arguments.to_string()),
                ("answer width", view.answer_width.to_string()),
                ("solution width", view.solution_width.to_string()),
            ];
            if let Some(members) = &view.members {
                pairs.push(("members", cell_text(members)));
            }
            kv(&pairs)
        }
    };
    Ok(Output::ok(text))
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct SettingOutcome {
    setting: BitString,
    solution: BitString,
    success: f64,
}

#[derive(Serialize)]
struct SimulateBody {
    problem: String,
    n: usize,
    algorithm: String,
    queries: u32,
    canonical_fidelity: f64,
    canonical_ok: bool,
    worst_success: f64,
    per_setting: Vec<SettingOutcome>,
    annotations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    states: Option<Vec<String>>,
}

#[derive(Serialize)]
struct ExtendedBody {
    problem: String,
    n: usize,
    algorithm: String,
    setting: BitString,
    setting_probability: f64,
    /// Present when the setting was drawn rather than chosen.
    #[serde(skip_serializing_if = "Option::is_none")]
    rng: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    queries: u32,
    solution: BitString,
    success: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    states: Option<Vec<String>>,
}

#[derive(Serialize)]
struct SimonRunBody {
    problem: String,
    n: usize,
    seed: u64,
    rng: &'static str,
    queries_worst_setting: u32,
    all_recovered: bool,
    all_orthogonal: bool,
    per_setting: Vec<SimonSettingBody>,
}

#[derive(Serialize)]
struct SimonSettingBody {
    setting: BitString,
    period: BitString,
    runs: u32,
    samples: Vec<BitString>,
    all_orthogonal: bool,
    recovered: BitString,
    ok: bool,
}

fn cmd_simulate(
    label: &str,
    n: usize,
    setting: Option<String>,
    seed: u64,
    dump_states: bool,
    format: Format,
) -> Result<Output, Failure> {
    let kind = parse_kind(label)?;
    if kind == ProblemKind::Simon {
        if setting.is_some() {
            return Err(Failure::config(
                "the period sampler always sweeps every setting; drop --setting",
            ));
        }
        if dump_states {
            return Err(Failure::config(
                "the period sampler has no single final state; drop --dump-states",
            ));
        }
        return simulate_simon(n, seed, format);
    }
    let algo = build_kind(kind, n).map_err(Failure::from)?;
    match setting {
        Some(text) => {
            let drawn = text == "random";
            let b = if drawn {
                draw_setting(algo.problem(), seed)
            } else {
                parse_setting(algo.problem(), &text)?
            };
            let run = run_extended(&algo, &b).map_err(Failure::from)?;
            let body = ExtendedBody {
                problem: algo.problem().name().into(),
                n,
                algorithm: algo.name().into(),
                setting: run.setting,
                setting_probability: run.setting_probability,
                rng: drawn.then_some(tsow_core::RNG_NAME),
                seed: drawn.then_some(seed),
                queries: run.queries,
                solution: run.solution,
                success: run.success,
                states: dump_states.then(|| run.output.dump_lines()),
            };
            let text = match format {
                Format::Json => envelope("simulate", &body),
                Format::Csv => return Err(csv_unsupported("simulate")),
                Format::Table => {
                    let mut pairs = vec![
                        ("problem", body.problem.clone()),
                        ("algorithm", body.algorithm.clone()),
                        ("setting", body.setting.to_string()),
                        ("setting probability", fmt9(body.setting_probability)),
                        ("queries", body.queries.to_string()),
                        ("solution", body.solution.to_string()),
                        ("success", fmt9(body.success)),
                    ];
                    if let (Some(rng), Some(seed)) = (body.rng, body.seed) {
                        pairs.insert(4, ("drawn by", format!("{rng}, seed {seed}")));
                    }
                    if let Some(states) = &body.states {
                        pairs.push(("final state", format!("\n{}", states.join("\n"))));
                    }
                    kv(&pairs)
                }
            };
            Ok(Output::ok(text))
        }
        None => {
            let run = run_relativized(&algo).map_err(Failure::from)?;
            let body = SimulateBody {
                problem: algo.problem().name().into(),
                n,
                algorithm: run.algorithm.clone(),
                queries: run.queries,
                canonical_fidelity: run.canonical_fidelity,
                canonical_ok: run.canonical_ok,
                worst_success: run.min_success(),
                per_setting: run
                    .per_setting_success
                    .iter()
                    .map(|(b, p)| SettingOutcome {
                        setting: *b,
                        solution: algo.problem().solution(b),
                        success: *p,
                    })
                    .collect(),
                annotations: run.annotations.clone(),
                states: dump_states.then(|| run.output.dump_lines()),
            };
            let text = match format {
                Format::Json => envelope("simulate", &body),
                Format::Csv => return Err(csv_unsupported("simulate")),
                Format::Table => {
                    let head = kv(&[
                        ("problem", body.problem.clone()),
                        ("algorithm", body.algorithm.clone()),
                        ("queries", body.queries.to_string()),
                        (
                            "canonical",
                            format!(
                                "{} (fidelity {})",
                                yes_no(body.canonical_ok),
                                fmt9(body.canonical_fidelity)
                            ),
                        ),
                        ("worst success", fmt9(body.worst_success)),
                    ]);
                    let rows: Vec<Vec<String>> = body
                        .per_setting
                        .iter()
                        .map(|s| {
                            vec![s.setting.to_string(), s.solution.to_string(), fmt9(s.success)]
                        })
                        .collect();
                    let mut text = format!(
                        "{head}\n\n{}",
                        table(&["setting", "solution", "success"], &rows)
                    );
                    for a in &body.annotations {
                        let _ = write!(text, "\nnote: {a}");
                    }
                    if let Some(states) = &body.states {
                        let _ = write!(text, "\n\nfinal state\n{}", states.join("\n"));
                    }
                    text
                }
            };
            Ok(Output::ok(text))
        }
    }
}

fn simulate_simon(n: usize, seed: u64, format: Format) -> Result<Output, Failure> {
    let report = run_simon(n, seed).map_err(Failure::from)?;
    let body = SimonRunBody {
        problem: format!("simon[n={n}]"),
        n,
        seed,
        rng: report.rng,
        queries_worst_setting: report.max_runs(),
        all_recovered: report.per_setting.iter().all(|r| r.ok),
        all_orthogonal: report.per_setting.iter().all(|r| r.all_orthogonal),
        per_setting: report
            .per_setting
            .iter()
            .map(|r| SimonSettingBody {
                setting: r.setting,
                period: r.period,
                runs: r.runs,
                samples: r.samples.clone(),
                all_orthogonal: r.all_orthogonal,
                recovered: r.recovered,
                ok: r.ok,
            })
            .collect(),
    };
    let text = match format {
        Format::Json => envelope("simulate", &body),
        Format::Csv => return Err(csv_unsupported("simulate")),
        Format::Table => {
            let head = kv(&[
                ("problem", body.problem.clone()),
                ("seed", body.seed.to_string()),
                ("rng", body.rng.to_string()),
                ("worst-setting queries", body.queries_worst_setting.to_string()),
                ("all periods recovered", yes_no(body.all_recovered).to_string()),
                ("all samples orthogonal", yes_no(body.all_orthogonal).to_string()),
            ]);
            let rows: Vec<Vec<String>> = body
                .per_setting
                .iter()
                .map(|r| {
                    vec![
                        r.setting.to_string(),
                        r.period.to_string(),
                        r.runs.to_string(),
                        r.recovered.to_string(),
                        yes_no(r.ok).to_string(),
                    ]
                })
                .collect();
            format!(
                "{head}\n\n{}",
                table(&["setting", "period", "runs", "recovered", "ok"], &rows)
            )
        }
    };
    Ok(Output::ok(text))
}

// ---------------------------------------------------------------------------
// predict
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct SinglePrediction {
    problem: String,
    mode: &'static str,
    near_even: bool,
    #[serde(flatten)]
    setting: SettingPrediction,
    /// An optimal finishing strategy per advanced cell, replayable leaves
    /// and all.
    strategies: Vec<StrategyView>,
}

#[derive(Serialize)]
struct StrategyView {
    pair: String,
    outcome: BitString,
    plan: QueryPlan,
}

fn predict_problem(
    problem: Option<String>,
    n: Option<usize>,
    problem_file: Option<PathBuf>,
) -> Result<Arc<OracleProblem>, Failure> {
    if let Some(path) = problem_file {
        return load_problem_file(&path);
    }
    let label = problem.ok_or_else(|| {
        Failure::config("give a problem label (grover | dj | bv | simon) or --problem-file")
    })?;
    let kind = parse_kind(&label)?;
    let n = n.ok_or_else(|| Failure::config("--n is required with a problem label"))?;
    kind.build(n).map_err(Failure::from)
}

fn cmd_predict(
    problem: Option<String>,
    n: Option<usize>,
    problem_file: Option<PathBuf>,
    mode: SharingMode,
    near_even: bool,
    setting: Option<String>,
    format: Format,
) -> Result<Output, Failure> {
    let p = predict_problem(problem, n, problem_file)?;
    if let Some(text) = setting {
        let b = parse_setting(&p, &text)?;
        let pred = predict_setting(&p, mode, near_even, &b).map_err(Failure::from)?;
        let mut strategies = Vec::with_capacity(pred.instances.len());
        for inst in &pred.instances {
            let cell = SettingSet::new(p.setting_width(), inst.cell.clone())
                .map_err(Failure::from)?;
            strategies.push(StrategyView {
                pair: inst.pair.clone(),
                outcome: inst.outcome,
                plan: cell_strategy(&p, &cell).map_err(Failure::from)?,
            });
        }
        let body = SinglePrediction {
            problem: p.name().into(),
            mode: mode.label(),
            near_even,
            setting: pred,
            strategies,
        };
        let text = match format {
            Format::Json => envelope("predict", &body),
            Format::Csv => return Err(csv_unsupported("predict")),
            Format::Table => {
                let head = kv(&[
                    ("problem", body.problem.clone()),
                    ("mode", body.mode.to_string()),
                    ("setting", body.setting.setting.to_string()),
                    ("solution", body.setting.solution.to_string()),
                    (
                        "predicted",
                        body.setting.predicted.map_or("-".into(), |d| d.to_string()),
                    ),
                ]);
                let rows: Vec<Vec<String>> = body
                    .setting
                    .instances
                    .iter()
                    .map(|i| {
                        vec![
                            i.pair.clone(),
                            i.outcome.to_string(),
                            cell_text(&i.cell),
                            format!("{:.3}", i.c1),
                            format!("{:.3}", i.c2),
                            i.depth.to_string(),
                        ]
                    })
                    .collect();
                let mut text = format!(
                    "{head}\n\n{}",
                    table(&["pair", "outcome", "cell", "c1", "c2", "depth"], &rows)
                );
                for s in &body.strategies {
                    let _ = write!(
                        text,
                        "\n\nfinishing strategy for {} at {}\n{}",
                        s.pair,
                        s.outcome,
                        s.plan.render_indented()
                    );
                }
                text
            }
        };
        return Ok(Output::ok(text));
    }
    let report = predict(&p, mode, near_even).map_err(Failure::from)?;
    let text = match format {
        Format::Json => envelope("predict", &report),
        Format::Csv => return Err(csv_unsupported("predict")),
        Format::Table => render_prediction_table(&report),
    };
    Ok(Output::ok(text))
}

fn render_prediction_table(report: &PredictionReport) -> String {
    let head = kv(&[
        ("problem", report.problem.clone()),
        ("mode", report.mode.to_string()),
        ("near even", yes_no(report.near_even).to_string()),
        ("pairs examined", report.pairs_examined.to_string()),
        (
            "predicted",
            report.predicted.map_or("NO_VALID_PAIR".into(), |d| d.to_string()),
        ),
    ]);
    let rows: Vec<Vec<String>> = report
        .per_setting
        .iter()
        .map(|s| {
            let cells: Vec<String> = s.instances.iter().map(|i| cell_text(&i.cell)).collect();
            vec![
                s.setting.to_string(),
                s.solution.to_string(),
                s.instances.len().to_string(),
                yes_no(s.agree).to_string(),
                s.predicted.map_or("NO_VALID_PAIR".into(), |d| d.to_string()),
                cells.join(" "),
            ]
        })
        .collect();
    format!(
        "{head}\n\n{}",
        table(&["setting", "solution", "cells", "agree", "predicted", "advanced cells"], &rows)
    )
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct CompareBody {
    mode: &'static str,
    near_even: bool,
    seed: u64,
    rows: Vec<ComparisonRow>,
}

fn cmd_compare(
    label: &str,
    n: usize,
    mode: SharingMode,
    near_even: bool,
    seed: u64,
    format: Format,
) -> Result<Output, Failure> {
    let kind = parse_kind(label)?;
    let row = compare_row(kind, n, mode, near_even, seed).map_err(Failure::from)?;
    let body = CompareBody { mode: mode.label(), near_even, seed, rows: vec![row] };
    let headers =
        ["problem", "n", "algorithm", "classical_depth", "predicted_quantum",
         "simulated_quantum_queries", "simulated_success", "note"];
    let to_fields = |r: &ComparisonRow| {
        vec![
            r.problem.clone(),
            r.n.to_string(),
            r.algorithm.clone(),
            r.classical_depth.to_string(),
            r.predicted_quantum.map_or("NO_VALID_PAIR".into(), |d| d.to_string()),
            r.simulated_quantum_queries.to_string(),
            fmt9(r.simulated_success),
            r.note.clone().unwrap_or_default(),
        ]
    };
    let text = match format {
        Format::Json => envelope("compare", &body),
        Format::Csv => {
            let mut lines = vec![headers.join(",")];
            lines.extend(body.rows.iter().map(|r| csv_line(&to_fields(r))));
            lines.join("\n")
        }
        Format::Table => {
            let rows: Vec<Vec<String>> = body.rows.iter().map(to_fields).collect();
            table(&headers, &rows)
        }
    };
    Ok(Output::ok(text))
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct CheckRow {
    check: &'static str,
    ok: bool,
    value: String,
    detail: String,
}

#[derive(Serialize)]
struct VerifyBody {
    problem: String,
    n: usize,
    mode: &'static str,
    near_even: bool,
    seed: u64,
    checks: Vec<CheckRow>,
    all_ok: bool,
}

fn cmd_verify(
    label: &str,
    n: usize,
    mode: SharingMode,
    near_even: bool,
    seed: u64,
    format: Format,
) -> Result<Output, Failure> {
    let kind = parse_kind(label)?;
    let checks = if kind == ProblemKind::Simon {
        verify_simon(n, seed)?
    } else {
        verify_circuit(kind, n, mode, near_even)?
    };
    let all_ok = checks.iter().all(|c| c.ok);
    let body = VerifyBody {
        problem: format!("{}[n={n}]", kind.label()),
        n,
        mode: mode.label(),
        near_even,
        seed,
        checks,
        all_ok,
    };
    let text = match format {
        Format::Json => envelope("verify", &body),
        Format::Csv => return Err(csv_unsupported("verify")),
        Format::Table => {
            let rows: Vec<Vec<String>> = body
                .checks
                .iter()
                .map(|c| {
                    vec![
                        c.check.to_string(),
                        if c.ok { "pass".into() } else { "FAIL".into() },
                        c.value.clone(),
                        c.detail.clone(),
                    ]
                })
                .collect();
            format!(
                "{}\n\nresult: {}",
                table(&["check", "status", "value", "detail"], &rows),
                if body.all_ok { "all checks pass" } else { "CHECKS FAILED" }
            )
        }
    };
    let failure = (!body.all_ok).then(|| {
        let first = body.checks.iter().find(|c| !c.ok).expect("a check failed");
        let contract = first.check.to_uppercase().replace('-', "_");
        Failure::check(&contract, format!("verify check `{}` failed: {}", first.check, first.value))
    });
    Ok(Output { text, failure })
}

fn verify_circuit(
    kind: ProblemKind,
    n: usize,
    mode: SharingMode,
    near_even: bool,
) -> Result<Vec<CheckRow>, Failure> {
    let algo = build_kind(kind, n).map_err(Failure::from)?;
    let mut checks = Vec::new();

    let input = algo.initial_state().map_err(Failure::from)?;
    let output = algo.forward(&input).map_err(Failure::from)?;
    let run = run_relativized(&algo).map_err(Failure::from)?;
    let worst = run.min_success();
    checks.push(CheckRow {
        check: "relativized-success",
        ok: worst >= 1.0 - SUCCESS_TOL,
        value: fmt9(worst),
        detail: format!("worst setting over {}", run.per_setting_success.len()),
    });
    checks.push(CheckRow {
        check: "canonical-form",
        ok: !algo.asserts_canonical() || run.canonical_ok,
        value: fmt9(run.canonical_fidelity),
        detail: if algo.asserts_canonical() {
            "solved form promised".into()
        } else {
            "solved form not promised; fidelity reported".into()
        },
    });

    let drift = (output.norm() - 1.0).abs();
    let budget = NORM_DRIFT_PER_OP * algo.steps().len() as f64;
    checks.push(CheckRow {
        check: "norm-drift",
        ok: drift <= budget,
        value: format!("{drift:.3e}"),
        detail: format!("budget {budget:.3e} over {} steps", algo.steps().len()),
    });

    let back = algo.backward(&output).map_err(Failure::from)?;
    let rev = input.fidelity(&back).map_err(Failure::from)?;
    checks.push(CheckRow {
        check: "reversibility",
        ok: rev >= 1.0 - STATE_TOL,
        value: fmt9(rev),
        detail: "backward of forward returns the input".into(),
    });

    let mass_dev = algo
        .problem()
        .sigma()
        .iter()
        .map(|b| (input.block_mass(b.value()) - output.block_mass(b.value())).abs())
        .fold(0.0, f64::max);
    checks.push(CheckRow {
        check: "setting-mass",
        ok: mass_dev <= 1e-12,
        value: format!("{mass_dev:.3e}"),
        detail: "per-setting probability untouched by the run".into(),
    });

    let pairs = enumerate_pairs(algo.problem(), mode, near_even).map_err(Failure::from)?;
    let instances = valid_instances(algo.problem(), mode, near_even).map_err(Failure::from)?;
    if pairs.is_empty() {
        checks.push(CheckRow {
            check: "sharing-pairs",
            ok: true,
            value: "0".into(),
            detail: "no admissible pairs at this width; share checks skipped".into(),
        });
        return Ok(checks);
    }

    let mut worst_invariance = f64::INFINITY;
    for pair in &pairs {
        worst_invariance =
            worst_invariance.min(bob_invariance_check(&algo, pair).map_err(Failure::from)?);
    }
    checks.push(CheckRow {
        check: "late-measurement",
        ok: worst_invariance >= 1.0 - STATE_TOL,
        value: fmt9(worst_invariance),
        detail: format!("worst over {} pairs", pairs.len()),
    });

    let mut worst_match = f64::INFINITY;
    let mut worst_round_trip = f64::INFINITY;
    for inst in &instances {
        let shared = make_instance(&algo, &inst.pair, &inst.report.setting).map_err(Failure::from)?;
        worst_match = worst_match.min(shared.match_fidelity);
        worst_round_trip = worst_round_trip
            .min(round_trip_check(&algo, &inst.pair, &inst.report.setting).map_err(Failure::from)?);
    }
    if instances.is_empty() {
        checks.push(CheckRow {
            check: "instance-match",
            ok: true,
            value: "-".into(),
            detail: "no valid instances at this width".into(),
        });
    } else {
        checks.push(CheckRow {
            check: "instance-match",
            ok: worst_match >= 1.0 - STATE_TOL,
            value: fmt9(worst_match),
            detail: format!("worst over {} valid instances", instances.len()),
        });
        checks.push(CheckRow {
            check: "round-trip",
            ok: worst_round_trip >= 1.0 - STATE_TOL,
            value: fmt9(worst_round_trip),
            detail: "double selection returns the bare setting".into(),
        });
        let rebuild = rebuild_check(&algo, mode, near_even).map_err(Failure::from)?;
        checks.push(CheckRow {
            check: "ensemble-rebuild",
            ok: rebuild.support_ok,
            value: fmt9(rebuild.fidelity),
            detail: if rebuild.proportional {
                "weights match the uniform input".into()
            } else {
                "weights are skewed; support still complete".into()
            },
        });
    }
    Ok(checks)
}

fn verify_simon(n: usize, seed: u64) -> Result<Vec<CheckRow>, Failure> {
    let report = run_simon(n, seed).map_err(Failure::from)?;
    let mut checks = Vec::new();
    let recovered = report.per_setting.iter().filter(|r| r.ok).count();
    checks.push(CheckRow {
        check: "sampling-recovery",
        ok: recovered == report.per_setting.len(),
        value: format!("{recovered}/{}", report.per_setting.len()),
        detail: format!("seed {seed}, rng {}", report.rng),
    });
    let orthogonal = report.per_setting.iter().all(|r| r.all_orthogonal);
    checks.push(CheckRow {
        check: "sample-orthogonality",
        ok: orthogonal,
        value: yes_no(orthogonal).into(),
        detail: "every sample is orthogonal to its period".into(),
    });
    let budget = 64 * n as u32;
    checks.push(CheckRow {
        check: "query-budget",
        ok: report.max_runs() <= budget,
        value: report.max_runs().to_string(),
        detail: format!("budget {budget} runs per setting"),
    });
    match simon_advanced_knowledge_probe(n) {
        Ok(probe) => checks.push(CheckRow {
            check: "advanced-cells",
            ok: true,
            value: yes_no(probe.every_setting_has_depth_one).into(),
            detail: if probe.every_setting_has_depth_one {
                "every setting owns a one-query advanced cell".into()
            } else {
                "some settings lack one-query advanced cells".into()
            },
        }),
        Err(CoreError::SizeLimit { .. }) => checks.push(CheckRow {
            check: "advanced-cells",
            ok: true,
            value: "-".into(),
            detail: "table register too wide for the exhaustive sweep".into(),
        }),
        Err(e) => return Err(e.into()),
    }
    Ok(checks)
}

// ---------------------------------------------------------------------------
// probe-simon
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ProbeBody {
    #[serde(flatten)]
    probe: SimonProbeReport,
    note: String,
}

fn cmd_probe(n: usize, format: Format) -> Result<Output, Failure> {
    let probe = simon_advanced_knowledge_probe(n).map_err(Failure::from)?;
    let note = if probe.every_setting_has_depth_one {
        "every setting admits a valid pair whose advanced cell needs one query".to_string()
    } else {
        "some settings admit no one-query advanced cell; their minima are listed".to_string()
    };
    let body = ProbeBody { probe, note };
    let text = match format {
        Format::Json => envelope("probe-simon", &body),
        Format::Csv => return Err(csv_unsupported("probe-simon")),
        Format::Table => {
            let head = kv(&[
                ("n", body.probe.n.to_string()),
                ("pairs examined", body.probe.pairs_examined.to_string()),
                (
                    "depth-1 everywhere",
                    yes_no(body.probe.every_setting_has_depth_one).to_string(),
                ),
                ("note", body.note.clone()),
            ]);
            let rows: Vec<Vec<String>> = body
                .probe
                .per_setting
                .iter()
                .map(|s| {
                    vec![
                        s.setting.to_string(),
                        s.period.to_string(),
                        s.valid_instances.to_string(),
                        s.min_depth.to_string(),
                        s.max_depth.to_string(),
                        yes_no(s.has_depth_one).to_string(),
                    ]
                })
                .collect();
            format!(
                "{head}\n\n{}",
                table(
                    &["setting", "period", "valid", "min_depth", "max_depth", "depth_one"],
                    &rows
                )
            )
        }
    };
    Ok(Output::ok(text))
}
