use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use jordan_entropy::element::{parse_element_json, AlgebraDescriptor, AlgebraKind, JordanElement};
use jordan_entropy::error::JordanError;
use jordan_entropy::harness::report::{
    failing_link_count, summary_csv, ChainReport, Mode, SummaryRow,
};
use jordan_entropy::harness::sample::{random_positive_with, sample_pair, trial_rng, Hypothesis};
use jordan_entropy::harness::{
    all_ids, default_backends, registry, verify, CampaignConfig, DEFAULT_COND, DEFAULT_NODES,
    DEFAULT_TRIALS,
};
use jordan_entropy::means::{evaluate_named, EntropyParams, EXPRESSION_NAMES};
use jordan_entropy::spectral::spectrum;

const EXIT_FAILING: u8 = 1;
const EXIT_DOMAIN: u8 = 2;
const EXIT_SAMPLER: u8 = 3;
const EXIT_UNKNOWN: u8 = 4;
const EXIT_MALFORMED: u8 = 5;

#[derive(Parser)]
#[command(name = "je", version, about = "Jordan-algebraic relative entropies and their order inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a named expression on two operands.
    Compute(ComputeArgs),
    /// Run verification campaigns for a chain or identity id, or `all`.
    Verify(VerifyArgs),
    /// Write random positive elements or hypothesis-conforming pairs.
    Gen(GenArgs),
    /// Summarize a directory of reports.
    Report(ReportArgs),
}

#[derive(Args, Clone, Copy)]
struct ParamArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
}

impl ParamArgs {
    fn params(&self) -> EntropyParams {
        EntropyParams {
            alpha: self.alpha,
            beta: self.beta,
            lambda: self.lambda,
            delta: self.delta,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Sym,
    Spin,
    Albert,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Args)]
struct ComputeArgs {
    /// Expression name, e.g. `S`, `T`, `geo`, `bound:V`.
    expression: String,
    /// First operand file.
    #[arg(long, short = 'a', required_unless_present = "pair")]
    a: Option<PathBuf>,
    /// Second operand file.
    #[arg(long, short = 'b', required_unless_present = "pair")]
    b: Option<PathBuf>,
    /// A file written by `gen pair`, supplying both operands.
    #[arg(long, conflicts_with_all = ["a", "b"])]
    pair: Option<PathBuf>,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Chain or identity id, or `all`.
    id: String,
    #[arg(long, value_enum, default_value = "all")]
    backend: BackendArg,
    /// Dimension for `sym` and `spin`; ignored otherwise.
    #[arg(long, default_value_t = 3)]
    dim: usize,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_COND)]
    cond: f64,
    #[arg(long, default_value_t = DEFAULT_NODES)]
    nodes: usize,
    #[command(flatten)]
    params: ParamArgs,
    /// Sample the negated hypothesis; a campaign passes when it finds violations.
    #[arg(long)]
    control: bool,
    /// Directory receiving one report file per campaign.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Positive,
    Pair,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    kind: GenKind,
    #[arg(long, value_enum)]
    backend: BackendArg,
    #[arg(long, default_value_t = 3)]
    dim: usize,
    #[arg(long, default_value_t = DEFAULT_COND)]
    cond: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `A^b<=B` (or `above`), `A^b>=B` (or `below`), or `free`.
    #[arg(long, default_value = "A^b<=B")]
    hypothesis: String,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// Directory of report files.
    dir: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Errors surfaced by the tool, each with its exit status.
#[derive(Debug)]
enum CliError {
    Jordan(JordanError),
    Io { path: PathBuf, message: String },
    Malformed { path: PathBuf, message: String },
}

impl From<JordanError> for CliError {
    fn from(e: JordanError) -> Self {
        CliError::Jordan(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Jordan(JordanError::Sampler(_)) => EXIT_SAMPLER,
            CliError::Jordan(JordanError::UnknownId(_)) => EXIT_UNKNOWN,
            CliError::Jordan(JordanError::Parse(_)) | CliError::Malformed { .. } => EXIT_MALFORMED,
            CliError::Jordan(_) | CliError::Io { .. } => EXIT_DOMAIN,
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            CliError::Jordan(e) => serde_json::json!({ "error": e.kind(), "message": e.to_string() }),
            CliError::Io { path, message } => {
                serde_json::json!({ "error": "io", "path": path, "message": message })
            }
            CliError::Malformed { path, message } => {
                serde_json::json!({ "error": "malformed", "path": path, "message": message })
            }
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn write_output(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io {
            path: p.to_path_buf(),
            message: e.to_string(),
        }),
        None => {
            let mut out = std::io::stdout().lock();
            let written = out
                .write_all(text.as_bytes())
                .and_then(|_| if text.ends_with('\n') { Ok(()) } else { out.write_all(b"\n") });
            match written {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    message: e.to_string(),
                }),
                _ => Ok(()),
            }
        }
    }
}

fn load_element(path: &Path) -> CliResult<JordanElement> {
    parse_element_json(&read(path)?).map_err(|e| CliError::Malformed {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn backends(arg: BackendArg, dim: usize) -> CliResult<Vec<AlgebraDescriptor>> {
    Ok(match arg {
        BackendArg::All => default_backends(),
        BackendArg::Sym => vec![AlgebraDescriptor::new(AlgebraKind::SymMatrix, dim)?],
        BackendArg::Spin => vec![AlgebraDescriptor::new(AlgebraKind::SpinFactor, dim)?],
        BackendArg::Albert => vec![AlgebraDescriptor::albert()],
    })
}

#[derive(Serialize)]
struct ComputeOutput<'a> {
    expression: &'a str,
    params: EntropyParams,
    result: &'a JordanElement,
    spectrum: jordan_entropy::spectral::Spectrum,
}

#[derive(Serialize, serde::Deserialize)]
struct Fixture {
    kind: String,
    seed: u64,
    cond: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    hypothesis: Option<Hypothesis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    delta: Option<f64>,
    elements: BTreeMap<String, JordanElement>,
}

fn load_pair(path: &Path) -> CliResult<(JordanElement, JordanElement)> {
    let malformed = |message: String| CliError::Malformed {
        path: path.to_path_buf(),
        message,
    };
    let fixture: Fixture = serde_json::from_str(&read(path)?).map_err(|e| malformed(e.to_string()))?;
    let mut el = fixture.elements;
    match (el.remove("A"), el.remove("B")) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(malformed("expected elements `A` and `B`".into())),
    }
}

fn cmd_compute(args: ComputeArgs) -> CliResult<u8> {
    if !EXPRESSION_NAMES.contains(&args.expression.as_str()) {
        return Err(JordanError::UnknownId(args.expression).into());
    }
    let (a, b) = match (&args.pair, &args.a, &args.b) {
        (Some(p), _, _) => load_pair(p)?,
        (None, Some(a), Some(b)) => (load_element(a)?, load_element(b)?),
        _ => unreachable!("clap enforces the operand flags"),
    };
    let params = args.params.params();
    let result = evaluate_named(&args.expression, &a, &b, &params)?;
    let out = ComputeOutput {
        expression: &args.expression,
        params,
        spectrum: spectrum(&result)?,
        result: &result,
    };
    let text = serde_json::to_string_pretty(&out).expect("output serializes");
    write_output(args.out.as_deref(), &text)?;
    Ok(0)
}

/// Exit status of a set of reports: non-zero when a gating campaign fails or
/// a control run finds nothing.
fn verdict_code(reports: &[ChainReport]) -> u8 {
    let silent_controls = reports
        .iter()
        .any(|r| r.mode == Mode::Control && r.violation_count == 0);
    if failing_link_count(reports) > 0 || silent_controls {
        EXIT_FAILING
    } else {
        0
    }
}

fn report_file_name(r: &ChainReport) -> String {
    let suffix = if r.mode == Mode::Control { "_control" } else { "" };
    format!("{}_{}{suffix}.json", r.theorem_id, r.backend.label())
}

fn summary_text(reports: &[ChainReport], format: Format) -> String {
    let rows: Vec<SummaryRow> = reports.iter().map(SummaryRow::from_report).collect();
    match format {
        Format::Csv => summary_csv(&rows),
        Format::Json => serde_json::to_string_pretty(&rows).expect("rows serialize"),
    }
}

fn cmd_verify(args: VerifyArgs) -> CliResult<u8> {
    let mode = if args.control { Mode::Control } else { Mode::Standard };
    let ids: Vec<&str> = match (args.id.as_str(), mode) {
        ("all", Mode::Standard) => all_ids(),
        ("all", Mode::Control) => registry::control_ids(),
        (id, _) => {
            if !all_ids().contains(&id) {
                return Err(JordanError::UnknownId(id.to_string()).into());
            }
            vec![id]
        }
    };
    let algs = backends(args.backend, args.dim)?;
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir).map_err(|e| CliError::Io {
            path: dir.clone(),
            message: e.to_string(),
        })?;
    }
    let mut reports = Vec::new();
    for &id in &ids {
        // Scalar chains ignore the backend; one run covers them.
        let scalar = registry::find(id).is_some_and(|s| s.scalar);
        let algs = if scalar { &algs[..1] } else { &algs[..] };
        for &alg in algs {
            let config = CampaignConfig {
                backend: alg,
                trials: args.trials,
                cond: args.cond,
                seed: args.seed,
                tol: args.tol,
                params: args.params.params(),
                nodes: args.nodes,
                mode,
                threads: None,
            };
            let report = verify(id, &config)?;
            if let Some(dir) = &args.out {
                write_output(Some(&dir.join(report_file_name(&report))), &report.to_json())?;
            }
            reports.push(report);
        }
    }
    write_output(None, &summary_text(&reports, args.format))?;
    Ok(verdict_code(&reports))
}

fn parse_hypothesis(s: &str) -> CliResult<Hypothesis> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    match compact.to_ascii_lowercase().as_str() {
        "a^b<=b" | "above" => Ok(Hypothesis::Above),
        "a^b>=b" | "below" => Ok(Hypothesis::Below),
        "free" => Ok(Hypothesis::Free),
        _ => Err(JordanError::Parameter(format!(
            "unknown hypothesis `{s}`; expected `A^b<=B`, `A^b>=B` or `free`"
        ))
        .into()),
    }
}

fn cmd_gen(args: GenArgs) -> CliResult<u8> {
    if args.backend == BackendArg::All {
        return Err(JordanError::Parameter("gen needs a single backend".into()).into());
    }
    let alg = backends(args.backend, args.dim)?[0];
    let mut rng = trial_rng(args.seed, "gen", 0);
    let mut elements = BTreeMap::new();
    let fixture = match args.kind {
        GenKind::Positive => {
            elements.insert("A".to_string(), random_positive_with(&mut rng, alg, args.cond)?);
            Fixture {
                kind: "positive".into(),
                seed: args.seed,
                cond: args.cond,
                hypothesis: None,
                beta: None,
                delta: None,
                elements,
            }
        }
        GenKind::Pair => {
            let hyp = parse_hypothesis(&args.hypothesis)?;
            let (a, b) = sample_pair(&mut rng, alg, args.cond, hyp, args.beta, args.delta)?;
            elements.insert("A".to_string(), a);
            elements.insert("B".to_string(), b);
            Fixture {
                kind: "pair".into(),
                seed: args.seed,
                cond: args.cond,
                hypothesis: Some(hyp),
                beta: Some(args.beta),
                delta: Some(args.delta),
                elements,
            }
        }
    };
    let text = serde_json::to_string_pretty(&fixture).expect("fixture serializes");
    write_output(args.out.as_deref(), &text)?;
    Ok(0)
}

fn cmd_report(args: ReportArgs) -> CliResult<u8> {
    let entries = fs::read_dir(&args.dir).map_err(|e| CliError::Io {
        path: args.dir.clone(),
        message: e.to_string(),
    })?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut reports = Vec::with_capacity(paths.len());
    for path in paths {
        let report = ChainReport::from_json(&read(&path)?).map_err(|e| CliError::Malformed {
            path: path.clone(),
            message: e.to_string(),
        })?;
        reports.push(report);
    }
    write_output(args.out.as_deref(), &summary_text(&reports, args.format))?;
    Ok(verdict_code(&reports))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute(a) => cmd_compute(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Report(a) => cmd_report(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
