//! Batch command-line driver for the NVC processing pipeline.
//!
//! Exit codes are the script-facing contract: 0 = proved, 10 = potential
//! counter-example, 20 = gave up, 2 = input or stage error. `bounds` exits 1
//! when some variable stays unbounded.

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fpvc::backends::{self, DrealConfig, PiMode, ProverAnswer, ProverTool};
use fpvc::bounds::BoundsError;
use fpvc::eval::RoundingParams;
use fpvc::fpelim::{self, BoundSource};
use fpvc::pipeline::{self, PipelineConfig, ProcessOutcome};
use fpvc::prover::{GaveUpReason, ProveConfig, Verdict};
use fpvc::scalar::{parse_scalar, render_scalar, Scalar};
use fpvc::textfmt;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;
use std::time::Duration;

const EXIT_PROVED: u8 = 0;
const EXIT_COUNTEREXAMPLE: u8 = 10;
const EXIT_GAVE_UP: u8 = 20;
const EXIT_INPUT_ERROR: u8 = 2;
const EXIT_WARN: u8 = 1;

#[derive(Parser)]
#[command(name = "fpvc", about = "Process and decide floating-point verification conditions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline and decide the NVC with the built-in prover.
    Prove(ProveArgs),
    /// Run the pipeline up to FP elimination and print the exact NVC.
    Process(ProcessArgs),
    /// Derive and print variable bounds.
    Bounds(BoundsArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Input NVC files (.smt2 or bounds+assertions text format).
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Working precision in bits for interval enclosures.
    #[arg(long)]
    prec: Option<u32>,
    /// Configuration file with key = value lines; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write a machine-readable JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Process this many inputs in parallel.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Inject an externally computed error bound: CONTEXT_ID=DECIMAL
    /// (id prefix of at least 4 hex digits, or * for all contexts).
    #[arg(long = "inject-bound", value_name = "ID=DEC")]
    inject_bound: Vec<String>,
}

#[derive(Args, Clone)]
struct ProveArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Prover wall-clock budget in seconds.
    #[arg(long)]
    timeout: Option<u64>,
    /// Maximum bisection depth per box.
    #[arg(long)]
    max_depth: Option<u32>,
    /// Scaled box width below which boxes are abandoned.
    #[arg(long)]
    min_box_width: Option<String>,
    /// Shell out to an external tool: fptaylor=PATH, dreal=PATH or
    /// metitarski=PATH.
    #[arg(long = "run-external", value_name = "TOOL=PATH")]
    run_external: Vec<String>,
}

#[derive(Args, Clone)]
struct ProcessArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Emit an export instead of the processed NVC text.
    #[arg(long, value_enum)]
    emit: Option<EmitFormat>,
    /// Write the main output here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Tolerance for numerical solvers, written into SMT2 exports.
    #[arg(long)]
    delta: Option<String>,
    /// Reject integer literals beyond this many digits in SMT2 exports.
    #[arg(long)]
    max_int_digits: Option<usize>,
    /// How pi is rendered in SMT2 exports.
    #[arg(long, value_enum)]
    pi_mode: Option<PiModeArg>,
}

#[derive(Args, Clone)]
struct BoundsArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitFormat {
    Dreal,
    Metitarski,
    Fptaylor,
}

#[derive(Clone, Copy, ValueEnum)]
enum PiModeArg {
    Var,
    Midpoint,
}

#[derive(Serialize)]
struct StageJson {
    name: String,
    millis: u128,
}

#[derive(Serialize)]
struct DroppedJson {
    index: usize,
    reason: String,
}

#[derive(Serialize)]
struct ContextJson {
    id: String,
    expr: String,
    delta: Option<String>,
    source: String,
}

#[derive(Serialize)]
struct VerdictJson {
    kind: String,
    certified: Option<bool>,
    point: Option<BTreeMap<String, String>>,
    reason: Option<String>,
    boxes: Option<u64>,
    prover_millis: Option<u128>,
}

#[derive(Serialize)]
struct ReportJson {
    input: String,
    stages: Vec<StageJson>,
    dropped: Vec<DroppedJson>,
    warnings: Vec<String>,
    contexts: Vec<ContextJson>,
    bounds: BTreeMap<String, [String; 2]>,
    verdict: Option<VerdictJson>,
    exit_code: u8,
}

/// Keys accepted in the configuration file.
#[derive(Default, Clone)]
struct FileConfig {
    prec: Option<u32>,
    timeout: Option<u64>,
    max_depth: Option<u32>,
    min_box_width: Option<Scalar>,
    delta: Option<Scalar>,
    max_int_digits: Option<usize>,
    eps_single: Option<Scalar>,
    zeta_single: Option<Scalar>,
    eps_double: Option<Scalar>,
    zeta_double: Option<Scalar>,
}

fn load_config(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let table: toml::Table = text
        .parse()
        .with_context(|| format!("parsing config {}", path.display()))?;
    let mut cfg = FileConfig::default();
    let scalar = |v: &toml::Value| -> Option<Scalar> {
        match v {
            toml::Value::String(s) => parse_scalar(s),
            toml::Value::Integer(i) => Some(Scalar::from(*i)),
            toml::Value::Float(f) => Scalar::from_f64(*f),
            _ => None,
        }
    };
    for (key, value) in &table {
        match key.as_str() {
            "prec" => cfg.prec = value.as_integer().map(|v| v as u32),
            "timeout" => cfg.timeout = value.as_integer().map(|v| v as u64),
            "max_depth" => cfg.max_depth = value.as_integer().map(|v| v as u32),
            "min_box_width" => cfg.min_box_width = scalar(value),
            "delta" => cfg.delta = scalar(value),
            "max_int_digits" => cfg.max_int_digits = value.as_integer().map(|v| v as usize),
            "eps_single" => cfg.eps_single = scalar(value),
            "zeta_single" => cfg.zeta_single = scalar(value),
            "eps_double" => cfg.eps_double = scalar(value),
            "zeta_double" => cfg.zeta_double = scalar(value),
            other => return Err(anyhow!("unknown config key '{other}'")),
        }
    }
    Ok(cfg)
}

fn parse_injections(args: &[String]) -> Result<Vec<(String, Scalar)>> {
    args.iter()
        .map(|raw| {
            let (id, dec) = raw
                .split_once('=')
                .ok_or_else(|| anyhow!("--inject-bound wants ID=DECIMAL, got '{raw}'"))?;
            let value =
                parse_scalar(dec).ok_or_else(|| anyhow!("unparsable bound '{dec}'"))?;
            if value < 0 {
                return Err(anyhow!("error bounds cannot be negative: '{raw}'"));
            }
            let id = id.trim().to_string();
            if id != "*" && id.len() < 4 {
                return Err(anyhow!("context id prefix '{id}' is too short (>= 4 chars)"));
            }
            Ok((id, value))
        })
        .collect()
}

fn build_pipeline_config(
    common: &CommonArgs,
    file: &FileConfig,
    timeout: Option<u64>,
    max_depth: Option<u32>,
    min_box_width: Option<&str>,
) -> Result<PipelineConfig> {
    let mut cfg = PipelineConfig::default();
    if let Some(p) = file.prec {
        cfg.prec = p;
    }
    if let Some(p) = common.prec {
        cfg.prec = p;
    }
    let mut prove = ProveConfig {
        timeout: Duration::from_secs(120),
        ..ProveConfig::default()
    };
    if let Some(t) = file.timeout {
        prove.timeout = Duration::from_secs(t);
    }
    if let Some(t) = timeout {
        prove.timeout = Duration::from_secs(t);
    }
    if let Some(d) = file.max_depth {
        prove.max_depth = d;
    }
    if let Some(d) = max_depth {
        prove.max_depth = d;
    }
    if let Some(w) = &file.min_box_width {
        prove.min_box_width = w.clone();
    }
    if let Some(w) = min_box_width {
        prove.min_box_width =
            parse_scalar(w).ok_or_else(|| anyhow!("unparsable --min-box-width '{w}'"))?;
    }
    cfg.prove = prove;
    cfg.injected_bounds = parse_injections(&common.inject_bound)?;
    let mut rounding = RoundingParams::default();
    if let Some(v) = &file.eps_single {
        rounding.eps_single = v.clone();
    }
    if let Some(v) = &file.zeta_single {
        rounding.zeta_single = v.clone();
    }
    if let Some(v) = &file.eps_double {
        rounding.eps_double = v.clone();
    }
    if let Some(v) = &file.zeta_double {
        rounding.zeta_double = v.clone();
    }
    cfg.rounding = rounding;
    Ok(cfg)
}

fn source_tag(source: &BoundSource) -> String {
    match source {
        BoundSource::Internal => "internal".to_string(),
        BoundSource::External(tool) => format!("external:{tool}"),
    }
}

fn bounds_json(outcome: &ProcessOutcome) -> BTreeMap<String, [String; 2]> {
    outcome
        .bounds
        .box_map
        .iter()
        .map(|(name, iv)| {
            (name.clone(), [iv.lo().to_string(), iv.hi().to_string()])
        })
        .collect()
}

fn report_skeleton(input: &Path, outcome: &ProcessOutcome) -> ReportJson {
    ReportJson {
        input: input.display().to_string(),
        stages: outcome
            .timings
            .iter()
            .map(|t| StageJson { name: t.name.to_string(), millis: t.millis })
            .collect(),
        dropped: outcome
            .report
            .dropped
            .iter()
            .map(|(index, reason)| DroppedJson { index: *index, reason: reason.describe().to_string() })
            .collect(),
        warnings: outcome.report.warnings.clone(),
        contexts: outcome
            .contexts
            .iter()
            .map(|c| ContextJson {
                id: c.id(),
                expr: c.expr.to_string(),
                delta: c.bound.as_ref().map(render_scalar),
                source: source_tag(&c.source),
            })
            .collect(),
        bounds: bounds_json(outcome),
        verdict: None,
        exit_code: 0,
    }
}

struct FileResult {
    stdout: String,
    stderr: String,
    report: Option<ReportJson>,
    code: u8,
}

fn error_result(input: &Path, err: &anyhow::Error) -> FileResult {
    FileResult {
        stdout: String::new(),
        stderr: format!("error: {}: {err:#}\n", input.display()),
        report: Some(ReportJson {
            input: input.display().to_string(),
            stages: vec![],
            dropped: vec![],
            warnings: vec![],
            contexts: vec![],
            bounds: BTreeMap::new(),
            verdict: None,
            exit_code: EXIT_INPUT_ERROR,
        }),
        code: EXIT_INPUT_ERROR,
    }
}

fn verdict_json(verdict: &Verdict, prover_millis: u128) -> (VerdictJson, u8) {
    match verdict {
        Verdict::Proved => (
            VerdictJson {
                kind: "proved".into(),
                certified: None,
                point: None,
                reason: None,
                boxes: None,
                prover_millis: Some(prover_millis),
            },
            EXIT_PROVED,
        ),
        Verdict::PotentialCounterexample { point, certified } => (
            VerdictJson {
                kind: "counterexample".into(),
                certified: Some(*certified),
                point: Some(
                    point
                        .iter()
                        .map(|(k, v)| (k.clone(), render_scalar(v)))
                        .collect(),
                ),
                reason: None,
                boxes: None,
                prover_millis: Some(prover_millis),
            },
            EXIT_COUNTEREXAMPLE,
        ),
        Verdict::GaveUp { reason, stats } => (
            VerdictJson {
                kind: "gave_up".into(),
                certified: Some(false),
                point: stats.best_point.as_ref().map(|p| {
                    p.iter().map(|(k, v)| (k.clone(), render_scalar(v))).collect()
                }),
                reason: Some(
                    match reason {
                        GaveUpReason::UnboundedBox => "unbounded box",
                        GaveUpReason::Timeout => "timeout",
                        GaveUpReason::ResourceLimit => "resource limit",
                    }
                    .to_string(),
                ),
                boxes: Some(stats.boxes_processed),
                prover_millis: Some(prover_millis),
            },
            EXIT_GAVE_UP,
        ),
    }
}

fn describe_stages(outcome: &ProcessOutcome, out: &mut String) {
    for t in &outcome.timings {
        let _ = writeln!(out, "stage {}: {} ms", t.name, t.millis);
    }
    for (idx, reason) in &outcome.report.dropped {
        let _ = writeln!(out, "dropped assertion {idx}: {}", reason.describe());
    }
    for w in &outcome.report.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
}

fn describe_contexts(outcome: &ProcessOutcome, out: &mut String) {
    for c in &outcome.contexts {
        let delta = c
            .bound
            .as_ref()
            .map(render_scalar)
            .unwrap_or_else(|| "?".to_string());
        let _ = writeln!(
            out,
            "context {} delta={} source={} expr={}",
            c.id(),
            delta,
            source_tag(&c.source),
            c.expr
        );
    }
}

#[derive(Clone, Copy)]
enum ExternalTool {
    Fptaylor,
    Dreal,
    Metitarski,
}

fn parse_external(args: &[String]) -> Result<Vec<(ExternalTool, PathBuf)>> {
    args.iter()
        .map(|raw| {
            let (tool, path) = raw
                .split_once('=')
                .ok_or_else(|| anyhow!("--run-external wants TOOL=PATH, got '{raw}'"))?;
            let tool = match tool {
                "fptaylor" => ExternalTool::Fptaylor,
                "dreal" => ExternalTool::Dreal,
                "metitarski" => ExternalTool::Metitarski,
                other => return Err(anyhow!("unknown external tool '{other}'")),
            };
            Ok((tool, PathBuf::from(path)))
        })
        .collect()
}

fn run_binary(binary: &Path, args: &[&str], stdin_file: &Path) -> Result<String> {
    let output = std::process::Command::new(binary)
        .args(args)
        .arg(stdin_file)
        .output()
        .with_context(|| format!("running {}", binary.display()))?;
    let mut text = String::from_utf8_lossy(&output.stdout).into_owned();
    text.push_str(&String::from_utf8_lossy(&output.stderr));
    Ok(text)
}

fn prove_one(
    input: &Path,
    cfg: &PipelineConfig,
    externals: &[(ExternalTool, PathBuf)],
) -> FileResult {
    let text = match std::fs::read_to_string(input) {
        Ok(t) => t,
        Err(e) => return error_result(input, &anyhow!(e)),
    };

    // External rounding-error analysis becomes injected bounds.
    let mut cfg = cfg.clone();
    if let Some((_, fptaylor)) = externals
        .iter()
        .find(|(t, _)| matches!(t, ExternalTool::Fptaylor))
        .map(|(t, p)| (*t, p.clone()))
    {
        match inject_via_fptaylor(&text, &cfg, &fptaylor) {
            Ok(mut extra) => cfg.injected_bounds.append(&mut extra),
            Err(e) => return error_result(input, &e),
        }
    }

    let outcome = match pipeline::process(&text, &cfg) {
        Ok(o) => o,
        Err(e) => return error_result(input, &anyhow!(e)),
    };

    let mut stdout = String::new();
    let _ = writeln!(stdout, "== {}", input.display());
    describe_stages(&outcome, &mut stdout);
    describe_contexts(&outcome, &mut stdout);

    // An external decision procedure replaces the built-in prover when
    // requested; the first one that answers wins.
    for (tool, binary) in externals {
        let answer = match tool {
            ExternalTool::Fptaylor => continue,
            ExternalTool::Dreal => external_dreal(&outcome, binary),
            ExternalTool::Metitarski => external_metitarski(&outcome, binary),
        };
        match answer {
            Ok(answer) => {
                let (text, code) = match answer {
                    ProverAnswer::Proved => ("proved (external)".to_string(), EXIT_PROVED),
                    ProverAnswer::Refuted { model, delta } => {
                        let mut s = String::from("potential counterexample (external");
                        if delta {
                            s.push_str(", delta");
                        }
                        s.push(')');
                        for (name, value) in &model {
                            let _ = write!(s, " {name}={}", render_scalar(value));
                        }
                        (s, EXIT_COUNTEREXAMPLE)
                    }
                    ProverAnswer::Unknown => ("gave up (external)".to_string(), EXIT_GAVE_UP),
                };
                let _ = writeln!(stdout, "verdict: {text}");
                let mut report = report_skeleton(input, &outcome);
                report.exit_code = code;
                return FileResult { stdout, stderr: String::new(), report: Some(report), code };
            }
            Err(e) => {
                return error_result(input, &e);
            }
        }
    }

    let prover_start = std::time::Instant::now();
    let verdict = pipeline::prove(&outcome, &cfg);
    let prover_millis = prover_start.elapsed().as_millis();

    let (vjson, code) = verdict_json(&verdict, prover_millis);
    match &verdict {
        Verdict::Proved => {
            let _ = writeln!(stdout, "verdict: proved ({prover_millis} ms)");
        }
        Verdict::PotentialCounterexample { point, certified } => {
            let mut s = String::new();
            for (k, v) in point {
                let _ = write!(s, " {k}={}", render_scalar(v));
            }
            let _ = writeln!(
                stdout,
                "verdict: potential counterexample (certified={certified}){s} ({prover_millis} ms)"
            );
        }
        Verdict::GaveUp { reason, stats } => {
            let _ = writeln!(
                stdout,
                "verdict: gave up ({reason:?}, {} boxes, {prover_millis} ms)",
                stats.boxes_processed
            );
            if let Some(p) = &stats.best_point {
                let mut s = String::new();
                for (k, v) in p {
                    let _ = write!(s, " {k}={}", render_scalar(v));
                }
                let _ = writeln!(stdout, "best uncertified candidate:{s}");
            }
        }
    }

    let mut report = report_skeleton(input, &outcome);
    report.verdict = Some(vjson);
    report.exit_code = code;
    FileResult { stdout, stderr: String::new(), report: Some(report), code }
}

fn inject_via_fptaylor(
    text: &str,
    cfg: &PipelineConfig,
    binary: &Path,
) -> Result<Vec<(String, Scalar)>> {
    let outcome = pipeline::process(text, cfg).map_err(|e| anyhow!(e.to_string()))?;
    let mut injected = Vec::new();
    for ctx in &outcome.contexts {
        let exported = fpelim::export_fptaylor(&[&ctx.expr], &outcome.bounds.box_map);
        let dir = std::env::temp_dir();
        let path = dir.join(format!("fpvc-{}.txt", ctx.id()));
        std::fs::write(&path, exported)?;
        let output = run_binary(binary, &[], &path)?;
        let bound = fpelim::import_external_bound(&output)
            .map_err(|e| anyhow!("context {}: {e}", ctx.id()))?;
        injected.push((ctx.id(), bound));
    }
    Ok(injected)
}

fn external_dreal(outcome: &ProcessOutcome, binary: &Path) -> Result<ProverAnswer> {
    let exported =
        backends::export_dreal_smt2(&outcome.nvc, &outcome.bounds.box_map, &DrealConfig::default())
            .map_err(|e| anyhow!(e.to_string()))?;
    let path = std::env::temp_dir().join(format!("fpvc-{}.smt2", std::process::id()));
    std::fs::write(&path, exported)?;
    let text = run_binary(binary, &["--model"], &path)?;
    backends::parse_prover_answer(ProverTool::DReal, &text).map_err(|e| anyhow!(e.to_string()))
}

fn external_metitarski(outcome: &ProcessOutcome, binary: &Path) -> Result<ProverAnswer> {
    let exported =
        backends::export_metitarski_tptp(&outcome.nvc, &outcome.bounds.box_map, "nvc")
            .map_err(|e| anyhow!(e.to_string()))?;
    let path = std::env::temp_dir().join(format!("fpvc-{}.tptp", std::process::id()));
    std::fs::write(&path, exported)?;
    let text = run_binary(binary, &[], &path)?;
    backends::parse_prover_answer(ProverTool::MetiTarski, &text).map_err(|e| anyhow!(e.to_string()))
}

fn process_one(input: &Path, cfg: &PipelineConfig, args: &ProcessArgs, file_cfg: &FileConfig) -> FileResult {
    let text = match std::fs::read_to_string(input) {
        Ok(t) => t,
        Err(e) => return error_result(input, &anyhow!(e)),
    };
    let outcome = match pipeline::process(&text, cfg) {
        Ok(o) => o,
        Err(e) => return error_result(input, &anyhow!(e)),
    };

    let mut stderr = String::new();
    describe_stages(&outcome, &mut stderr);
    describe_contexts(&outcome, &mut stderr);

    let rendered = match args.emit {
        None => textfmt::write_corpus(&outcome.nvc),
        Some(EmitFormat::Fptaylor) => {
            let exprs: Vec<&fpvc::Expr> = outcome.contexts.iter().map(|c| &c.expr).collect();
            fpelim::export_fptaylor(&exprs, &outcome.pre_elimination.box_map())
        }
        Some(EmitFormat::Dreal) => {
            let mut dreal_cfg = DrealConfig::default();
            if let Some(d) = &file_cfg.delta {
                dreal_cfg.delta = d.clone();
            }
            if let Some(d) = &args.delta {
                match parse_scalar(d) {
                    Some(v) => dreal_cfg.delta = v,
                    None => return error_result(input, &anyhow!("unparsable --delta '{d}'")),
                }
            }
            if let Some(m) = file_cfg.max_int_digits {
                dreal_cfg.max_int_digits = m;
            }
            if let Some(m) = args.max_int_digits {
                dreal_cfg.max_int_digits = m;
            }
            if let Some(PiModeArg::Midpoint) = args.pi_mode {
                dreal_cfg.pi_mode = PiMode::Midpoint;
            }
            match backends::export_dreal_smt2(&outcome.nvc, &outcome.bounds.box_map, &dreal_cfg) {
                Ok(t) => t,
                Err(e) => return error_result(input, &anyhow!(e.to_string())),
            }
        }
        Some(EmitFormat::Metitarski) => {
            let name = input
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("nvc")
                .replace(|c: char| !c.is_ascii_alphanumeric(), "_");
            match backends::export_metitarski_tptp(&outcome.nvc, &outcome.bounds.box_map, &name) {
                Ok(t) => t,
                Err(e) => return error_result(input, &anyhow!(e.to_string())),
            }
        }
    };

    let stdout = if let Some(path) = &args.output {
        if let Err(e) = std::fs::write(path, &rendered) {
            return error_result(input, &anyhow!(e));
        }
        String::new()
    } else {
        rendered
    };

    let mut report = report_skeleton(input, &outcome);
    report.exit_code = EXIT_PROVED;
    FileResult { stdout, stderr, report: Some(report), code: EXIT_PROVED }
}

fn bounds_one(input: &Path, cfg: &PipelineConfig) -> FileResult {
    let text = match std::fs::read_to_string(input) {
        Ok(t) => t,
        Err(e) => return error_result(input, &anyhow!(e)),
    };
    let (nvc, derived) = match pipeline::derive_only(&text, cfg.prec) {
        Ok(pair) => pair,
        Err(e) => return error_result(input, &anyhow!(e)),
    };
    let mut stdout = String::new();
    let mut code = EXIT_PROVED;
    match derived {
        Err(BoundsError::EmptyBox(name)) => {
            let _ = writeln!(stdout, "empty box: variable {name} has no feasible values");
        }
        Ok(result) => {
            let mut names: Vec<&String> = result.box_map.keys().collect();
            names.sort();
            for name in names {
                let iv = &result.box_map[name];
                let _ = writeln!(stdout, "{name} ∈ {iv}");
                if !iv.is_bounded() {
                    code = EXIT_WARN;
                }
            }
            let _ = nvc;
        }
    }
    FileResult { stdout, stderr: String::new(), report: None, code }
}

fn run_parallel<F>(inputs: &[PathBuf], jobs: usize, f: F) -> Vec<FileResult>
where
    F: Fn(&Path) -> FileResult + Sync,
{
    if jobs <= 1 || inputs.len() <= 1 {
        return inputs.iter().map(|p| f(p)).collect();
    }
    let results: Mutex<Vec<Option<FileResult>>> =
        Mutex::new((0..inputs.len()).map(|_| None).collect());
    let next = std::sync::atomic::AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(inputs.len()) {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                if idx >= inputs.len() {
                    break;
                }
                let result = f(&inputs[idx]);
                results.lock().unwrap()[idx] = Some(result);
            });
        }
    });
    results
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("worker finished"))
        .collect()
}

fn finish(results: Vec<FileResult>, report_path: Option<&Path>) -> Result<u8> {
    let mut code = EXIT_PROVED;
    let mut reports = Vec::new();
    for r in &results {
        print!("{}", r.stdout);
        eprint!("{}", r.stderr);
        code = code.max(r.code);
    }
    for r in results {
        if let Some(j) = r.report {
            reports.push(j);
        }
    }
    if let Some(path) = report_path {
        let json = if reports.len() == 1 {
            serde_json::to_string_pretty(&reports[0])?
        } else {
            serde_json::to_string_pretty(&reports)?
        };
        std::fs::write(path, json).with_context(|| format!("writing report {}", path.display()))?;
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Prove(args) => run_prove(args),
        Command::Process(args) => run_process(args),
        Command::Bounds(args) => run_bounds(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT_ERROR)
        }
    }
}

fn run_prove(args: &ProveArgs) -> Result<u8> {
    let file_cfg = match &args.common.config {
        Some(p) => load_config(p)?,
        None => FileConfig::default(),
    };
    let cfg = build_pipeline_config(
        &args.common,
        &file_cfg,
        args.timeout,
        args.max_depth,
        args.min_box_width.as_deref(),
    )?;
    let externals = parse_external(&args.run_external)?;
    let results = run_parallel(&args.common.inputs, args.common.jobs, |p| {
        prove_one(p, &cfg, &externals)
    });
    finish(results, args.common.report.as_deref())
}

fn run_process(args: &ProcessArgs) -> Result<u8> {
    let file_cfg = match &args.common.config {
        Some(p) => load_config(p)?,
        None => FileConfig::default(),
    };
    let cfg = build_pipeline_config(&args.common, &file_cfg, None, None, None)?;
    let results = run_parallel(&args.common.inputs, args.common.jobs, |p| {
        process_one(p, &cfg, args, &file_cfg)
    });
    finish(results, args.common.report.as_deref())
}

fn run_bounds(args: &BoundsArgs) -> Result<u8> {
    let file_cfg = match &args.common.config {
        Some(p) => load_config(p)?,
        None => FileConfig::default(),
    };
    let cfg = build_pipeline_config(&args.common, &file_cfg, None, None, None)?;
    let results = run_parallel(&args.common.inputs, args.common.jobs, |p| bounds_one(p, &cfg));
    finish(results, args.common.report.as_deref())
}
