//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on runtime or budget
//! errors. Every artifact starts with `# `-prefixed lines holding the
//! resolved configuration as JSON, which all readers skip.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::experiments::{
    sweep, Axis, DetectionStatistic, SweepConfig, SweepGrid, SweepResult, TrialKind,
    DEFAULT_TRIAL_BUDGET,
};
use crate::model::io::{
    read_graph, read_hypergraph, write_comments, write_graph, write_hypergraph,
};
use crate::model::{apply_noise, project, sample_hypergraph, ModelParams, NoiseOrder, Prefactors};
use crate::oracle;
use crate::reconstruct::{clique_estimator_capped, recon_metrics, DEFAULT_CLIQUE_CAP};
use crate::stats::{
    clique_count, clique_count_threshold, edge_count, edge_count_threshold_with, StatisticName,
    TestOutcome, ThresholdRule,
};
use crate::thresholds::{
    classify_region, detection_boundary, false_positive_exponent, reconstruction_boundary,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "hyperproj",
    version,
    about = "Noisy hypergraph projection laboratory"
)]
pub struct Cli {
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a random d-uniform hypergraph.
    Sample(SampleArgs),
    /// Project a hypergraph file to its clique-expansion graph.
    Project(ProjectArgs),
    /// Pass a graph file through the noisy channel.
    Noise(NoiseArgs),
    /// Run detection trials, or test a single graph file.
    Detect(DetectArgs),
    /// Run the clique estimator on a graph file, or run reconstruction trials.
    Reconstruct(ReconstructArgs),
    /// Print the phase boundaries and the region map.
    Thresholds(ThresholdArgs),
    /// Exact enumeration at tiny sizes.
    Oracle(OracleArgs),
    /// Monte Carlo sweep over a parameter grid.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Model parameters as exponents with optional direct-rate overrides.
#[derive(Debug, Clone, Args, Serialize)]
pub struct ModelArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: usize,
    /// s = c_s n^{-(d-1)+delta}
    #[arg(long)]
    pub delta: Option<f64>,
    /// p = c_p n^{-1+alpha}
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// q = c_q n^{-1+beta}
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub c_s: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c_p: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c_q: f64,
    /// Hyperedge probability; overrides --delta.
    #[arg(long)]
    pub s: Option<f64>,
    /// Edge keep probability; overrides --alpha.
    #[arg(long)]
    pub p: Option<f64>,
    /// Spurious edge probability; overrides --beta.
    #[arg(long)]
    pub q: Option<f64>,
    /// Accept q > p.
    #[arg(long)]
    pub allow_q_above_p: bool,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub seed: u64,
    /// Output file (stdout if absent).
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProjectArgs {
    /// Hypergraph file ("-" for stdin).
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NoiseArgs {
    /// Graph file, usually a projection ("-" for stdin).
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub c_p: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c_q: f64,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub allow_q_above_p: bool,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatisticArg {
    EdgeCount,
    CliqueCountMatchedNull,
}

impl From<StatisticArg> for DetectionStatistic {
    fn from(s: StatisticArg) -> Self {
        match s {
            StatisticArg::EdgeCount => DetectionStatistic::EdgeCount,
            StatisticArg::CliqueCountMatchedNull => DetectionStatistic::CliqueCountMatchedNull,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Verbatim,
    Calibrated,
}

impl From<RuleArg> for ThresholdRule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Verbatim => ThresholdRule::Verbatim,
            RuleArg::Calibrated => ThresholdRule::Calibrated,
        }
    }
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value = "edge-count")]
    pub statistic: StatisticArg,
    #[arg(long, value_enum, default_value = "verbatim")]
    pub threshold_rule: RuleArg,
    /// Test this graph file instead of running trials.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Required unless --graph is given.
    #[arg(long, required_unless_present = "graph")]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Include per-trial records (JSON only).
    #[arg(long)]
    pub verbose: bool,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    /// Hyperedge arity.
    #[arg(long)]
    pub d: usize,
    /// Observation graph; writes the estimate as a hypergraph file.
    #[arg(long, conflicts_with = "n")]
    pub graph: Option<PathBuf>,
    /// True hypergraph, to report reconstruction metrics (needs --graph and --s).
    #[arg(long, requires = "graph")]
    pub truth: Option<PathBuf>,
    /// Trial mode: number of vertices.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub c_s: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c_p: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c_q: f64,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub allow_q_above_p: bool,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    /// Required in trial mode.
    #[arg(long, required_unless_present = "graph")]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_CLIQUE_CAP)]
    pub clique_cap: u64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub verbose: bool,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub delta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Also classify this point and evaluate the false-positive exponent.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Text when absent.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleQuantity {
    Marginal,
    Null,
    Prior,
    LikelihoodRatio,
    Tv,
    SecondMoment,
    Posterior,
    Overlap,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, value_enum)]
    pub quantity: OracleQuantity,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub s: f64,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub q: f64,
    /// Observation for likelihood-ratio and posterior.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepStatistic {
    EdgeCount,
    CliqueCountMatchedNull,
    Reconstruction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    N,
    Delta,
    Alpha,
    Beta,
}

impl From<AxisArg> for Axis {
    fn from(a: AxisArg) -> Self {
        match a {
            AxisArg::N => Axis::N,
            AxisArg::Delta => Axis::Delta,
            AxisArg::Alpha => Axis::Alpha,
            AxisArg::Beta => Axis::Beta,
        }
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub delta: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub beta: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub c_s: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c_p: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c_q: f64,
    /// Axis nesting from outermost to innermost; affects row order only.
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "n,delta,alpha,beta"
    )]
    pub axis_order: Vec<AxisArg>,
    #[arg(long, value_enum, default_value = "edge-count")]
    pub statistic: SweepStatistic,
    #[arg(long, value_enum, default_value = "verbatim")]
    pub threshold_rule: RuleArg,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_CLIQUE_CAP)]
    pub clique_cap: u64,
    /// Largest cells x trials accepted.
    #[arg(long, default_value_t = DEFAULT_TRIAL_BUDGET)]
    pub budget: u64,
    #[arg(long)]
    pub allow_q_above_p: bool,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub verbose: bool,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

/// Failure of a CLI run, already classified by exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Entry point usable in-process. Returns the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let json_errors = wants_json(&argv);
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            report(stderr, json_errors, "Usage", &e.to_string());
            return EXIT_USAGE;
        }
    };

    let result = match cli.threads {
        Some(0) => Err(Failure::Usage("--threads must be at least 1".into())),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Failure::Runtime(Error::InvalidParams(format!("thread pool: {e}"))))
            .and_then(|pool| {
                // The sinks are not Send, so buffer inside the pool and copy out.
                let (mut out, mut err) = (Vec::new(), Vec::new());
                let r = pool.install(|| dispatch(&cli.command, &mut out, &mut err));
                let _ = stdout.write_all(&out).and_then(|_| stdout.flush());
                let _ = stderr.write_all(&err);
                r
            }),
        None => dispatch(&cli.command, stdout, stderr),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            report(stderr, json_errors, "Usage", &msg);
            EXIT_USAGE
        }
        // A closed downstream pipe is how `| head` ends; not an error.
        Err(Failure::Runtime(Error::Io(e))) if e.kind() == std::io::ErrorKind::BrokenPipe => {
            EXIT_OK
        }
        Err(Failure::Runtime(e)) => {
            report(stderr, json_errors, e.kind(), &e.to_string());
            EXIT_RUNTIME
        }
    }
}

fn wants_json(argv: &[OsString]) -> bool {
    argv.windows(2)
        .any(|w| w[0] == "--format" && w[1] == "json")
        || argv.iter().any(|a| a == "--format=json")
}

fn report(stderr: &mut dyn Write, json_errors: bool, kind: &str, msg: &str) {
    if json_errors {
        let body = json!({ "error": { "kind": kind, "message": msg.trim_end() } });
        let _ = writeln!(stderr, "{body}");
    } else {
        let msg = msg.trim_end();
        if kind == "Usage" {
            let _ = writeln!(stderr, "{msg}");
        } else {
            let _ = writeln!(stderr, "error: {msg}");
        }
    }
}

fn dispatch(cmd: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    match cmd {
        Command::Sample(a) => cmd_sample(a, stdout, stderr),
        Command::Project(a) => cmd_project(a, stdout),
        Command::Noise(a) => cmd_noise(a, stdout, stderr),
        Command::Detect(a) => cmd_detect(a, stdout, stderr),
        Command::Reconstruct(a) => cmd_reconstruct(a, stdout, stderr),
        Command::Thresholds(a) => cmd_thresholds(a, stdout),
        Command::Oracle(a) => cmd_oracle(a, stdout),
        Command::Sweep(a) => cmd_sweep(a, stdout),
    }
}

/// Output sink: a file if given, stdout otherwise.
fn with_output(
    out: &Option<PathBuf>,
    stdout: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> Result<()>,
) -> CliResult<()> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            f(&mut w)?;
            w.flush()?;
        }
        None => {
            f(stdout)?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn open_input(path: &Path) -> CliResult<Box<dyn BufRead>> {
    if path == Path::new("-") {
        Ok(Box::new(BufReader::new(std::io::stdin())))
    } else {
        Ok(Box::new(BufReader::new(File::open(path).map_err(|e| {
            Error::InvalidParams(format!("cannot open {}: {e}", path.display()))
        })?)))
    }
}

/// Reads a whole input, returning its comment lines (without `# `) and text.
fn slurp(path: &Path) -> CliResult<(Vec<String>, String)> {
    let mut text = String::new();
    let mut r = open_input(path)?;
    r.read_to_string(&mut text)?;
    let comments = text
        .lines()
        .filter_map(|l| l.strip_prefix('#'))
        .map(|l| l.strip_prefix(' ').unwrap_or(l).to_string())
        .collect();
    Ok((comments, text))
}

fn header(command: &str, body: serde_json::Value) -> String {
    json!({ "tool": "hyperproj", "version": VERSION, "command": command, "config": body })
        .to_string()
}

struct Rates {
    s: Option<f64>,
    p: Option<f64>,
    q: Option<f64>,
}

/// Resolves exponents, then applies direct-rate overrides with a notice.
#[allow(clippy::too_many_arguments)]
fn resolve_model(
    n: usize,
    d: usize,
    delta: Option<f64>,
    alpha: f64,
    beta: Option<f64>,
    c: Prefactors,
    rates: Rates,
    allow_q_above_p: bool,
    stderr: &mut dyn Write,
) -> CliResult<ModelParams> {
    if delta.is_none() && rates.s.is_none() {
        return Err(Failure::Usage("one of --delta or --s is required".into()));
    }
    if beta.is_none() && rates.q.is_none() {
        return Err(Failure::Usage("one of --beta or --q is required".into()));
    }
    for (flag, rate, exponent) in [
        ("--s", rates.s, delta.map(|_| "--delta")),
        ("--p", rates.p, Some("--alpha")),
        ("--q", rates.q, beta.map(|_| "--beta")),
    ] {
        if let (Some(v), Some(exp)) = (rate, exponent) {
            let _ = writeln!(stderr, "note: {flag} {v} overrides {exp}");
        }
    }
    let order = if allow_q_above_p {
        NoiseOrder::Unchecked
    } else {
        NoiseOrder::Enforced
    };
    // Placeholder exponents are replaced by the overrides right after.
    let base = ModelParams::resolve_with_order(
        n,
        d,
        delta.unwrap_or(0.0),
        alpha,
        beta.unwrap_or(0.0),
        c,
        NoiseOrder::Unchecked,
    )?;
    Ok(base.override_rates(rates.s, rates.p, rates.q, order)?)
}

fn model_from_args(m: &ModelArgs, stderr: &mut dyn Write) -> CliResult<ModelParams> {
    let n =
        m.n.ok_or_else(|| Failure::Usage("--n is required".into()))?;
    resolve_model(
        n,
        m.d,
        m.delta,
        m.alpha,
        m.beta,
        Prefactors {
            c_s: m.c_s,
            c_p: m.c_p,
            c_q: m.c_q,
        },
        Rates {
            s: m.s,
            p: m.p,
            q: m.q,
        },
        m.allow_q_above_p,
        stderr,
    )
}

fn cmd_sample(a: &SampleArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let params = model_from_args(&a.model, stderr)?;
    let h = sample_hypergraph(&params, a.seed)?;
    let head = header("sample", json!({ "params": params, "seed": a.seed }));
    with_output(&a.out, stdout, |w| {
        write_comments(&mut *w, &[head])?;
        write_hypergraph(w, &h)
    })
}

fn cmd_project(a: &ProjectArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let (mut comments, text) = slurp(&a.input)?;
    let h = read_hypergraph(text.as_bytes())?;
    let g = project(&h);
    comments.push(header("project", json!({ "n": h.n(), "d": h.d() })));
    with_output(&a.out, stdout, |w| {
        write_comments(&mut *w, &comments)?;
        write_graph(w, &g)
    })
}

fn cmd_noise(a: &NoiseArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let (mut comments, text) = slurp(&a.input)?;
    let g = read_graph(text.as_bytes())?;
    if a.alpha.is_none() && a.p.is_none() {
        return Err(Failure::Usage("one of --alpha or --p is required".into()));
    }
    // The channel only needs p and q; d is irrelevant and fixed at 2 here.
    let params = resolve_model(
        g.n().max(2),
        2,
        Some(0.0),
        a.alpha.unwrap_or(1.0),
        a.beta,
        Prefactors {
            c_s: 1.0,
            c_p: a.c_p,
            c_q: a.c_q,
        },
        Rates {
            s: None,
            p: a.p,
            q: a.q,
        },
        a.allow_q_above_p,
        stderr,
    )?;
    let noisy = apply_noise(&g, params.p, params.q, a.seed);
    comments.push(header(
        "noise",
        json!({ "n": g.n(), "alpha": params.alpha, "beta": params.beta, "p": params.p, "q": params.q, "seed": a.seed }),
    ));
    with_output(&a.out, stdout, |w| {
        write_comments(&mut *w, &comments)?;
        write_graph(w, &noisy)
    })
}

fn write_sweep(
    res: &SweepResult,
    command: &str,
    format: Format,
    out: &Option<PathBuf>,
    stdout: &mut dyn Write,
) -> CliResult<()> {
    let head = header(
        command,
        serde_json::to_value(&res.config).map_err(Error::from)?,
    );
    with_output(out, stdout, |w| match format {
        Format::Csv => {
            write_comments(&mut *w, &[head])?;
            res.write_csv(w)
        }
        Format::Json => {
            let doc = json!({ "tool": "hyperproj", "version": VERSION, "command": command, "result": res });
            serde_json::to_writer_pretty(&mut *w, &doc)?;
            writeln!(w)?;
            Ok(())
        }
    })
}

fn one_cell(params: &ModelParams) -> SweepGrid {
    let mut grid = SweepGrid::new(
        params.d,
        vec![params.n],
        vec![params.delta],
        vec![params.alpha],
        vec![params.beta],
    );
    grid.prefactors = Prefactors {
        c_s: params.c_s,
        c_p: params.c_p,
        c_q: params.c_q,
    };
    grid
}

fn cmd_detect(a: &DetectArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let rule: ThresholdRule = a.threshold_rule.into();
    if let Some(path) = &a.graph {
        let (_, text) = slurp(path)?;
        let g = read_graph(text.as_bytes())?;
        let mut m = a.model.clone();
        m.n = Some(g.n());
        let params = model_from_args(&m, stderr)?;
        let outcome = match a.statistic {
            StatisticArg::EdgeCount => TestOutcome::new(
                StatisticName::EdgeCount,
                edge_count(&g) as f64,
                edge_count_threshold_with(&params, rule)?,
            ),
            StatisticArg::CliqueCountMatchedNull => TestOutcome::new(
                StatisticName::CliqueCount,
                clique_count(&g, params.d) as f64,
                clique_count_threshold(&params)?,
            ),
        };
        let doc = json!({ "tool": "hyperproj", "version": VERSION, "command": "detect", "params": params, "outcome": outcome });
        return with_output(&a.out, stdout, |w| match a.format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *w, &doc)?;
                writeln!(w)?;
                Ok(())
            }
            Format::Csv => {
                write_comments(&mut *w, &[doc.to_string()])?;
                let mut c = csv::Writer::from_writer(w);
                c.write_record(["statistic", "value", "threshold", "decision"])?;
                c.write_record([
                    format!("{:?}", outcome.statistic_name),
                    outcome.value.to_string(),
                    outcome.threshold.to_string(),
                    format!("{:?}", outcome.decision),
                ])?;
                c.flush()?;
                Ok(())
            }
        });
    }
    let params = model_from_args(&a.model, stderr)?;
    let seed = a.seed.expect("clap enforces --seed");
    let mut cfg = SweepConfig::new(
        one_cell(&params),
        a.trials,
        TrialKind::Detection(a.statistic.into()),
        seed,
    );
    cfg.threshold_rule = rule;
    cfg.allow_q_above_p = a.model.allow_q_above_p;
    let res = sweep(&cfg, a.verbose && a.format == Format::Json)?;
    write_sweep(&res, "detect", a.format, &a.out, stdout)
}

fn cmd_reconstruct(
    a: &ReconstructArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> CliResult<()> {
    if let Some(path) = &a.graph {
        let (mut comments, text) = slurp(path)?;
        let g = read_graph(text.as_bytes())?;
        let estimate = clique_estimator_capped(&g, a.d, a.clique_cap)?;
        if let Some(truth_path) = &a.truth {
            let s =
                a.s.ok_or_else(|| Failure::Usage("--truth needs --s for the normalizer".into()))?;
            let (_, truth_text) = slurp(truth_path)?;
            let truth = read_hypergraph(truth_text.as_bytes())?;
            let metrics = recon_metrics(&truth, &estimate, s)?;
            let _ = writeln!(
                stderr,
                "{}",
                serde_json::to_string(&metrics).map_err(Error::from)?
            );
        }
        comments.push(header(
            "reconstruct",
            json!({ "d": a.d, "clique_cap": a.clique_cap }),
        ));
        return with_output(&a.out, stdout, |w| {
            write_comments(&mut *w, &comments)?;
            write_hypergraph(w, &estimate)
        });
    }
    let n =
        a.n.ok_or_else(|| Failure::Usage("either --graph or --n is required".into()))?;
    let params = resolve_model(
        n,
        a.d,
        a.delta,
        a.alpha,
        a.beta,
        Prefactors {
            c_s: a.c_s,
            c_p: a.c_p,
            c_q: a.c_q,
        },
        Rates {
            s: a.s,
            p: a.p,
            q: a.q,
        },
        a.allow_q_above_p,
        stderr,
    )?;
    let seed = a.seed.expect("clap enforces --seed");
    let mut cfg = SweepConfig::new(one_cell(&params), a.trials, TrialKind::Reconstruction, seed);
    cfg.clique_cap = a.clique_cap;
    cfg.allow_q_above_p = a.allow_q_above_p;
    let res = sweep(&cfg, a.verbose && a.format == Format::Json)?;
    write_sweep(&res, "reconstruct", a.format, &a.out, stdout)
}

#[derive(Serialize)]
struct RegionRow {
    delta: f64,
    beta: f64,
    region: &'static str,
}

fn cmd_thresholds(a: &ThresholdArgs, stdout: &mut dyn Write) -> CliResult<()> {
    if !(0.0..1.0).contains(&a.delta) || !(0.0..=1.0).contains(&a.alpha) {
        return Err(Failure::Runtime(Error::InvalidParams(format!(
            "need delta in [0, 1) and alpha in [0, 1], got {} and {}",
            a.delta, a.alpha
        ))));
    }
    if a.d < 2 {
        return Err(Failure::Runtime(Error::UnsupportedArity(a.d)));
    }
    let rb = reconstruction_boundary(a.d, a.delta);
    let det = detection_boundary(a.delta, a.alpha);
    let ticks: Vec<f64> = (1..10).map(|i| i as f64 / 10.0).collect();
    let table: Vec<RegionRow> = if a.d >= 3 && a.alpha == 1.0 {
        ticks
            .iter()
            .rev()
            .flat_map(|&beta| {
                ticks.iter().map(move |&delta| RegionRow {
                    delta,
                    beta,
                    region: classify_region(a.d, delta, beta, 1.0)
                        .map(|r| r.short())
                        .unwrap_or("?"),
                })
            })
            .collect()
    } else {
        Vec::new()
    };
    let point = match a.beta {
        Some(beta) => {
            let region = classify_region(a.d, a.delta, beta, a.alpha)
                .ok()
                .map(|r| r.short());
            let fpe = false_positive_exponent(a.d, a.delta, beta).ok();
            Some(json!({ "beta": beta, "region": region, "false_positive_exponent": fpe }))
        }
        None => None,
    };
    let config = json!({ "d": a.d, "delta": a.delta, "alpha": a.alpha, "beta": a.beta });
    match a.format {
        Some(Format::Json) => {
            let doc = json!({
                "tool": "hyperproj", "version": VERSION, "command": "thresholds", "config": config,
                "delta_star": rb.delta_star, "beta_star": rb.beta_star, "detection_boundary": det,
                "point": point, "region_table": table,
            });
            serde_json::to_writer_pretty(&mut *stdout, &doc).map_err(Error::from)?;
            writeln!(stdout)?;
        }
        Some(Format::Csv) => {
            write_comments(
                &mut *stdout,
                &[header(
                    "thresholds",
                    json!({ "config": config, "delta_star": rb.delta_star, "beta_star": rb.beta_star, "detection_boundary": det }),
                )],
            )?;
            let mut c = csv::Writer::from_writer(&mut *stdout);
            for row in &table {
                c.serialize(row).map_err(Error::from)?;
            }
            c.flush()?;
        }
        None => {
            writeln!(
                stdout,
                "hyperproj {VERSION}: d = {}, delta = {}, alpha = {}",
                a.d, a.delta, a.alpha
            )?;
            writeln!(stdout, "delta* = {}", rb.delta_star)?;
            writeln!(stdout, "beta*  = {}", rb.beta_star)?;
            writeln!(stdout, "edge-count detection for beta < {det}")?;
            if let Some(p) = &point {
                writeln!(stdout, "point: {p}")?;
            }
            if !table.is_empty() {
                writeln!(stdout, "region map (rows beta, columns delta):")?;
                write!(stdout, "{:>6}", "b\\d")?;
                for t in &ticks {
                    write!(stdout, "{t:>5}")?;
                }
                writeln!(stdout)?;
                for row in table.chunks(ticks.len()) {
                    write!(stdout, "{:>6}", row[0].beta)?;
                    for cell in row {
                        let label = if cell.region == "boundary" {
                            "-"
                        } else {
                            cell.region
                        };
                        write!(stdout, "{label:>5}")?;
                    }
                    writeln!(stdout)?;
                }
            }
        }
    }
    Ok(())
}

fn cmd_oracle(a: &OracleArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let params = ModelParams::from_rates(a.n, a.d, a.s, a.p, a.q)?;
    let read_obs = || -> CliResult<crate::model::Graph> {
        let path = a
            .graph
            .as_ref()
            .ok_or_else(|| Failure::Usage("this quantity needs --graph".into()))?;
        let (_, text) = slurp(path)?;
        Ok(read_graph(text.as_bytes())?)
    };
    let value = match a.quantity {
        OracleQuantity::Marginal => {
            serde_json::to_value(oracle::exact_planted_marginal(&params)?.to_fixture(&params))
        }
        OracleQuantity::Null => {
            serde_json::to_value(oracle::exact_null(a.n, a.q)?.to_fixture(&params))
        }
        OracleQuantity::Prior => {
            serde_json::to_value(oracle::exact_prior(&params)?.to_fixture(&params))
        }
        OracleQuantity::Posterior => serde_json::to_value(
            oracle::exact_posterior(&read_obs()?, &params)?.to_fixture(&params),
        ),
        OracleQuantity::LikelihoodRatio => Ok(
            json!({ "likelihood_ratio": oracle::exact_likelihood_ratio(&read_obs()?, &params)? }),
        ),
        OracleQuantity::Tv => Ok(json!({
            "tv": oracle::exact_tv(&params)?,
        })),
        OracleQuantity::SecondMoment => serde_json::to_value(oracle::exact_second_moment(&params)?),
        OracleQuantity::Overlap => {
            let seed = a
                .seed
                .ok_or_else(|| Failure::Usage("overlap sampling needs --seed".into()))?;
            let o = oracle::exact_overlap_distribution(&params, seed, a.trials)?;
            Ok(json!({
                "histogram": o.histogram(),
                "mean_overlap": o.mean_overlap(),
                "mean_truth_size": o.mean_truth_size(),
            }))
        }
    }
    .map_err(Error::from)?;
    with_output(&a.out, stdout, |w| {
        serde_json::to_writer_pretty(&mut *w, &value)?;
        writeln!(w)?;
        Ok(())
    })
}

fn cmd_sweep(a: &SweepArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let order: Vec<Axis> = a.axis_order.iter().map(|&x| x.into()).collect();
    let mut seen = order.clone();
    seen.sort_by_key(|x| *x as usize);
    seen.dedup();
    if order.len() != 4 || seen.len() != 4 {
        return Err(Failure::Usage(
            "--axis-order must list n, delta, alpha, beta once each".into(),
        ));
    }
    let mut grid = SweepGrid::new(
        a.d,
        a.n.clone(),
        a.delta.clone(),
        a.alpha.clone(),
        a.beta.clone(),
    )
    .with_order([order[0], order[1], order[2], order[3]]);
    grid.prefactors = Prefactors {
        c_s: a.c_s,
        c_p: a.c_p,
        c_q: a.c_q,
    };
    let kind = match a.statistic {
        SweepStatistic::EdgeCount => TrialKind::Detection(DetectionStatistic::EdgeCount),
        SweepStatistic::CliqueCountMatchedNull => {
            TrialKind::Detection(DetectionStatistic::CliqueCountMatchedNull)
        }
        SweepStatistic::Reconstruction => TrialKind::Reconstruction,
    };
    let mut cfg = SweepConfig::new(grid, a.trials, kind, a.seed);
    cfg.threshold_rule = a.threshold_rule.into();
    cfg.clique_cap = a.clique_cap;
    cfg.trial_budget = a.budget;
    cfg.allow_q_above_p = a.allow_q_above_p;
    let res = sweep(&cfg, a.verbose && a.format == Format::Json)?;
    write_sweep(&res, "sweep", a.format, &a.out, stdout)
}
