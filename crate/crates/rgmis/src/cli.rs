//! Command-line front end.
//!
//! Exit codes: 0 when every checked claim holds, 1 when one fails, 2 for
//! usage and configuration errors, 3 when a run is refused as too large.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rgmis_core::consistency::TraceFault;
use rgmis_core::engines::early_break_run;
use rgmis_core::expectation::{
    exact_edge_expectations, exhaustive_supermartingale_audit, trial_ranks, AuditOptions, DEFAULT_EXHAUSTIVE_BOUND,
};
use rgmis_core::Graph;
use serde::Deserialize;
use thiserror::Error;

use crate::edgelist::save_edge_list;
use crate::parallel;
use crate::report::{
    audit_csv, audit_report, consistency_report, exact_report, mc_report, summary_csv, summary_rows, ConsistencyOutcome,
    Report, ReportError, SummaryRow,
};
use crate::source::{GeneratorSpec, GraphSource, SourceError};
use crate::trace::{format_trace, looks_like_trace, parse_trace};

const DEFAULT_CONSISTENCY_TRIALS: u64 = 100;

#[derive(Debug, Parser)]
#[command(name = "rgmis", version, about = "Randomized greedy MIS: engines, exact oracles and experiment runs")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Default, Args)]
pub struct GlobalArgs {
    /// Master seed for generators and orderings [default: 0]
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of seeded orderings (required for `--mode mc`)
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    /// Largest vertex count allowed for exhaustive enumeration [default: 9]
    #[arg(long, global = true)]
    pub exhaustive_bound: Option<usize>,
    /// Output file (stdout when absent)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format [default: json]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// TOML file with the same keys as the flags; flags win
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads (results do not depend on it)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated graph as an edge list
    Gen {
        /// path, cycle, complete, complete_bipartite, star or er
        kind: String,
        /// Sizes (`bipartite 2 3`) or `n p` for er
        params: Vec<String>,
    },
    /// Check the expectation bounds on one graph
    Verify(VerifyArgs),
    /// Cross-check the engines on seeded orderings
    Consistency(ConsistencyArgs),
    /// Summarize reports or traces written by earlier runs
    Report {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Edge-list file or generator spec (p3, k4, cycle:5, er:50:0.1:3, ...)
    #[arg(long)]
    pub graph: Option<String>,
    #[arg(long, value_enum)]
    pub mode: Option<VerifyMode>,
    /// Also write the audit rows as CSV (audit mode)
    #[arg(long)]
    pub audit_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConsistencyArgs {
    #[arg(long)]
    pub graph: Option<String>,
    /// Test hook: drop the last query edge into this vertex
    #[arg(long)]
    pub inject_fault: Option<usize>,
    /// Write the trace of the first trial (or of the failing one)
    #[arg(long)]
    pub trace_out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    Exact,
    Mc,
    Audit,
    Consistency,
}

/// Contents of `--config`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub graph: Option<String>,
    pub mode: Option<VerifyMode>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub exhaustive_bound: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
}

/// Flags merged over the config file.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub source: Option<GraphSource>,
    pub mode: VerifyMode,
    pub trials: Option<u64>,
    pub seed: u64,
    pub exhaustive_bound: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("refused: {0}")]
    Refusal(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Refusal(_) => 3,
        }
    }
}

impl From<SourceError> for CliError {
    fn from(e: SourceError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<ReportError> for CliError {
    fn from(e: ReportError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<rgmis_core::Error> for CliError {
    fn from(e: rgmis_core::Error) -> Self {
        use rgmis_core::Error as E;
        match e {
            E::ExhaustiveBoundExceeded { .. } | E::CompletionSpaceTooLarge { .. } => CliError::Refusal(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

/// Whether the claims checked by a command held.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    Violated,
}

impl Outcome {
    fn of(report: &Report) -> Self {
        if report.holds() {
            Outcome::Holds
        } else {
            Outcome::Violated
        }
    }
}

fn read_config(path: &Path) -> Result<FileConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

impl ExperimentConfig {
    fn resolve(
        global: &GlobalArgs,
        file: FileConfig,
        graph: Option<&str>,
        mode: Option<VerifyMode>,
    ) -> Result<Self, CliError> {
        let source = match graph.map(str::to_string).or(file.graph) {
            Some(s) => Some(s.parse::<GraphSource>()?),
            None => None,
        };
        Ok(ExperimentConfig {
            source,
            mode: mode.or(file.mode).unwrap_or(VerifyMode::Exact),
            trials: global.trials.or(file.trials),
            seed: global.seed.or(file.seed).unwrap_or(0),
            exhaustive_bound: global.exhaustive_bound.or(file.exhaustive_bound).unwrap_or(DEFAULT_EXHAUSTIVE_BOUND),
            out: global.out.clone().or(file.out),
            format: global.format.or(file.format).unwrap_or(Format::Json),
        })
    }

    fn source(&self) -> Result<&GraphSource, CliError> {
        self.source.as_ref().ok_or_else(|| CliError::Usage("a graph is required (--graph or `graph` in --config)".into()))
    }

    fn load(&self) -> Result<(String, Graph), CliError> {
        let source = self.source()?;
        Ok((source.describe(), source.load()?))
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn table(lines: &[String]) -> String {
    let mut s = lines.join("\n");
    s.push('\n');
    s
}

fn render(report: &Report, format: Format) -> Result<String, CliError> {
    Ok(match format {
        Format::Json => report.to_json(),
        Format::Csv => report.per_edge_csv()?,
        Format::Table => table(&report.summary_lines()),
    })
}

fn print_witnesses(report: &Report) {
    if report.holds() {
        return;
    }
    eprintln!("claim violated on graph {} ({} vertices)", report.graph.source, report.graph.vertices);
    eprintln!("edges: {:?}", report.graph.edge_list);
    for line in report.summary_lines() {
        eprintln!("{line}");
    }
    for w in &report.witnesses {
        eprintln!("{w}");
    }
    if report.witnesses_omitted > 0 {
        eprintln!("({} further witnesses omitted)", report.witnesses_omitted);
    }
}

fn cmd_gen(global: &GlobalArgs, file: FileConfig, kind: &str, params: &[String]) -> Result<Outcome, CliError> {
    let seed = global.seed.or(file.seed).unwrap_or(0);
    let spec = GeneratorSpec::from_kind(kind, params, seed)?;
    let graph = spec.generate()?;
    emit(global.out.as_deref().or(file.out.as_deref()), &save_edge_list(&graph))?;
    Ok(Outcome::Holds)
}

fn cmd_verify(config: &ExperimentConfig, audit_out: Option<&Path>) -> Result<Outcome, CliError> {
    let (source, g) = config.load()?;
    let report = match config.mode {
        VerifyMode::Exact => {
            let r = exact_edge_expectations(&g, config.exhaustive_bound)?;
            exact_report(&source, &g, &r, config.exhaustive_bound)?
        }
        VerifyMode::Mc => {
            match config.trials {
                None => return Err(CliError::Usage("--mode mc requires --trials".into())),
                Some(0) => return Err(CliError::Usage("--trials must be positive".into())),
                Some(_) => {}
            }
            let r = parallel::mc_edge_expectations(&g, config.trials.unwrap_or_default(), config.seed)?;
            mc_report(&source, &g, &r)
        }
        VerifyMode::Audit => {
            let r = exhaustive_supermartingale_audit(&g, config.exhaustive_bound, AuditOptions::default())?;
            let report = audit_report(&source, &g, &r, config.exhaustive_bound)?;
            if let Some(path) = audit_out {
                emit(Some(path), &audit_csv(&r)?)?;
            }
            if config.format == Format::Csv {
                emit(config.out.as_deref(), &audit_csv(&r)?)?;
                print_witnesses(&report);
                return Ok(Outcome::of(&report));
            }
            report
        }
        VerifyMode::Consistency => consistency(config, &source, &g, None, None)?,
    };
    emit(config.out.as_deref(), &render(&report, config.format)?)?;
    print_witnesses(&report);
    Ok(Outcome::of(&report))
}

fn consistency(
    config: &ExperimentConfig,
    source: &str,
    g: &Graph,
    fault: Option<usize>,
    trace_out: Option<&Path>,
) -> Result<Report, CliError> {
    let trials = config.trials.unwrap_or(DEFAULT_CONSISTENCY_TRIALS);
    let fault = match fault {
        Some(v) if v >= g.vertex_count() => {
            return Err(CliError::Usage(format!("--inject-fault {v}: graph has {} vertices", g.vertex_count())))
        }
        other => other.map(|vertex| TraceFault { vertex }),
    };
    let first_failure = parallel::consistency_trials(g, trials, config.seed, fault)?;
    if let Some(path) = trace_out {
        let trial = first_failure.as_ref().map_or(0, |f| f.0);
        let ranks = trial_ranks(g.vertex_count(), config.seed, trial);
        let (_, mut trace) = early_break_run(g, &ranks)?;
        if let Some(TraceFault { vertex }) = fault {
            trace.queried[vertex].pop();
        }
        emit(Some(path), &format_trace(&trace, &ranks))?;
    }
    Ok(consistency_report(source, g, &ConsistencyOutcome { trials, seed: config.seed, first_failure }))
}

fn cmd_consistency(config: &ExperimentConfig, args: &ConsistencyArgs) -> Result<Outcome, CliError> {
    let (source, g) = config.load()?;
    let report = consistency(config, &source, &g, args.inject_fault, args.trace_out.as_deref())?;
    let text = match config.format {
        Format::Json => report.to_json(),
        Format::Csv => summary_csv(&summary_rows(&report))?,
        Format::Table => table(&report.summary_lines()),
    };
    emit(config.out.as_deref(), &text)?;
    print_witnesses(&report);
    Ok(Outcome::of(&report))
}

fn trace_rows(path: &Path, text: &str) -> Result<Vec<SummaryRow>, CliError> {
    let parsed = parse_trace(text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let row = |check: &str, observed: String| SummaryRow {
        source: path.display().to_string(),
        mode: "trace".into(),
        check: check.into(),
        observed,
        bound: String::new(),
        status: String::new(),
    };
    let mut rows = vec![
        row("query_edges", parsed.query_edges.len().to_string()),
        row("total_calls", parsed.total_calls().to_string()),
    ];
    if let Some((v, c)) = parsed.max_calls() {
        rows.push(row("max_calls", format!("{c} at vertex {v}")));
    }
    Ok(rows)
}

fn cmd_report(config: &ExperimentConfig, inputs: &[PathBuf]) -> Result<Outcome, CliError> {
    let mut rows = Vec::new();
    let mut outcome = Outcome::Holds;
    for path in inputs {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        if looks_like_trace(&text) {
            rows.extend(trace_rows(path, &text)?);
            continue;
        }
        let report =
            Report::from_json(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        if Outcome::of(&report) == Outcome::Violated {
            outcome = Outcome::Violated;
        }
        rows.extend(summary_rows(&report));
    }
    let text = match config.format {
        Format::Csv => summary_csv(&rows)?,
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&rows).expect("rows serialize");
            s.push('\n');
            s
        }
        Format::Table => {
            let mut lines = Vec::new();
            let mut current = None;
            for r in &rows {
                let key = (r.source.clone(), r.mode.clone());
                if current.as_ref() != Some(&key) {
                    lines.push(format!("# {} {}", r.source, r.mode));
                    current = Some(key);
                }
                let mut line = format!("{} {}", r.check, r.observed);
                if !r.bound.is_empty() {
                    line += &format!(" bound {}", r.bound);
                }
                if !r.status.is_empty() {
                    line += &format!(" status {}", r.status);
                }
                lines.push(line);
            }
            table(&lines)
        }
    };
    emit(config.out.as_deref(), &text)?;
    Ok(outcome)
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    let file = match &cli.global.config {
        Some(path) => read_config(path)?,
        None => FileConfig::default(),
    };
    let threads = cli.global.threads.or(file.threads);
    let work = move || match &cli.command {
        Command::Gen { kind, params } => cmd_gen(&cli.global, file, kind, params),
        Command::Verify(args) => {
            let config = ExperimentConfig::resolve(&cli.global, file, args.graph.as_deref(), args.mode)?;
            cmd_verify(&config, args.audit_csv.as_deref())
        }
        Command::Consistency(args) => {
            let config = ExperimentConfig::resolve(&cli.global, file, args.graph.as_deref(), None)?;
            cmd_consistency(&config, args)
        }
        Command::Report { inputs } => {
            let mut config = ExperimentConfig::resolve(&cli.global, file, None, None)?;
            // summaries read best as a table unless asked otherwise
            if cli.global.format.is_none() {
                config.format = Format::Table;
            }
            cmd_report(&config, inputs)
        }
    };
    match threads {
        Some(0) => Err(CliError::Usage("--threads must be positive".into())),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?
            .install(work),
        None => work(),
    }
}

pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Outcome::Holds) => ExitCode::SUCCESS,
        Ok(Outcome::Violated) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
