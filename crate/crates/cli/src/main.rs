//! `tempqa`: generate temporal QA datasets, run prompting techniques over
//! them, and report accuracy.

mod backend;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tempqa_pipeline::evalharness::Format;

use tempqa_cli::config::{self, ConfigError, FileConfig};

/// Exit status 2 for usage and configuration problems, 1 for everything
/// that goes wrong while doing the work.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] anyhow::Error),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "tempqa", version, about = "Temporal question answering over knowledge graphs")]
pub struct Cli {
    /// Run configuration file of `key = value` lines.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random temporal knowledge graph.
    GenGraph(GenGraphArgs),
    /// Generate and verify a question dataset.
    GenDataset(GenDatasetArgs),
    /// Re-derive every gold answer of a dataset.
    Verify(VerifyArgs),
    /// Run techniques over a dataset and report accuracy.
    Eval(EvalArgs),
    /// Classify questions as temporal or knowledge by model confidence.
    Confidence(ConfidenceArgs),
    /// Aggregate scored rows into a report.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GraphShape {
    /// Number of entities.
    #[arg(long, value_name = "N")]
    pub entities: Option<usize>,
    /// Number of relations.
    #[arg(long, value_name = "N")]
    pub relations: Option<usize>,
    /// Number of facts.
    #[arg(long, value_name = "N")]
    pub facts: Option<usize>,
    /// First year of the time range.
    #[arg(long, value_name = "YEAR", allow_negative_numbers = true)]
    pub start: Option<i64>,
    /// Last year of the time range.
    #[arg(long, value_name = "YEAR", allow_negative_numbers = true)]
    pub end: Option<i64>,
    /// Most episodes of one (subject, relation, object) triple.
    #[arg(long, value_name = "N")]
    pub episodes: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GenGraphArgs {
    /// Seed for every random choice.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub shape: GraphShape,
    /// Output fact file (JSON Lines).
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenDatasetArgs {
    /// Seed for every random choice.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Existing fact file; a graph is generated from the seed when absent.
    #[arg(long, value_name = "PATH")]
    pub graph: Option<PathBuf>,
    #[command(flatten)]
    pub shape: GraphShape,
    /// Instances per question type.
    #[arg(long, value_name = "N")]
    pub per_type: Option<usize>,
    /// Comma-separated question types (default: all 17).
    #[arg(long, value_name = "LIST")]
    pub types: Option<String>,
    /// Reference the graph file from every instance instead of inlining it.
    #[arg(long, requires = "graph")]
    pub link_graph: bool,
    /// Output dataset (JSON Lines).
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
    /// Also write a confidence file mixing these questions with knowledge ones.
    #[arg(long, value_name = "PATH")]
    pub confidence_out: Option<PathBuf>,
    /// Knowledge questions in the confidence file (default: as many as temporal).
    #[arg(long, value_name = "N", requires = "confidence_out")]
    pub knowledge: Option<usize>,
    /// Graph lines shown with each confidence question.
    #[arg(long, value_name = "N", default_value_t = 5)]
    pub excerpt_lines: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Dataset to check.
    #[arg(long, value_name = "PATH")]
    pub dataset: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BackendArgs {
    /// Offline client: `oracle`, `random`, or a mock script file.
    #[arg(long, value_name = "MOCK", conflicts_with = "base_url")]
    pub mock: Option<String>,
    /// Base URL of a chat-completions endpoint.
    #[arg(long, value_name = "URL")]
    pub base_url: Option<String>,
    /// Model name sent to the endpoint.
    #[arg(long)]
    pub model: Option<String>,
    /// Sampling temperature.
    #[arg(long)]
    pub temperature: Option<f64>,
    /// Reply token limit.
    #[arg(long, value_name = "N")]
    pub max_tokens: Option<u32>,
    /// Requests in flight against a live endpoint.
    #[arg(long, value_name = "N")]
    pub parallelism: Option<usize>,
    /// Seed of the `random` mock.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Report format: text, csv or json.
    #[arg(long, value_name = "FORMAT", default_value = "text")]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Dataset to evaluate.
    #[arg(long, value_name = "PATH")]
    pub dataset: Option<PathBuf>,
    /// Comma-separated techniques (default: all eight).
    #[arg(long, value_name = "LIST")]
    pub technique: Option<String>,
    /// Only the first N instances.
    #[arg(long, value_name = "N")]
    pub limit: Option<usize>,
    #[command(flatten)]
    pub backend: BackendArgs,
    /// Directory of prompt templates overriding the built-in ones.
    #[arg(long, value_name = "DIR")]
    pub prompts: Option<PathBuf>,
    /// Write every prompt and reply here (JSON Lines).
    #[arg(long, value_name = "PATH")]
    pub transcripts: Option<PathBuf>,
    /// Write scored rows here (JSON Lines).
    #[arg(long, value_name = "PATH")]
    pub rows: Option<PathBuf>,
    /// Token bin width of the report.
    #[arg(long, value_name = "N")]
    pub bin_width: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ConfidenceArgs {
    /// Confidence file (JSON Lines of id, question, excerpt, actual).
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    /// Scores at or above this are classified temporal.
    #[arg(long)]
    pub threshold: Option<f64>,
    #[command(flatten)]
    pub backend: BackendArgs,
    /// Directory of prompt templates overriding the built-in ones.
    #[arg(long, value_name = "DIR")]
    pub prompts: Option<PathBuf>,
    /// Write per-item scores here (JSON Lines).
    #[arg(long, value_name = "PATH")]
    pub scores: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Scored row files from earlier eval runs.
    #[arg(long, value_name = "PATH", required = true, num_args = 1..)]
    pub rows: Vec<PathBuf>,
    /// Per-item confidence scores from an earlier confidence run.
    #[arg(long = "confidence", value_name = "PATH")]
    pub confidence_scores: Option<PathBuf>,
    /// Threshold applied to the confidence scores.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Token bin width.
    #[arg(long, value_name = "N")]
    pub bin_width: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn run(cli: Cli) -> CliResult<()> {
    let cfg = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    match cli.command {
        Command::GenGraph(a) => commands::generate::gen_graph(&a, &cfg),
        Command::GenDataset(a) => commands::generate::gen_dataset(&a, &cfg),
        Command::Verify(a) => commands::generate::verify(&a, &cfg),
        Command::Eval(a) => commands::eval::eval(&a, &cfg),
        Command::Confidence(a) => commands::confidence::confidence(&a, &cfg),
        Command::Report(a) => commands::report::report(&a, &cfg),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn arguments_are_consistent() {
        Cli::command().debug_assert();
    }
}
