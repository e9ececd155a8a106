//! `eval`: run techniques over a dataset, score and report.

use std::collections::HashMap;
use std::path::PathBuf;

use anyhow::{anyhow, Context};
use serde::{Deserialize, Serialize};
use tempqa_core::ratagen::{import_path, TaskInstance, TkgRef};
use tempqa_core::Tkg;
use tempqa_pipeline::evalharness::{aggregate_with, score_result, ScoredRow, DEFAULT_BIN_WIDTH};
use tempqa_pipeline::orchestrator::{
    run_batch, Answer, BatchJob, ChatClient, DslRecord, Exchange, FunctionCallRecord, OracleClient, PipelineConfig,
    PipelineResult, PromptSet, RandomFunctionClient, ScriptedClient, Technique,
};

use super::{emit, save_jsonl};
use crate::backend::{resolve, Backend, Mock};
use crate::config::{parse_list, FileConfig};
use crate::{CliError, CliResult, EvalArgs};

/// One line of the transcript file. Timing is left out so mock runs are
/// byte-identical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptRecord {
    pub instance_id: String,
    pub technique: Technique,
    pub answer: Answer,
    pub explanation: String,
    pub llm_calls: usize,
    pub reflexions: usize,
    pub transcript: Vec<Exchange>,
    pub function_calls: Vec<FunctionCallRecord>,
    pub dsl_programs: Vec<DslRecord>,
    pub errors: Vec<String>,
}

impl From<&PipelineResult> for TranscriptRecord {
    fn from(r: &PipelineResult) -> Self {
        Self {
            instance_id: r.instance_id.clone(),
            technique: r.technique,
            answer: r.answer.clone(),
            explanation: r.explanation.clone(),
            llm_calls: r.llm_calls,
            reflexions: r.reflexions,
            transcript: r.transcript.clone(),
            function_calls: r.function_calls.clone(),
            dsl_programs: r.dsl_programs.clone(),
            errors: r.errors.clone(),
        }
    }
}

pub fn techniques(flag: Option<&str>, cfg: &FileConfig) -> CliResult<Vec<Technique>> {
    let list = match flag {
        Some(l) => Some(parse_list(l).map_err(|e| CliError::Usage(format!("--technique {e}")))?),
        None => cfg.list("techniques")?,
    };
    match list {
        Some(l) if l.is_empty() => Err(CliError::Usage("no technique given".into())),
        Some(l) => Ok(l),
        None => Ok(Technique::ALL.to_vec()),
    }
}

pub fn prompts(flag: Option<&PathBuf>, cfg: &FileConfig) -> CliResult<PromptSet> {
    let dir = flag.cloned().or_else(|| cfg.raw("prompts_dir").map(PathBuf::from));
    match dir {
        Some(d) => PromptSet::load_dir(&d).map_err(|e| CliError::Usage(format!("prompts {}: {e}", d.display()))),
        None => Ok(PromptSet::builtin()),
    }
}

/// Load every instance's graph, sharing graphs stored in the same file.
fn graphs(instances: &[TaskInstance], base_dir: Option<&std::path::Path>) -> CliResult<(Vec<Tkg>, Vec<usize>)> {
    let mut loaded = Vec::new();
    let mut by_path: HashMap<String, usize> = HashMap::new();
    let mut index = Vec::with_capacity(instances.len());
    for t in instances {
        let load = || t.load_tkg(base_dir).with_context(|| format!("graph of instance {}", t.id));
        let i = match &t.tkg {
            TkgRef::Path(p) => match by_path.get(p) {
                Some(&i) => i,
                None => {
                    loaded.push(load()?);
                    by_path.insert(p.clone(), loaded.len() - 1);
                    loaded.len() - 1
                }
            },
            TkgRef::Inline(_) => {
                loaded.push(load()?);
                loaded.len() - 1
            }
        };
        index.push(i);
    }
    Ok((loaded, index))
}

pub fn eval(a: &EvalArgs, cfg: &FileConfig) -> CliResult<()> {
    let techs = techniques(a.technique.as_deref(), cfg)?;
    let dataset = a
        .dataset
        .clone()
        .or_else(|| cfg.raw("dataset").map(PathBuf::from))
        .ok_or_else(|| CliError::Usage("--dataset is required (or `dataset` in the config file)".into()))?;
    let resolved = resolve(&a.backend, cfg)?;
    let defaults = PipelineConfig::default();
    let pcfg = PipelineConfig {
        params: resolved.params.clone(),
        prompts: prompts(a.prompts.as_ref(), cfg)?,
        excerpt_facts: cfg.pick(None, "excerpt_facts", defaults.excerpt_facts)?,
        max_reflexions: cfg.pick(None, "max_reflexions", defaults.max_reflexions)?,
        ..defaults
    };
    let bin_width = cfg.pick(a.bin_width, "bin_width", DEFAULT_BIN_WIDTH)?;

    let mut instances = import_path(&dataset).with_context(|| format!("reading {}", dataset.display()))?;
    if let Some(n) = a.limit {
        instances.truncate(n);
    }
    let base_dir = dataset.parent().filter(|p| !p.as_os_str().is_empty());
    let (loaded, index) = graphs(&instances, base_dir)?;

    let jobs: Vec<BatchJob> = techs
        .iter()
        .flat_map(|&technique| {
            instances.iter().zip(&index).map(move |(instance, &g)| (instance, g, technique))
        })
        .map(|(instance, g, technique)| BatchJob {
            instance,
            graph: &loaded[g],
            technique,
        })
        .collect();
    let make = |j: &BatchJob<'_>| -> Box<dyn ChatClient + '_> {
        match &resolved.backend {
            Backend::Live(c) => Box::new(c),
            Backend::Mock(Mock::Oracle) => Box::new(OracleClient::new(j.instance, j.graph)),
            Backend::Mock(Mock::Random(seed)) => Box::new(RandomFunctionClient::new(j.instance, *seed)),
            Backend::Mock(Mock::Script(s)) => Box::new(ScriptedClient::new(s.clone())),
        }
    };
    let outcomes = run_batch(&jobs, make, &pcfg, resolved.parallelism);

    let mut results = Vec::new();
    let mut rows: Vec<ScoredRow> = Vec::new();
    let mut failures = Vec::new();
    for (job, outcome) in jobs.iter().zip(outcomes) {
        match outcome {
            Ok(r) => {
                rows.push(score_result(job.instance, &r));
                results.push(TranscriptRecord::from(&r));
            }
            Err(e) => failures.push(format!("{} / {}: {e}", job.instance.id, job.technique.as_str())),
        }
    }
    let path = |flag: &Option<PathBuf>, key: &str| flag.clone().or_else(|| cfg.raw(key).map(PathBuf::from));
    if let Some(p) = path(&a.transcripts, "transcripts") {
        save_jsonl(&results, &p)?;
    }
    if let Some(p) = path(&a.rows, "rows") {
        save_jsonl(&rows, &p)?;
    }
    let report = aggregate_with(&rows, bin_width);
    emit(&report.render(a.output.format), a.output.out.as_deref())?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(anyhow!("{} of {} runs failed:\n{}", failures.len(), jobs.len(), failures.join("\n")).into())
    }
}
