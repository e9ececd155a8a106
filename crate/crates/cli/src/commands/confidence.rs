//! `confidence`: score each question's temporal confidence and tabulate.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use anyhow::anyhow;
use serde::{Deserialize, Serialize};
use tempqa_core::ratagen::{ConfidenceItem, TaskLabel};
use tempqa_pipeline::evalharness::confidence_report;
use tempqa_pipeline::orchestrator::{
    temporal_confidence, ChatClient, ConfidenceMockClient, ConfidenceScore, PipelineError, ScriptedClient,
    DEFAULT_THRESHOLD,
};

use super::eval::prompts;
use super::{emit, load_jsonl, save_jsonl};
use crate::backend::{resolve, Backend, Mock};
use crate::config::FileConfig;
use crate::{CliResult, ConfidenceArgs};

/// One line of the `--scores` file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub id: String,
    pub actual: TaskLabel,
    #[serde(flatten)]
    pub score: ConfidenceScore,
}

/// `f` over every item, `parallelism` at a time, results in item order.
fn par_map<T: Sync, R: Send>(items: &[T], parallelism: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<R>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..parallelism.clamp(1, items.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(item) = items.get(i) else { break };
                let r = f(item);
                slots.lock().expect("result slots poisoned")[i] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .expect("result slots poisoned")
        .into_iter()
        .map(|r| r.expect("every item ran"))
        .collect()
}

pub fn confidence(a: &ConfidenceArgs, cfg: &FileConfig) -> CliResult<()> {
    let items: Vec<ConfidenceItem> = load_jsonl(&a.input)?;
    let threshold = cfg.pick(a.threshold, "threshold", DEFAULT_THRESHOLD)?;
    let resolved = resolve(&a.backend, cfg)?;
    let prompts = prompts(a.prompts.as_ref(), cfg)?;
    // a script is read front to back across the whole file
    let shared_script = match &resolved.backend {
        Backend::Mock(Mock::Script(s)) => Some(ScriptedClient::new(s.clone())),
        _ => None,
    };
    let ask = |item: &ConfidenceItem| -> Result<ConfidenceScore, PipelineError> {
        let score = |client: &dyn ChatClient| {
            temporal_confidence(&item.question, &item.excerpt, client, &resolved.params, &prompts)
        };
        match &resolved.backend {
            Backend::Live(c) => score(c),
            Backend::Mock(Mock::Oracle) => score(&ConfidenceMockClient::oracle(item.actual)),
            Backend::Mock(Mock::Random(seed)) => score(&ConfidenceMockClient::random(&item.id, *seed)),
            Backend::Mock(Mock::Script(_)) => score(shared_script.as_ref().expect("script client")),
        }
    };
    let outcomes = par_map(&items, resolved.parallelism, ask);

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (item, outcome) in items.iter().zip(outcomes) {
        match outcome {
            Ok(score) => records.push(ScoreRecord {
                id: item.id.clone(),
                actual: item.actual,
                score,
            }),
            Err(e) => failures.push(format!("{}: {e}", item.id)),
        }
    }
    if let Some(p) = &a.scores {
        save_jsonl(&records, p)?;
    }
    let pairs: Vec<(TaskLabel, Option<f64>)> = records.iter().map(|r| (r.actual, r.score.score)).collect();
    let report = confidence_report(&pairs, threshold);
    emit(&report.render(a.output.format), a.output.out.as_deref())?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(anyhow!("{} of {} items failed:\n{}", failures.len(), items.len(), failures.join("\n")).into())
    }
}
