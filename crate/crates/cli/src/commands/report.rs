//! `report`: re-aggregate scored rows written by earlier runs.

use tempqa_pipeline::evalharness::{aggregate_with, confidence_report, ScoredRow, DEFAULT_BIN_WIDTH};
use tempqa_pipeline::orchestrator::DEFAULT_THRESHOLD;

use super::confidence::ScoreRecord;
use super::{emit, load_jsonl};
use crate::config::FileConfig;
use crate::{CliResult, ReportArgs};

pub fn report(a: &ReportArgs, cfg: &FileConfig) -> CliResult<()> {
    let mut rows: Vec<ScoredRow> = Vec::new();
    for p in &a.rows {
        rows.extend(load_jsonl::<ScoredRow>(p)?);
    }
    let bin_width = cfg.pick(a.bin_width, "bin_width", DEFAULT_BIN_WIDTH)?;
    let mut report = aggregate_with(&rows, bin_width);
    if let Some(p) = &a.confidence_scores {
        let threshold = cfg.pick(a.threshold, "threshold", DEFAULT_THRESHOLD)?;
        let scores: Vec<ScoreRecord> = load_jsonl(p)?;
        let pairs: Vec<_> = scores.iter().map(|r| (r.actual, r.score.score)).collect();
        report.confidence = Some(confidence_report(&pairs, threshold));
    }
    emit(&report.render(a.output.format), a.output.out.as_deref())
}
