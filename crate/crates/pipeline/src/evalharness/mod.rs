//! Scoring pipeline answers against gold values and summarising them.
//!
//! Matching rules by answer type:
//!
//! | type | rule |
//! |---|---|
//! | entity | equal after trimming and case folding |
//! | entity_list | ordered for `timeline` and `get_entities_in_between`, set equality otherwise |
//! | boolean | equal; `yes`/`no` are accepted as synonyms when coercing |
//! | count, duration, time_point | integer equality |
//! | time_interval | both endpoints equal |
//!
//! Answers are first coerced to the gold type, so a count written where a
//! duration was asked for still matches. Unparsed answers never match.

mod confidence;
mod report;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use tempqa_core::ratagen::TaskInstance;
use tempqa_core::{AnswerValue, EntityId, QuestionType};

use crate::orchestrator::{coerce_value, Answer, PipelineResult, Technique};

pub use confidence::{confidence_report, ConfidenceReport};
pub use report::{
    aggregate, aggregate_with, function_usage, token_bins, Format, FunctionUsage, Report, TechniqueRow, TokenBin,
    TypeRow, DEFAULT_BIN_WIDTH,
};

fn norm(e: &EntityId) -> String {
    e.as_str().trim().to_lowercase()
}

/// Whether `pred` matches `gold` for a question of type `q`.
pub fn score(pred: &Answer, gold: &AnswerValue, q: QuestionType) -> bool {
    let Some(p) = pred.value().and_then(|v| coerce_value(v, gold.answer_type())) else {
        return false;
    };
    match (&p, gold) {
        (AnswerValue::Entity(a), AnswerValue::Entity(b)) => norm(a) == norm(b),
        (AnswerValue::EntityList(a), AnswerValue::EntityList(b)) => {
            if q.ordered_answer() {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| norm(x) == norm(y))
            } else {
                a.iter().map(norm).collect::<BTreeSet<_>>() == b.iter().map(norm).collect::<BTreeSet<_>>()
            }
        }
        _ => p == *gold,
    }
}

/// One scored (instance, technique) run, the unit of aggregation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredRow {
    pub instance_id: String,
    pub question_type: QuestionType,
    pub technique: Technique,
    pub correct: bool,
    /// The answer could not be parsed.
    pub parse_error: bool,
    pub wall_time: f64,
    pub llm_calls: usize,
    pub token_estimate: usize,
    /// For function-calling techniques: whether the first selected function
    /// was the designated one. `false` when no function was selected.
    pub associated: Option<bool>,
    pub answer: Answer,
    pub gold: AnswerValue,
}

pub fn score_result(t: &TaskInstance, r: &PipelineResult) -> ScoredRow {
    ScoredRow {
        instance_id: t.id.clone(),
        question_type: t.question_type,
        technique: r.technique,
        correct: score(&r.answer, &t.gold, t.question_type),
        parse_error: r.answer.value().is_none(),
        wall_time: r.wall_time,
        llm_calls: r.llm_calls,
        token_estimate: t.token_estimate,
        associated: r
            .technique
            .uses_functions()
            .then(|| r.function_calls.first().is_some_and(|c| c.associated)),
        answer: r.answer.clone(),
        gold: t.gold.clone(),
    }
}
