//! Temporal confidence: a model-estimated score in [0, 1] that a task needs
//! temporal reasoning.

use serde::{Deserialize, Serialize};
use tempqa_core::ratagen::TaskLabel;

use super::client::{ChatClient, ChatParams, Message};
use super::extract::parse_score;
use super::prompts::PromptSet;
use super::PipelineError;

pub const DEFAULT_THRESHOLD: f64 = 0.8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceScore {
    /// Clamped score, absent when the reply could not be parsed.
    pub score: Option<f64>,
    /// The number as written by the model.
    pub raw: Option<f64>,
    pub reply: String,
    /// Why the item needs attention, if it does.
    pub flag: Option<String>,
}

/// Ask the model for a confidence score. Out-of-range scores are clamped and
/// logged; unparseable replies leave the score missing and flag the item.
pub fn temporal_confidence(
    question: &str,
    data_excerpt: &str,
    client: &dyn ChatClient,
    params: &ChatParams,
    prompts: &PromptSet,
) -> Result<ConfidenceScore, PipelineError> {
    let prompt = prompts.render("confidence", &[("question", question), ("data", data_excerpt)])?;
    let reply = client.complete(&[Message::user(prompt)], params)?;
    let raw = parse_score(&reply);
    let (score, flag) = match raw {
        None => (None, Some("unparseable score".to_string())),
        Some(x) if !(0.0..=1.0).contains(&x) => {
            let c = x.clamp(0.0, 1.0);
            log::warn!("confidence score {x} outside [0, 1], clamped to {c}");
            (Some(c), Some(format!("score {x} clamped to {c}")))
        }
        Some(x) => (Some(x), None),
    };
    Ok(ConfidenceScore {
        score,
        raw,
        reply,
        flag,
    })
}

/// Temporal iff `score >= threshold`.
pub fn classify(score: f64, threshold: f64) -> TaskLabel {
    if score >= threshold {
        TaskLabel::Temporal
    } else {
        TaskLabel::Knowledge
    }
}
