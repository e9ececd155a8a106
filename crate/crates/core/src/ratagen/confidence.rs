//! Labeled question mix for the temporal-confidence classifier: temporal
//! questions taken from generated instances, plus synthetic knowledge
//! questions that need no time reasoning.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::TaskInstance;
use crate::seed::derive_seed;
use crate::tkg::{Fact, Tkg};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskLabel {
    Knowledge,
    Temporal,
}

impl TaskLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            TaskLabel::Knowledge => "knowledge",
            TaskLabel::Temporal => "temporal",
        }
    }
}

impl fmt::Display for TaskLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TaskLabel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "knowledge" => Ok(TaskLabel::Knowledge),
            "temporal" => Ok(TaskLabel::Temporal),
            other => Err(format!("unknown label `{other}`")),
        }
    }
}

/// One row of a confidence file. `actual` is mandatory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfidenceItem {
    pub id: String,
    pub question: String,
    #[serde(default)]
    pub excerpt: String,
    pub actual: TaskLabel,
}

const KNOWLEDGE_TEMPLATES: &[&str] = &[
    "Which entity has relation <r> with <o>?",
    "Is <s> connected to <o> through relation <r>?",
    "Name an entity that <s> is linked to by relation <r>.",
    "What relation links <s> and <o>?",
    "Does <s> appear as the subject of relation <r>?",
    "Which relations does <s> take part in?",
];

fn knowledge_question(rng: &mut ChaCha8Rng, f: &Fact) -> String {
    let t = KNOWLEDGE_TEMPLATES[rng.gen_range(0..KNOWLEDGE_TEMPLATES.len())];
    super::fill(
        t,
        &[
            ("s", f.subject.to_string()),
            ("r", f.relation.to_string()),
            ("o", f.object.to_string()),
        ],
    )
}

/// Build a shuffled mix of `temporal.len()` temporal rows (from instances) and
/// `n_knowledge` knowledge rows drawn from `g`.
pub fn generate_knowledge_questions(
    g: &Tkg,
    temporal: &[TaskInstance],
    n_knowledge: usize,
    excerpt_lines: usize,
    seed: u64,
) -> Vec<ConfidenceItem> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "confidence"));
    let excerpt: String = g
        .render_text(&Default::default(), derive_seed(seed, "render"))
        .lines()
        .take(excerpt_lines)
        .collect::<Vec<_>>()
        .join("\n");
    let mut items: Vec<ConfidenceItem> = temporal
        .iter()
        .map(|t| ConfidenceItem {
            id: format!("temporal-{}", t.id),
            question: t.question.clone(),
            excerpt: t.excerpt(excerpt_lines),
            actual: TaskLabel::Temporal,
        })
        .collect();
    if !g.is_empty() {
        for i in 0..n_knowledge {
            let f = &g.facts()[rng.gen_range(0..g.len())];
            items.push(ConfidenceItem {
                id: format!("knowledge-{i:04}"),
                question: knowledge_question(&mut rng, f),
                excerpt: excerpt.clone(),
                actual: TaskLabel::Knowledge,
            });
        }
    }
    items.shuffle(&mut rng);
    items
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_label_is_rejected() {
        let line = r#"{"id":"x","question":"q"}"#;
        assert!(serde_json::from_str::<ConfidenceItem>(line).is_err());
    }

    #[test]
    fn knowledge_questions_have_no_years() {
        let g = crate::ratagen::generate_graph(&Default::default()).unwrap();
        let items = generate_knowledge_questions(&g, &[], 20, 5, 1);
        assert_eq!(items.len(), 20);
        for it in &items {
            assert_eq!(it.actual, TaskLabel::Knowledge);
            assert!(!it
                .question
                .split_whitespace()
                .any(|w| w.trim_end_matches(['?', '.']).parse::<i64>().is_ok()));
            assert!(!it.question.contains('<'));
        }
    }
}
