//! Instance-aware mock clients. They recognise the built-in templates by
//! marker phrases and answer each step the way a compliant model would.

use std::sync::Mutex;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tempqa_core::ratagen::{TaskInstance, TaskLabel};
use tempqa_core::seed::derive_seed;
use tempqa_core::tqdsl::golden_program;
use tempqa_core::{AnswerValue, QuestionType, Tkg, TypedCall};

use super::client::{ChatClient, ChatParams, ClientError, Message, Role};
use super::extract::fenced_blocks;

pub(crate) const SELECT_MARKER: &str = "Available functions:";
pub(crate) const RESULTS_MARKER: &str = "Function results:";
pub(crate) const STRUCTURE_MARKER: &str = "fact(SUBJECT, RELATION, OBJECT, START, END)";
pub(crate) const DSL_MARKER: &str = "The facts are available to a tqdsl program";
pub(crate) const EXPAND_MARKER: &str = "\"Option1\"";
pub(crate) const EVALUATE_MARKER: &str = "Provide a score from 1 to 10";

/// Kinds of prompt a mock can tell apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PromptKind {
    SelectFunction,
    FunctionResults,
    Structure,
    WriteProgram,
    Expand,
    Evaluate,
    Other,
}

pub fn classify_prompt(prompt: &str) -> PromptKind {
    if prompt.contains(SELECT_MARKER) {
        PromptKind::SelectFunction
    } else if prompt.contains(RESULTS_MARKER) {
        PromptKind::FunctionResults
    } else if prompt.contains(STRUCTURE_MARKER) {
        PromptKind::Structure
    } else if prompt.contains(DSL_MARKER) {
        PromptKind::WriteProgram
    } else if prompt.contains(EXPAND_MARKER) {
        PromptKind::Expand
    } else if prompt.contains(EVALUATE_MARKER) {
        PromptKind::Evaluate
    } else {
        PromptKind::Other
    }
}

fn last_user(messages: &[Message]) -> &str {
    messages
        .iter()
        .rev()
        .find(|m| m.role == Role::User)
        .map(|m| m.content.as_str())
        .unwrap_or("")
}

fn fenced(tag: &str, body: &str) -> String {
    format!("```{tag}\n{body}\n```")
}

fn answer_reply(explanation: &str, answer: Value) -> String {
    fenced("json", &json!({"explanation": explanation, "answer": answer}).to_string())
}

/// The `result` of the first entry in a function-results prompt.
fn echoed_result(prompt: &str) -> Option<Value> {
    let body = fenced_blocks(prompt, "json").into_iter().next()?;
    let v: Value = serde_json::from_str(body).ok()?;
    let first = v.as_array()?.first()?;
    first.get("result").filter(|r| !r.is_null()).cloned()
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// The graph as tqdsl fact declarations, one per line, ids always quoted.
pub fn fact_decls(g: &Tkg) -> String {
    g.facts()
        .iter()
        .map(|f| {
            format!(
                "fact({}, {}, {}, {}, {})",
                quote(f.subject.as_str()),
                quote(f.relation.as_str()),
                quote(f.object.as_str()),
                f.start(),
                f.end()
            )
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn tot_options() -> String {
    fenced(
        "json",
        &json!({
            "Option1": "List the facts that match the entities in the question.",
            "Option2": "Order the matching facts by their start time.",
            "Option3": "Check which facts fall inside the requested period.",
        })
        .to_string(),
    )
}

/// Answers every step correctly: the canonical call, the golden program, the
/// graph as declarations, and the gold answer elsewhere. Function results
/// are echoed from the prompt rather than recomputed.
pub struct OracleClient {
    instance: TaskInstance,
    decls: String,
}

impl OracleClient {
    pub fn new(instance: &TaskInstance, graph: &Tkg) -> Self {
        Self {
            instance: instance.clone(),
            decls: fact_decls(graph),
        }
    }

    fn gold(&self) -> String {
        answer_reply("Derived from the facts.", self.instance.gold.to_plain_json())
    }
}

impl ChatClient for OracleClient {
    fn complete(&self, messages: &[Message], _params: &ChatParams) -> Result<String, ClientError> {
        let prompt = last_user(messages);
        Ok(match classify_prompt(prompt) {
            PromptKind::SelectFunction => fenced("json", &serde_json::to_string(&self.instance.canonical_call).unwrap()),
            PromptKind::FunctionResults => match echoed_result(prompt) {
                Some(v) => answer_reply("Taken from the function result.", v),
                None => answer_reply("The function failed.", json!(null)),
            },
            PromptKind::Structure => fenced("tqdsl", &self.decls),
            PromptKind::WriteProgram => {
                let src = TypedCall::from_call(&self.instance.canonical_call)
                    .map(|c| golden_program(&c))
                    .unwrap_or_default();
                fenced("tqdsl", &src)
            }
            PromptKind::Expand => tot_options(),
            PromptKind::Evaluate => fenced("json", "{\"score\": 8}"),
            PromptKind::Other => self.gold(),
        })
    }
}

/// Picks a function uniformly at random and reuses the canonical arguments,
/// so it only succeeds when the draw happens to fit. Every other step gets a
/// non-answer.
pub struct RandomFunctionClient {
    instance: TaskInstance,
    rng: Mutex<ChaCha8Rng>,
}

impl RandomFunctionClient {
    pub fn new(instance: &TaskInstance, seed: u64) -> Self {
        Self {
            instance: instance.clone(),
            rng: Mutex::new(ChaCha8Rng::seed_from_u64(derive_seed(seed, &instance.id))),
        }
    }
}

impl ChatClient for RandomFunctionClient {
    fn complete(&self, messages: &[Message], _params: &ChatParams) -> Result<String, ClientError> {
        let prompt = last_user(messages);
        Ok(match classify_prompt(prompt) {
            PromptKind::SelectFunction => {
                let q = *QuestionType::ALL
                    .choose(&mut *self.rng.lock().expect("rng poisoned"))
                    .expect("non-empty");
                let mut call = self.instance.canonical_call.clone();
                call.name = q.name().to_string();
                fenced("json", &serde_json::to_string(&call).unwrap())
            }
            PromptKind::FunctionResults => match echoed_result(prompt) {
                Some(v) => answer_reply("Taken from the function result.", v),
                None => answer_reply("No result.", json!("unknown")),
            },
            PromptKind::Expand => tot_options(),
            PromptKind::Evaluate => fenced("json", "{\"score\": 5}"),
            _ => answer_reply("A guess.", json!("unknown")),
        })
    }
}

/// Confidence mock that replies with one fixed score.
pub struct ConfidenceMockClient {
    score: f64,
}

impl ConfidenceMockClient {
    /// Perfectly separable scores.
    pub fn oracle(actual: TaskLabel) -> Self {
        Self {
            score: match actual {
                TaskLabel::Temporal => 1.0,
                TaskLabel::Knowledge => 0.0,
            },
        }
    }

    /// A uniform score in [0, 1] drawn from `seed` and the item id.
    pub fn random(item_id: &str, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, item_id));
        Self {
            score: rng.gen_range(0.0..=1.0),
        }
    }
}

impl ChatClient for ConfidenceMockClient {
    fn complete(&self, _messages: &[Message], _params: &ChatParams) -> Result<String, ClientError> {
        Ok(fenced("json", &json!({"score": self.score}).to_string()))
    }
}

/// Plain JSON form of a function outcome as shown in a results prompt.
pub(crate) fn result_json(name: &str, outcome: &Result<AnswerValue, String>) -> Value {
    match outcome {
        Ok(v) => json!({"function": name, "result": v.to_plain_json(), "error": null}),
        Err(e) => json!({"function": name, "result": null, "error": e}),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempqa_core::tqdsl::{run, Limits};

    #[test]
    fn declarations_rebuild_the_graph() {
        let g = Tkg::load(
            "{\"s\":\"E 1\",\"r\":\"R\\\"1\",\"o\":\"let\",\"t0\":2000,\"t1\":2005}\n{\"s\":\"E2\",\"r\":\"R1\",\"o\":\"E3\",\"t0\":1,\"t1\":2}"
                .as_bytes(),
        )
        .unwrap();
        let src = format!("{}\nfacts(*, *, *) |> count", fact_decls(&g));
        let v = run(&src, None, &Limits::default()).unwrap().into_answer().unwrap();
        assert_eq!(v, AnswerValue::Count(2));
    }

    #[test]
    fn prompt_kinds() {
        assert_eq!(classify_prompt("Available functions:\n[]"), PromptKind::SelectFunction);
        assert_eq!(classify_prompt("anything"), PromptKind::Other);
        assert_eq!(classify_prompt("with keys \"Option1\", \"Option2\""), PromptKind::Expand);
    }
}
