//! LLM pipelines for the eight prompting techniques, plus the temporal
//! confidence classifier.
//!
//! A run is sequential: each technique sends a fixed chain of prompts through
//! a [`ChatClient`], extracts the answer, and records everything it did in a
//! [`PipelineResult`]. Model-side failures (bad JSON, a broken program, an
//! unknown function) are captured in the result instead of aborting the run;
//! only client failures are returned as errors.

mod batch;
mod client;
mod confidence;
mod extract;
mod mocks;
mod prompts;
mod techniques;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use tempqa_core::ratagen::TaskInstance;
use tempqa_core::tqdsl::Limits;
use tempqa_core::{AnswerValue, FunctionCall, Tkg};

pub use batch::{run_batch, BatchJob};
pub use client::{
    parse_completion, ChatClient, ChatParams, ClientError, KeyedReply, LiveClient, LiveConfig, Message, MockScript,
    Role, ScriptedClient, API_KEY_ENV,
};
pub use confidence::{classify, temporal_confidence, ConfidenceScore, DEFAULT_THRESHOLD};
pub use extract::{
    coerce_json, coerce_value, extract_answer, fenced_blocks, json_values, parse_score, select_function, Answer,
    AnswerParseError, Extracted, SelectError,
};
pub use mocks::{classify_prompt, fact_decls, ConfidenceMockClient, OracleClient, PromptKind, RandomFunctionClient};
pub use prompts::{render, PromptError, PromptSet, PROMPT_NAMES};

/// Sentinel a reflexion reply uses to ask for another attempt.
pub const REPEAT_SENTINEL: &str = "repeat_please";

macro_rules! techniques {
    ($($variant:ident => $name:literal, $label:literal);+ $(;)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(rename_all = "snake_case")]
        pub enum Technique {
            $($variant),+
        }

        impl Technique {
            pub const ALL: [Technique; 8] = [$(Technique::$variant),+];

            pub fn as_str(&self) -> &'static str {
                match self {
                    $(Technique::$variant => $name),+
                }
            }

            /// Display name used in report tables.
            pub fn label(&self) -> &'static str {
                match self {
                    $(Technique::$variant => $label),+
                }
            }
        }
    };
}

techniques! {
    Direct => "direct", "Direct";
    Cot => "cot", "CoT";
    Tot => "tot", "ToT";
    Cotr => "cotr", "CoTR";
    CoteS => "cote_s", "CoTE-S";
    Cote => "cote", "CoTE";
    CotapiS => "cotapi_s", "CoTAPI-S";
    Cotapi => "cotapi", "CoTAPI";
}

impl Technique {
    /// Techniques that read the structured graph rather than its text.
    pub fn uses_structured_graph(&self) -> bool {
        matches!(self, Technique::Cote | Technique::Cotapi)
    }

    /// Techniques that call the solver functions.
    pub fn uses_functions(&self) -> bool {
        matches!(self, Technique::Cotapi | Technique::CotapiS)
    }
}

impl fmt::Display for Technique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown technique `{0}`")]
pub struct UnknownTechnique(pub String);

impl FromStr for Technique {
    type Err = UnknownTechnique;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        Technique::ALL
            .into_iter()
            .find(|t| t.as_str() == s || t.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownTechnique(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TotConfig {
    pub beam: usize,
    pub depth: usize,
    pub branch: usize,
    /// Score assumed when an evaluation reply cannot be parsed.
    pub default_score: f64,
}

impl Default for TotConfig {
    fn default() -> Self {
        Self {
            beam: 2,
            depth: 2,
            branch: 3,
            default_score: 5.0,
        }
    }
}

impl TotConfig {
    /// Upper bound on model calls: the initial prompt, one expansion and
    /// `branch` evaluations per frontier node, and the final prompt.
    pub fn max_calls(&self) -> usize {
        let mut frontier = 1usize;
        let mut calls = 2;
        for _ in 0..self.depth {
            calls += frontier * (1 + self.branch);
            frontier = (frontier * self.branch).min(self.beam);
        }
        calls
    }
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub params: ChatParams,
    pub prompts: PromptSet,
    /// Facts shown to the structured techniques.
    pub excerpt_facts: usize,
    pub max_reflexions: usize,
    pub tot: TotConfig,
    pub dsl_limits: Limits,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            params: ChatParams::default(),
            prompts: PromptSet::builtin(),
            excerpt_facts: 5,
            max_reflexions: 3,
            tot: TotConfig::default(),
            dsl_limits: Limits::default(),
        }
    }
}

/// One prompt and its reply.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exchange {
    pub step: String,
    pub prompt: String,
    pub reply: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionCallRecord {
    /// The parsed call, absent when the reply held none.
    pub call: Option<FunctionCall>,
    /// Whether the function is the one designated for the question type.
    pub associated: bool,
    pub result: Result<AnswerValue, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DslRecord {
    pub source: String,
    pub result: Result<AnswerValue, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineResult {
    pub instance_id: String,
    pub technique: Technique,
    pub answer: Answer,
    pub explanation: String,
    pub transcript: Vec<Exchange>,
    /// Seconds spent in [`run`].
    pub wall_time: f64,
    pub llm_calls: usize,
    pub function_calls: Vec<FunctionCallRecord>,
    pub dsl_programs: Vec<DslRecord>,
    /// Reflexion replies that asked for another attempt.
    pub reflexions: usize,
    /// Captured model-side problems, in order.
    pub errors: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Client(#[from] ClientError),
    #[error(transparent)]
    Prompt(#[from] PromptError),
}

/// Run one technique on one instance. `graph` is the instance's structured
/// graph; only the structured techniques read it.
pub fn run(
    t: &TaskInstance,
    graph: &Tkg,
    tech: Technique,
    client: &dyn ChatClient,
    cfg: &PipelineConfig,
) -> Result<PipelineResult, PipelineError> {
    let started = Instant::now();
    let mut result = techniques::run_technique(t, graph, tech, client, cfg)?;
    result.wall_time = started.elapsed().as_secs_f64();
    Ok(result)
}
