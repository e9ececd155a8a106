//! Synthetic benchmark generation.
//!
//! [`generate_graph`] draws an anonymized temporal graph, [`generate_instances`]
//! turns it into question/answer pairs whose gold answers come from the
//! solver functions, and [`verify_instance`] re-derives every gold answer with
//! the independent [`oracle`](crate::oracle).

mod confidence;
mod dataset;
mod graph;
mod instances;
mod templates;

pub use confidence::{generate_knowledge_questions, ConfidenceItem, TaskLabel};
pub use dataset::{export, import, import_path, read_jsonl, write_jsonl};
pub use graph::{generate_graph, GraphParams};
pub use instances::{
    generate_instances, generate_instances_with, verify_instance, InstanceConfig, TaskInstance,
    TkgRef, Verification, MAX_ATTEMPTS,
};
pub use templates::{allowed_placeholders, fill, placeholders_in, templates_for, QuestionTemplate};

use crate::funcset::QuestionType;
use crate::tkg::TkgError;

#[derive(Debug, thiserror::Error)]
pub enum GenError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("infeasible parameters: {0}")]
    InfeasibleParams(String),
    #[error("no satisfiable instance of {0} found within the retry bound")]
    UnsatisfiableType(QuestionType),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Tkg(#[from] TkgError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
