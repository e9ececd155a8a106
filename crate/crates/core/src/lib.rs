//! Temporal question answering over anonymized temporal knowledge graphs.
//!
//! The crate is organised bottom-up:
//!
//! * [`tkg`] holds the immutable fact store and its file formats.
//! * [`primitives`] implements the four shared temporal building blocks
//!   (sort, count, time filtering, duration filtering) plus interval merging.
//! * [`funcset`] exposes the seventeen deterministic solver functions together
//!   with the JSON schema handed to a language model.
//! * [`oracle`] re-derives every solver answer by exhaustive enumeration. It is
//!   deliberately written without touching `primitives` or the TKG indexes.
//! * [`ratagen`] generates synthetic graphs and question sets with verified
//!   gold answers.
//! * [`tqdsl`] is a small, resource-limited pipeline language used in place of
//!   model-generated general purpose code.

pub mod answer;
pub mod funcset;
pub mod oracle;
pub mod primitives;
pub mod ratagen;
pub mod seed;
pub mod tkg;
pub mod tqdsl;

pub use answer::{AnswerType, AnswerValue};
pub use funcset::{dispatch, FuncError, FunctionCall, QuestionType, TypedCall};
pub use tkg::{EntityId, Fact, Interval, QueryPattern, RelationId, Tkg, TkgError};
