//! Prompting pipelines over temporal question answering tasks, and the
//! scoring and reporting that turns their results into tables.
//!
//! * [`orchestrator`] runs the eight techniques against a chat client (live
//!   or mocked) and estimates temporal confidence.
//! * [`evalharness`] scores pipeline answers, aggregates them into reports and
//!   computes the confidence confusion matrix.

pub mod evalharness;
pub mod orchestrator;
