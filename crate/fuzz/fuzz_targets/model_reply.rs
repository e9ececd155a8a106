#![no_main]

use libfuzzer_sys::fuzz_target;
use tempqa_core::funcset::schema_entries;
use tempqa_core::tqdsl::extract_fenced;
use tempqa_core::AnswerType;
use tempqa_pipeline::orchestrator::{extract_answer, parse_completion, parse_score, select_function};

const TYPES: [AnswerType; 7] = [
    AnswerType::Entity,
    AnswerType::EntityList,
    AnswerType::Boolean,
    AnswerType::Count,
    AnswerType::Duration,
    AnswerType::TimePoint,
    AnswerType::TimeInterval,
];

// Everything that reads free-form model output.
fuzz_target!(|data: &[u8]| {
    let Ok(reply) = std::str::from_utf8(data) else { return };
    for t in TYPES {
        let _ = extract_answer(reply, t);
    }
    let _ = select_function(reply, &schema_entries());
    let _ = parse_score(reply);
    let _ = extract_fenced(reply);
    let _ = parse_completion(reply);
});
