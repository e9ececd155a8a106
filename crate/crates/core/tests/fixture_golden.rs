//! Worked values over the shared six-fact fixture, one test per function.

mod common;

use serde_json::json;
use tempqa_core::{dispatch, FuncError, FunctionCall, QuestionType};

use common::fixture::{call, cases, check, fixture};

fn check_all(name: &str) {
    let g = fixture();
    let mine: Vec<_> = cases().into_iter().filter(|c| c.call.name == name).collect();
    assert!(!mine.is_empty(), "no worked values for {name}");
    for c in &mine {
        check(&g, c).unwrap_or_else(|e| panic!("{e}"));
    }
}

macro_rules! per_function {
    ($($f:ident),* $(,)?) => {
        $(#[test] fn $f() { check_all(stringify!($f)); })*
    };
}

per_function!(
    timeline,
    before_after,
    event_at_time_t,
    event_at_what_time,
    first_last,
    event_at_the_time_of_another_event,
    number_of_events_in_time_interval,
    relation_duration,
    get_entity_by_duration,
    find_entities_during_triplet,
    get_entities_in_between,
    calculate_total_relation_time,
    is_triplet_within_timespan,
    check_interval_without_relation,
    compare_triplet_durations,
    sequence_of_relations_in_interval,
    count_relations_with_duration,
);

#[test]
fn every_function_has_worked_values() {
    let all = cases();
    for q in QuestionType::ALL {
        assert!(all.iter().any(|c| c.call.name == q.name()), "{q}");
    }
}

#[test]
fn dispatch_errors() {
    let g = fixture();
    assert_eq!(
        dispatch(&g, &FunctionCall::new("nonexistent_fn")),
        Err(FuncError::UnknownFunction("nonexistent_fn".into()))
    );
    assert!(matches!(
        dispatch(&g, &call("relation_duration", json!({"subject": "E1"}))),
        Err(FuncError::ArgumentType { .. })
    ));
}
