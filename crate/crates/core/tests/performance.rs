//! Any single dispatch on a 10,000-fact graph finishes within 100 ms.

mod common;

use std::time::{Duration, Instant};

use tempqa_core::ratagen::{generate_graph, GraphParams};
use tempqa_core::{dispatch, QuestionType};

#[test]
fn dispatch_on_large_graph_is_fast() {
    let g = generate_graph(&GraphParams {
        n_entities: 2_000,
        n_relations: 20,
        n_facts: 10_000,
        time_range: tempqa_core::Interval::new(1000, 2024).unwrap(),
        max_episodes_per_triple: 3,
        seed: 1,
    })
    .unwrap();
    assert_eq!(g.len(), 10_000);
    let mut r = common::rng(3);
    let mut worst = Duration::ZERO;
    for q in QuestionType::ALL {
        for _ in 0..20 {
            let call = common::random_call(&mut r, &g, q).to_call();
            let t = Instant::now();
            let _ = dispatch(&g, &call);
            worst = worst.max(t.elapsed());
        }
    }
    // Wildcard-heavy calls over the whole graph.
    for name in ["number_of_events_in_time_interval", "calculate_total_relation_time", "count_relations_with_duration"] {
        let mut call = tempqa_core::FunctionCall::new(name)
            .arg("subject", serde_json::json!("?"))
            .arg("relation", serde_json::json!("?"))
            .arg("object", serde_json::json!("?"))
            .arg("window", serde_json::json!([1000, 2024]));
        if name == "count_relations_with_duration" {
            call = call.arg("comparator", serde_json::json!(">")).arg("threshold", serde_json::json!(3));
        }
        if name == "calculate_total_relation_time" {
            call.arguments.shift_remove("window");
        }
        let t = Instant::now();
        dispatch(&g, &call).unwrap();
        worst = worst.max(t.elapsed());
    }
    assert!(worst < Duration::from_millis(100), "slowest dispatch took {worst:?}");
}
