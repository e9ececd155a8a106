//! The six-fact fixture and its worked values. Each expected value is checked
//! against the oracle first, then against the solver.

use serde_json::{json, Value};
use tempqa_core::oracle::{self, OracleError};
use tempqa_core::{dispatch, AnswerValue, FuncError, FunctionCall, Tkg, TypedCall};

pub fn fixture() -> Tkg {
    Tkg::load(
        r#"{"s":"E1","r":"R1","o":"E2","t0":2000,"t1":2005}
{"s":"E1","r":"R1","o":"E3","t0":2006,"t1":2010}
{"s":"E1","r":"R1","o":"E4","t0":2012,"t1":2020}
{"s":"E5","r":"R1","o":"E2","t0":2001,"t1":2003}
{"s":"E1","r":"R2","o":"E6","t0":2004,"t1":2008}
{"s":"E7","r":"R1","o":"E2","t0":2003,"t1":2012}"#
            .as_bytes(),
    )
    .unwrap()
}

pub fn call(name: &str, args: Value) -> FunctionCall {
    let mut c = FunctionCall::new(name);
    for (k, v) in args.as_object().unwrap() {
        c = c.arg(k, v.clone());
    }
    c
}

fn answer(v: Value) -> AnswerValue {
    serde_json::from_value(v).unwrap()
}

fn ents(xs: &[&str]) -> AnswerValue {
    answer(json!({"type": "entity_list", "value": xs}))
}

fn ent(x: &str) -> AnswerValue {
    answer(json!({"type": "entity", "value": x}))
}

pub struct Case {
    pub call: FunctionCall,
    pub expected: Result<AnswerValue, FuncError>,
}

fn case(name: &str, args: Value, expected: Result<AnswerValue, FuncError>) -> Case {
    Case {
        call: call(name, args),
        expected,
    }
}

/// Oracle first, then the solver; the error names the disagreeing side.
pub fn check(g: &Tkg, c: &Case) -> Result<(), String> {
    let typed = TypedCall::from_call(&c.call).map_err(|e| format!("{}: {e}", c.call))?;
    let from_oracle = match oracle::evaluate(g, &typed) {
        Ok(v) => Ok(v),
        Err(OracleError::Func(f)) => Err(f),
        Err(other) => return Err(format!("{}: {other}", c.call)),
    };
    if from_oracle != c.expected {
        return Err(format!("oracle {from_oracle:?} vs worked value {:?} for {}", c.expected, c.call));
    }
    let solved = dispatch(g, &c.call);
    if solved != from_oracle {
        return Err(format!("solver {solved:?} vs oracle {from_oracle:?} for {}", c.call));
    }
    Ok(())
}

pub fn cases() -> Vec<Case> {
    let mut v = vec![
        case("timeline", json!({"subject": "E1", "relation": "R1", "object": "?"}), Ok(ents(&["E2", "E3", "E4"]))),
        case("timeline", json!({"subject": "?", "relation": "R1", "object": "E2"}), Ok(ents(&["E1", "E5", "E7"]))),
    ];

    let p = |pivot: &str, d: &str| json!({"subject": "E1", "relation": "R1", "object": "?", "pivot": pivot, "direction": d});
    v.push(case("before_after", p("E3", "before"), Ok(ent("E2"))));
    v.push(case("before_after", p("E3", "after"), Ok(ent("E4"))));
    v.push(case("before_after", p("E2", "before"), Err(FuncError::NoMatchingFacts)));

    let p = |t: i64| json!({"subject": "?", "relation": "R1", "object": "E2", "time": t});
    v.push(case("event_at_time_t", p(2002), Ok(ents(&["E1", "E5"]))));
    v.push(case("event_at_time_t", p(2010), Ok(ents(&["E7"]))));
    v.push(case("event_at_time_t", p(1990), Ok(ents(&[]))));

    let p = |e: &str| json!({"subject": "E1", "relation": "R1", "object": "E3", "endpoint": e});
    v.push(case(
        "event_at_what_time",
        p("interval"),
        Ok(answer(json!({"type": "time_interval", "value": [2006, 2010]}))),
    ));
    v.push(case("event_at_what_time", p("end"), Ok(AnswerValue::TimePoint(2010))));

    let p = |w: &str| json!({"subject": "E1", "relation": "R1", "object": "?", "which": w});
    v.push(case("first_last", p("first"), Ok(ent("E2"))));
    v.push(case("first_last", p("last"), Ok(ent("E4"))));

    let p = |o: &str| {
        json!({"anchor": ["E1", "R1", o], "anchor_point": "start", "subject": "E1", "relation": "R2", "object": "?"})
    };
    v.push(case("event_at_the_time_of_another_event", p("E3"), Ok(ents(&["E6"]))));
    v.push(case("event_at_the_time_of_another_event", p("E2"), Ok(ents(&[]))));

    let p = |a: i64, b: i64| json!({"subject": "E1", "relation": "R1", "object": "?", "window": [a, b]});
    v.push(case("number_of_events_in_time_interval", p(2000, 2011), Ok(AnswerValue::Count(2))));
    v.push(case("number_of_events_in_time_interval", p(1900, 2100), Ok(AnswerValue::Count(3))));

    v.push(case("relation_duration", json!({"subject": "E1", "relation": "R1", "object": "E3"}), Ok(AnswerValue::Duration(4))));
    v.push(case(
        "relation_duration",
        json!({"subject": "E1", "relation": "R1", "object": "E2", "occurrence": 1}),
        Ok(AnswerValue::Duration(5)),
    ));
    v.push(case(
        "relation_duration",
        json!({"subject": "E1", "relation": "R1", "object": "E2", "occurrence": 2}),
        Err(FuncError::OccurrenceOutOfRange {
            requested: 2,
            available: 1,
        }),
    ));

    let p = |m: &str| json!({"subject": "E1", "relation": "R1", "object": "?", "mode": m});
    v.push(case("get_entity_by_duration", p("longest"), Ok(ent("E4"))));
    v.push(case("get_entity_by_duration", p("shortest"), Ok(ent("E3"))));

    let p = |o: &str| json!({"anchor": ["E1", "R1", o], "subject": "?", "relation": "R1", "object": "E2"});
    v.push(case("find_entities_during_triplet", p("E2"), Ok(ents(&["E5", "E7"]))));
    v.push(case("find_entities_during_triplet", p("E4"), Ok(ents(&["E7"]))));

    let p = |a: &str, b: &str| json!({"subject": "E1", "relation": "R1", "object": "?", "from": a, "to": b});
    v.push(case("get_entities_in_between", p("E2", "E4"), Ok(ents(&["E3"]))));
    v.push(case("get_entities_in_between", p("E2", "E3"), Ok(ents(&[]))));

    v.push(case(
        "calculate_total_relation_time",
        json!({"subject": "E1", "relation": "R1", "object": "?"}),
        Ok(AnswerValue::Duration(17)),
    ));
    v.push(case(
        "calculate_total_relation_time",
        json!({"subject": "?", "relation": "R1", "object": "E2"}),
        Ok(AnswerValue::Duration(12)),
    ));

    let p = |a: i64, b: i64| json!({"subject": "E1", "relation": "R1", "object": "E2", "window": [a, b]});
    v.push(case("is_triplet_within_timespan", p(1999, 2006), Ok(AnswerValue::Boolean(true))));
    v.push(case("is_triplet_within_timespan", p(2001, 2006), Ok(AnswerValue::Boolean(false))));

    let p = |g: i64| json!({"subject": "E1", "relation": "R1", "object": "?", "window": [2000, 2020], "min_gap": g});
    v.push(case("check_interval_without_relation", p(2), Ok(AnswerValue::Boolean(false))));
    v.push(case("check_interval_without_relation", p(1), Ok(AnswerValue::Boolean(true))));

    let p = |c: &str| json!({"first": ["E1", "R1", "E2"], "second": ["E1", "R1", "E4"], "comparison": c});
    v.push(case("compare_triplet_durations", p("longer"), Ok(AnswerValue::Boolean(false))));
    v.push(case("compare_triplet_durations", p("shorter"), Ok(AnswerValue::Boolean(true))));

    v.push(case(
        "sequence_of_relations_in_interval",
        json!({"subject": "E1", "sequence": [["R2", "start"], ["R1", "end"]], "window": [2004, 2006]}),
        Ok(AnswerValue::Boolean(true)),
    ));
    v.push(case(
        "sequence_of_relations_in_interval",
        json!({"subject": "E1", "sequence": [["R1", "end"], ["R2", "start"]], "window": [2004, 2005]}),
        Ok(AnswerValue::Boolean(false)),
    ));

    let p = |c: &str, n: i64| {
        json!({"subject": "E1", "relation": "R1", "object": "?", "comparator": c, "threshold": n, "window": [2000, 2020]})
    };
    v.push(case("count_relations_with_duration", p(">=", 4), Ok(AnswerValue::Count(3))));
    v.push(case("count_relations_with_duration", p(">", 5), Ok(AnswerValue::Count(1))));
    v
}
