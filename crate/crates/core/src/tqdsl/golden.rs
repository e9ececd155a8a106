//! Hand-written pipeline programs, one per question type, that compute the same
//! answer as the solver for a given call without using `call`.

use std::collections::HashSet;
use std::fmt::Write;

use super::ast::id_text;
use crate::funcset::{
    Comparison, Direction, DurationMode, TimeEndpoint, Triplet, TypedCall, Which,
};
use crate::primitives::Endpoint;
use crate::tkg::{Interval, QueryPattern};

/// Names bound by the programs below; ids spelled the same get quoted.
const BINDINGS: &[&str] = &["t", "a", "w", "xs", "lo", "hi", "x", "y"];

fn id(s: &str) -> String {
    let bound: HashSet<String> = BINDINGS.iter().map(|b| b.to_string()).collect();
    id_text(s, &bound)
}

fn slot<T: AsRef<str>>(x: &Option<T>) -> String {
    x.as_ref()
        .map_or_else(|| "*".to_string(), |v| id(v.as_ref()))
}

fn facts(p: &QueryPattern) -> String {
    format!(
        "facts({}, {}, {})",
        slot(&p.subject),
        slot(&p.relation),
        slot(&p.object)
    )
}

fn triple(t: &Triplet) -> String {
    format!(
        "facts({}, {}, {})",
        id(t.subject.as_str()),
        id(t.relation.as_str()),
        id(t.object.as_str())
    )
}

/// `objects` or `subjects`, whichever the pattern leaves open.
fn slot_stage(p: &QueryPattern) -> &'static str {
    if p.subject.is_none() {
        "subjects"
    } else {
        "objects"
    }
}

fn win(w: &Interval) -> String {
    format!("{}, {}", w.start(), w.end())
}

fn ep(e: Endpoint) -> &'static str {
    match e {
        Endpoint::Start => "start",
        Endpoint::End => "end",
    }
}

pub fn golden_program(call: &TypedCall) -> String {
    let mut out = String::new();
    match call {
        TypedCall::Timeline { pattern } => {
            let _ = write!(
                out,
                "{} |> require |> sort(start, asc) |> {}",
                facts(pattern),
                slot_stage(pattern)
            );
        }
        TypedCall::BeforeAfter {
            pattern,
            pivot,
            direction,
        } => {
            let d = match direction {
                Direction::Before => "before",
                Direction::After => "after",
            };
            let _ = write!(
                out,
                "{} |> require |> sort(start, asc) |> {} |> neighbor({}, {d})",
                facts(pattern),
                slot_stage(pattern),
                id(pivot.as_str())
            );
        }
        TypedCall::EventAtTimeT { pattern, time } => {
            let _ = write!(
                out,
                "{} |> require |> sort(start, asc) |> filter_at({time}) |> {} |> distinct",
                facts(pattern),
                slot_stage(pattern)
            );
        }
        TypedCall::EventAtWhatTime {
            triplet,
            endpoint,
            occurrence,
        } => {
            let _ = write!(out, "{} |> require |> sort(start, asc)", triple(triplet));
            if let Some(k) = occurrence {
                let _ = write!(out, " |> nth({k})");
            }
            out.push_str(match endpoint {
                TimeEndpoint::Start => " |> start",
                TimeEndpoint::End => " |> end",
                TimeEndpoint::Interval => " |> interval",
            });
        }
        TypedCall::FirstLast { pattern, which } => {
            let w = match which {
                Which::First => "first",
                Which::Last => "last",
            };
            let _ = write!(
                out,
                "{} |> require |> sort(start, asc) |> {} |> {w}",
                facts(pattern),
                slot_stage(pattern)
            );
        }
        TypedCall::EventAtTheTimeOfAnotherEvent {
            anchor,
            anchor_point,
            pattern,
        } => {
            let _ = writeln!(out, "let t = {} |> {}", triple(anchor), ep(*anchor_point));
            let _ = write!(
                out,
                "{} |> require |> sort(start, asc) |> filter_at(t) |> {} |> distinct",
                facts(pattern),
                slot_stage(pattern)
            );
        }
        TypedCall::NumberOfEventsInTimeInterval { pattern, window } => {
            let _ = write!(
                out,
                "{} |> require |> filter_within({}) |> count",
                facts(pattern),
                win(window)
            );
        }
        TypedCall::RelationDuration {
            triplet,
            occurrence,
        } => {
            let _ = write!(out, "{} |> require |> sort(start, asc)", triple(triplet));
            if let Some(k) = occurrence {
                let _ = write!(out, " |> nth({k})");
            }
            out.push_str(" |> duration");
        }
        TypedCall::GetEntityByDuration { pattern, mode } => {
            let m = match mode {
                DurationMode::Longest => "longest",
                DurationMode::Shortest => "shortest",
            };
            let _ = write!(
                out,
                "{} |> require |> sort(start, asc) |> {m} |> {} |> first",
                facts(pattern),
                slot_stage(pattern)
            );
        }
        TypedCall::FindEntitiesDuringTriplet { anchor, pattern } => {
            let _ = writeln!(out, "let a = {} |> single", triple(anchor));
            let _ = writeln!(out, "let w = a |> interval");
            let _ = write!(
                out,
                "{} |> require |> sort(start, asc) |> except(a) |> filter_overlap(w) |> {} |> distinct",
                facts(pattern),
                slot_stage(pattern)
            );
        }
        TypedCall::GetEntitiesInBetween { pattern, from, to } => {
            let with = |e: &str| {
                let mut p = pattern.clone();
                let e = crate::tkg::EntityId::new(e).expect("valid id");
                if p.subject.is_none() {
                    p.subject = Some(e);
                } else {
                    p.object = Some(e);
                }
                facts(&p)
            };
            let _ = writeln!(
                out,
                "let xs = {} |> require |> sort(start, asc)",
                facts(pattern)
            );
            let _ = writeln!(
                out,
                "let lo = {} |> sort(start, asc) |> first |> start",
                with(from.as_str())
            );
            let _ = writeln!(
                out,
                "let hi = {} |> sort(start, asc) |> first |> start",
                with(to.as_str())
            );
            let _ = write!(
                out,
                "xs |> filter_start(>, lo) |> filter_start(<, hi) |> {}",
                slot_stage(pattern)
            );
        }
        TypedCall::CalculateTotalRelationTime {
            pattern,
            simple_sum,
        } => {
            let total = if *simple_sum {
                "durations |> sum"
            } else {
                "merge_total"
            };
            let _ = write!(out, "{} |> require |> {total}", facts(pattern));
        }
        TypedCall::IsTripletWithinTimespan { triplet, window } => {
            let _ = write!(
                out,
                "{} |> require |> filter_within({}) |> exists",
                triple(triplet),
                win(window)
            );
        }
        TypedCall::CheckIntervalWithoutRelation {
            pattern,
            window,
            min_gap,
        } => {
            let _ = write!(
                out,
                "{} |> gaps({}) |> any(>, {min_gap})",
                facts(pattern),
                win(window)
            );
        }
        TypedCall::CompareTripletDurations {
            first,
            second,
            comparison,
        } => {
            let op = match comparison {
                Comparison::Longer => ">",
                Comparison::Shorter => "<",
            };
            let _ = writeln!(out, "let x = {} |> require |> merge_total", triple(first));
            let _ = writeln!(out, "let y = {} |> require |> merge_total", triple(second));
            let _ = write!(out, "x |> compare({op}, y)");
        }
        TypedCall::SequenceOfRelationsInInterval {
            subject,
            sequence,
            window,
        } => {
            let steps: Vec<String> = sequence
                .iter()
                .map(|(r, e)| format!("[{}, {}]", id(r.as_str()), ep(*e)))
                .collect();
            let require = if sequence.is_empty() {
                ""
            } else {
                " |> require"
            };
            let _ = write!(
                out,
                "facts({}, *, *){require} |> sequence([{}], {})",
                slot(subject),
                steps.join(", "),
                win(window)
            );
        }
        TypedCall::CountRelationsWithDuration {
            pattern,
            predicate,
            window,
        } => {
            let _ = write!(
                out,
                "{} |> require |> filter_overlap({}) |> filter_dur({}, {}) |> count",
                facts(pattern),
                win(window),
                predicate.comparator.symbol(),
                predicate.threshold
            );
        }
    }
    out.push('\n');
    out
}
