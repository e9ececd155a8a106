//! Golden DSL programs agree with the solver functions, and the printer
//! round-trips.

mod common;

use tempqa_core::tqdsl::{execute, golden_program, parse, run, DslError, Limits};
use tempqa_core::{dispatch, QuestionType};

#[test]
fn golden_programs_match_dispatch() {
    for (qi, q) in QuestionType::ALL.into_iter().enumerate() {
        let mut answered = 0;
        for seed in 0..100u64 {
            let mut r = common::rng(10_000 + seed * 17 + qi as u64);
            let g = common::random_tkg(&mut r, 60);
            let call = common::random_call(&mut r, &g, q);
            let src = golden_program(&call);
            let program = parse(&src).unwrap_or_else(|e| panic!("{q}: {e}\n{src}"));
            let got = execute(&program, Some(&g), &Limits::default())
                .unwrap_or_else(|e| panic!("{q}: {e}\n{src}"))
                .into_answer();
            let want = dispatch(&g, &call.to_call());
            match (&got, &want) {
                (Ok(a), Ok(b)) => {
                    assert_eq!(a, b, "{q} seed {seed}\n{src}");
                    answered += 1;
                }
                (Err(DslError::Func(a)), Err(b)) => assert_eq!(a, b, "{q} seed {seed}\n{src}"),
                _ => panic!("{q} seed {seed}: dsl {got:?} vs dispatch {want:?}\n{src}"),
            }
        }
        assert!(answered >= 20, "{q}: only {answered} successful comparisons");
    }
}

#[test]
fn zero_step_limit_rejects_every_golden_program() {
    let lim = Limits {
        max_steps: 0,
        ..Limits::default()
    };
    let mut r = common::rng(5);
    let g = common::random_tkg(&mut r, 30);
    for q in QuestionType::ALL {
        let src = golden_program(&common::random_call(&mut r, &g, q));
        assert_eq!(run(&src, Some(&g), &lim), Err(DslError::StepLimitExceeded { limit: 0 }), "{src}");
    }
}

fn corpus() -> Vec<String> {
    let mut out: Vec<String> = [
        "facts(E1, R1, *) |> sort(start, asc) |> objects",
        "facts(*, *, *)\n  |> filter_dur(>=, 3)\n  |> count",
        "fact(E1, R1, E2, 2000, 2005)\nfact(\"odd id\", R1, E2, 1990, 1991)\ncall timeline(*, R1, E2)",
        "let x = facts(E1, R1, E2) |> first\nx |> interval",
        "call event_at_what_time(E1, R1, E2, endpoint=interval, occurrence=2)",
        "call count_relations_with_duration(E1, *, *, comparator=\">=\", threshold=3, window=[1990, 2020])",
        "facts(*, R2, *) |> sort(end, desc) |> subjects |> distinct |> nth(2)",
        "facts(E4, *, *) |> sequence([[R1, start], [R2, end]], [1990, 2010])",
        "facts(*, *, E3) |> durations |> max",
        "let t = facts(E1, R1, E2) |> start\nfacts(*, *, \"t\") |> filter_at(t) |> exists",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let mut r = common::rng(99);
    let g = common::random_tkg(&mut r, 40);
    while out.len() < 61 {
        for q in QuestionType::ALL {
            out.push(golden_program(&common::random_call(&mut r, &g, q)));
        }
    }
    out
}

#[test]
fn pretty_print_round_trips_on_corpus() {
    let corpus = corpus();
    assert!(corpus.len() >= 50);
    for src in &corpus {
        let p = parse(src).unwrap_or_else(|e| panic!("{e}\n{src}"));
        let text = p.pretty();
        let again = parse(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
        assert_eq!(again, p, "{src}");
        assert_eq!(again.pretty(), text, "printer is not stable for {src}");
    }
}
