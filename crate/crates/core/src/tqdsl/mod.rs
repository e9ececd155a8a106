//! A small, sandboxed pipeline language over the temporal primitives and the
//! solver functions.
//!
//! A program is a sequence of lines: optional `fact(S, R, O, T0, T1)`
//! declarations, then `let name = <expr>` bindings, then exactly one result
//! expression. An expression is a source piped through stages:
//!
//! ```text
//! facts(E1, R1, *) |> sort(start, asc) |> objects
//! ```
//!
//! Sources are `facts(s, r, o)` (with `*` for any position), a bound name, or
//! `call <function>(args)`. A line starting with `|>` continues the previous
//! expression. There are no loops, no recursion and no I/O; every source and
//! stage application is charged against [`Limits::max_steps`].
//!
//! ```
//! use tempqa_core::tqdsl::{execute, parse, Limits};
//! use tempqa_core::tkg::Tkg;
//!
//! let g = Tkg::load(r#"{"s":"E1","r":"R1","o":"E2","t0":2000,"t1":2005}"#.as_bytes()).unwrap();
//! let p = parse("facts(E1, R1, *) |> merge_total").unwrap();
//! let v = execute(&p, Some(&g), &Limits::default()).unwrap();
//! assert_eq!(v.into_answer().unwrap().to_string(), "5");
//! ```
//!
//! Stages:
//!
//! | stage | input | output |
//! |---|---|---|
//! | `sort(start\|end, asc\|desc)` | facts | facts |
//! | `filter_at(t)`, `filter_overlap(a, b)`, `filter_within(a, b)` | facts | facts |
//! | `filter_dur(op, n)`, `filter_start(op, t)`, `except(xs)` | facts | facts |
//! | `single`, `longest`, `shortest` | facts | one fact |
//! | `objects`, `subjects` | facts | entity list |
//! | `starts`, `ends`, `durations`, `gaps(a, b)` | facts | integer list |
//! | `start`, `end`, `duration`, `interval` | one fact | time point, duration, interval |
//! | `merge_total` | facts | duration |
//! | `sequence([[R, start\|end], ...], a, b)` | facts | boolean |
//! | `require`, `distinct` | any list | same list |
//! | `count`, `exists` | any list | count, boolean |
//! | `first`, `last`, `nth(k)` | any list | element |
//! | `neighbor(e, before\|after)` | entity list | entity |
//! | `sum`, `max`, `min`, `any(op, n)` | integer list | integer, boolean |
//! | `compare(op, x)` | integer | boolean |
//!
//! Solver-level failures (`require` on an empty list, `first` of nothing, a
//! failing `call`) become [`DslValue::Failure`] and stop the pipeline. A
//! failing `let` ends the program with that failure.

mod ast;
mod golden;
mod interp;
mod lexer;
mod parser;

pub use ast::{Arg, CallArg, Expr, FactDecl, Head, Program, Stage, StageOp, Statement};
pub use golden::golden_program;
pub use interp::{execute, DslValue, IntKind, Limits};
pub use parser::parse;

use crate::funcset::FuncError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DslError {
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{line}:{col}: unknown identifier `{name}`")]
    UnknownIdentifier {
        line: usize,
        col: usize,
        name: String,
    },
    #[error("{line}:{col}: `{name}` takes {expected} arguments, got {found}")]
    Arity {
        line: usize,
        col: usize,
        name: String,
        expected: String,
        found: usize,
    },
    #[error("step limit of {limit} exceeded")]
    StepLimitExceeded { limit: u64 },
    #[error("statement limit of {limit} exceeded")]
    StatementLimitExceeded { limit: usize },
    #[error("fact limit of {limit} exceeded")]
    FactLimitExceeded { limit: usize },
    #[error("statement {statement}: {message}")]
    RuntimeType { statement: usize, message: String },
    #[error("statement {statement}: invalid fact: {reason}")]
    InvalidFact { statement: usize, reason: String },
    #[error("program does not declare facts and no graph was supplied")]
    GraphRequired,
    #[error("program declares its own facts but a graph was also supplied")]
    GraphConflict,
    #[error("result is a {0}, not an answer")]
    NotAnAnswer(&'static str),
    #[error(transparent)]
    Func(#[from] FuncError),
}

/// Parse and run in one step.
pub fn run(source: &str, g: Option<&crate::tkg::Tkg>, lim: &Limits) -> Result<DslValue, DslError> {
    execute(&parse(source)?, g, lim)
}

/// Bodies of the fenced code blocks tagged `tqdsl`, in order of appearance.
pub fn extract_fenced(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut current: Option<Vec<&str>> = None;
    for line in text.lines() {
        let t = line.trim();
        match &mut current {
            None => {
                if let Some(rest) = t.strip_prefix("```") {
                    if rest.trim() == "tqdsl" {
                        current = Some(Vec::new());
                    }
                }
            }
            Some(body) => {
                if t.starts_with("```") {
                    out.push(body.join("\n"));
                    current = None;
                } else {
                    body.push(line);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::answer::AnswerValue;
    use crate::tkg::test_support::{ent, fixture_a};

    fn ents(xs: &[&str]) -> AnswerValue {
        AnswerValue::EntityList(xs.iter().map(|x| ent(x)).collect())
    }

    #[test]
    fn pipeline_over_fixture() {
        let g = fixture_a();
        let v = run(
            "facts(E1, R1, *) |> sort(start, asc) |> objects",
            Some(&g),
            &Limits::default(),
        )
        .unwrap();
        assert_eq!(v, DslValue::Answer(ents(&["E2", "E3", "E4"])));
    }

    #[test]
    fn declared_facts_then_call() {
        let g = fixture_a();
        let mut src = String::new();
        for f in g.facts() {
            src.push_str(&format!(
                "fact({}, {}, {}, {}, {})\n",
                f.subject,
                f.relation,
                f.object,
                f.start(),
                f.end()
            ));
        }
        src.push_str("call timeline(E1, R1, *)\n");
        let v = run(&src, None, &Limits::default()).unwrap();
        assert_eq!(v, DslValue::Answer(ents(&["E2", "E3", "E4"])));
        assert_eq!(
            run(&src, Some(&g), &Limits::default()),
            Err(DslError::GraphConflict)
        );
        assert_eq!(
            run("facts(*, *, *) |> count", None, &Limits::default()),
            Err(DslError::GraphRequired)
        );
    }

    #[test]
    fn zero_steps_always_rejects() {
        let g = fixture_a();
        let lim = Limits {
            max_steps: 0,
            ..Limits::default()
        };
        for src in [
            "facts(*, *, *)",
            "call timeline(E1, R1, *)",
            "fact(E1, R1, E2, 1, 2)\nfacts(*, *, *)",
        ] {
            let gr = if src.starts_with("fact(") {
                None
            } else {
                Some(&g)
            };
            assert_eq!(
                run(src, gr, &lim),
                Err(DslError::StepLimitExceeded { limit: 0 }),
                "{src}"
            );
        }
    }

    #[test]
    fn other_limits() {
        let g = fixture_a();
        let lim = Limits {
            max_facts: 2,
            ..Limits::default()
        };
        assert_eq!(
            run("facts(*, *, *) |> count", Some(&g), &lim),
            Err(DslError::FactLimitExceeded { limit: 2 })
        );
        let lim = Limits {
            max_statements: 1,
            ..Limits::default()
        };
        assert_eq!(
            run("let x = facts(*, *, *)\nx |> count", Some(&g), &lim),
            Err(DslError::StatementLimitExceeded { limit: 1 })
        );
        let lim = Limits {
            max_steps: 5,
            ..Limits::default()
        };
        assert!(matches!(
            run("facts(*, *, *) |> count", Some(&g), &lim),
            Err(DslError::StepLimitExceeded { .. })
        ));
    }

    #[test]
    fn failures_are_values() {
        let g = fixture_a();
        let v = run(
            "facts(E9, R9, *) |> require |> objects |> first",
            Some(&g),
            &Limits::default(),
        )
        .unwrap();
        assert_eq!(v, DslValue::Failure(FuncError::NoMatchingFacts));
        assert_eq!(
            v.into_answer(),
            Err(DslError::Func(FuncError::NoMatchingFacts))
        );
        let v = run(
            "call relation_duration(E1, R1)",
            Some(&g),
            &Limits::default(),
        )
        .unwrap();
        assert!(matches!(
            v,
            DslValue::Failure(FuncError::ArgumentType { .. })
        ));
    }

    #[test]
    fn runtime_type_errors() {
        let g = fixture_a();
        let r = run(
            "facts(*, *, *) |> count |> objects",
            Some(&g),
            &Limits::default(),
        );
        assert!(matches!(r, Err(DslError::RuntimeType { statement: 1, .. })));
        let r = run("facts(*, *, *)", Some(&g), &Limits::default())
            .unwrap()
            .into_answer();
        assert_eq!(r, Err(DslError::NotAnAnswer("fact list")));
    }

    #[test]
    fn fenced_blocks() {
        let reply = "Here:\n```tqdsl\nfacts(E1, R1, *)\n  |> count\n```\nand\n```python\nx\n```\n";
        assert_eq!(
            extract_fenced(reply),
            vec!["facts(E1, R1, *)\n  |> count".to_string()]
        );
    }

    #[test]
    fn pretty_is_stable_and_reparses() {
        let src =
            "let t = facts(E1, R1, E2) |> start\nfacts(*, R1, \"t\") |> filter_at(t) |> subjects";
        let p = parse(src).unwrap();
        let text = p.pretty();
        assert_eq!(parse(&text).unwrap(), p);
        assert_eq!(parse(&text).unwrap().pretty(), text);
        assert!(!text.contains('#'));
    }
}
