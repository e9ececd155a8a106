//! Acceptance run: one PASS/FAIL/SKIP line per criterion, nonzero exit if
//! any required criterion fails.
//!
//! The live criterion runs only when `TEMPQA_API_KEY` and `TEMPQA_BASE_URL`
//! are set; `TEMPQA_MODEL` picks the model.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;
use tempqa_core::funcset::evaluate;
use tempqa_core::oracle::{self, OracleError};
use tempqa_core::primitives::merge_intervals;
use tempqa_core::ratagen::{generate_graph, generate_instances, import_path, verify_instance, GraphParams};
use tempqa_core::tqdsl::{execute, golden_program, parse, run as run_dsl, DslError, Limits};
use tempqa_core::{dispatch, Interval, QuestionType};
use tempqa_pipeline::evalharness::{aggregate, confidence_report, score_result, ConfidenceReport};
use tempqa_pipeline::orchestrator::{
    run, OracleClient, PipelineConfig, RandomFunctionClient, Technique, TotConfig,
};
use tempqa_core::ratagen::TaskLabel;

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn tempqa(dir: &Path, args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_tempqa"))
        .args(args)
        .current_dir(dir)
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(String::from_utf8_lossy(&out.stdout).into_owned())
    } else {
        Err(format!("tempqa {args:?} failed: {}", String::from_utf8_lossy(&out.stderr)))
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

// ---------------------------------------------------------------------------

fn oracle_equivalence() -> Check {
    let started = Instant::now();
    let mut compared = 0usize;
    for (qi, q) in QuestionType::ALL.into_iter().enumerate() {
        let mut successes = 0;
        for seed in 0..1_000u64 {
            let mut r = common::rng(seed * 31 + qi as u64);
            let g = common::random_tkg(&mut r, 60);
            for _ in 0..3 {
                let call = common::random_call(&mut r, &g, q);
                let got = evaluate(&g, &call);
                match (&got, oracle::evaluate(&g, &call)) {
                    (Ok(a), Ok(b)) if *a == b => successes += 1,
                    (Err(e), Err(OracleError::Func(f))) if *e == f => {}
                    (_, want) => return Err(format!("{q} seed {seed}: solver {got:?} vs oracle {want:?}")),
                }
                compared += 1;
            }
        }
        ensure(successes > 500, || format!("{q}: only {successes} successful comparisons"))?;
    }
    let took = started.elapsed();
    ensure(took < Duration::from_secs(60), || format!("took {}", secs(took)))?;
    Ok(format!("{compared} calls over 17 x 1000 graphs, exact match, {}", secs(took)))
}

fn fixture_values() -> Check {
    let g = common::fixture::fixture();
    let cases = common::fixture::cases();
    for c in &cases {
        common::fixture::check(&g, c)?;
    }
    let names: BTreeSet<&str> = cases.iter().map(|c| c.call.name.as_str()).collect();
    ensure(names.len() == 17, || format!("worked values cover {} functions", names.len()))?;
    Ok(format!("{} worked values over 17 functions", cases.len()))
}

fn dataset() -> Check {
    let started = Instant::now();
    let dir = tempfile::TempDir::new().map_err(|e| e.to_string())?;
    let d = dir.path();
    tempqa(d, &["gen-graph", "--seed", "3", "--out", "g.jsonl"])?;
    tempqa(d, &["gen-dataset", "--graph", "g.jsonl", "--per-type", "10", "--seed", "3", "--out", "d.jsonl"])?;
    let instances = import_path(d.join("d.jsonl")).map_err(|e| e.to_string())?;
    ensure(instances.len() == 170, || format!("{} instances", instances.len()))?;
    for t in &instances {
        let v = verify_instance(t, Some(d)).map_err(|e| e.to_string())?;
        ensure(v.passed(), || format!("{} failed verification", t.id))?;
    }
    let g = generate_graph(&GraphParams { seed: 3, ..GraphParams::default() }).map_err(|e| e.to_string())?;
    let big = generate_instances(&g, 20, &QuestionType::ALL, 3).map_err(|e| e.to_string())?;
    let mut templates: BTreeMap<QuestionType, HashSet<&str>> = BTreeMap::new();
    for t in &big {
        templates.entry(t.question_type).or_default().insert(&t.template);
    }
    let fewest = templates.values().map(HashSet::len).min().unwrap_or(0);
    ensure(templates.len() == 17 && fewest >= 5, || format!("fewest templates per type: {fewest}"))?;
    let took = started.elapsed();
    ensure(took < Duration::from_secs(60), || format!("took {}", secs(took)))?;
    Ok(format!("170 of 170 verified, at least {fewest} templates per type at 20 per type, {}", secs(took)))
}

fn merge_laws() -> Check {
    let mut r = common::rng(4242);
    for case in 0..10_000 {
        let n = r.gen_range(0..=25);
        let max_len = [0, 3, 15][case % 3];
        let ivs: Vec<Interval> = (0..n).map(|_| common::random_interval(&mut r, max_len)).collect();
        let m = merge_intervals(&ivs);
        let fail = |what: &str| format!("case {case}: {what} for {ivs:?}");
        ensure(m.disjoint.windows(2).all(|w| w[0].end() < w[1].start()), || fail("not disjoint"))?;
        ensure(merge_intervals(&m.disjoint).disjoint == m.disjoint, || fail("not a fixpoint"))?;
        let covered: HashSet<i64> = ivs.iter().flat_map(|iv| iv.start()..iv.end()).collect();
        let sum: i64 = ivs.iter().map(Interval::duration).sum();
        let longest = ivs.iter().map(Interval::duration).max().unwrap_or(0);
        ensure(m.total_length == covered.len() as i64, || fail("total length differs from union measure"))?;
        ensure(longest <= m.total_length && m.total_length <= sum, || fail("length bounds"))?;
    }
    Ok("10000 random lists: disjoint, fixpoint, length bounds".into())
}

fn dsl_golden() -> Check {
    let mut compared = 0;
    for (qi, q) in QuestionType::ALL.into_iter().enumerate() {
        for seed in 0..100u64 {
            let mut r = common::rng(20_000 + seed * 17 + qi as u64);
            let g = common::random_tkg(&mut r, 60);
            let call = common::random_call(&mut r, &g, q);
            let src = golden_program(&call);
            let program = parse(&src).map_err(|e| format!("{q}: {e}"))?;
            let got = execute(&program, Some(&g), &Limits::default()).map_err(|e| format!("{q}: {e}"))?.into_answer();
            let want = dispatch(&g, &call.to_call());
            match (&got, &want) {
                (Ok(a), Ok(b)) if a == b => {}
                (Err(DslError::Func(a)), Err(b)) if a == b => {}
                _ => return Err(format!("{q} seed {seed}: dsl {got:?} vs dispatch {want:?}")),
            }
            let zero = Limits { max_steps: 0, ..Limits::default() };
            ensure(run_dsl(&src, Some(&g), &zero) == Err(DslError::StepLimitExceeded { limit: 0 }), || {
                format!("{q}: step limit 0 accepted")
            })?;
            compared += 1;
        }
    }
    Ok(format!("{compared} programs equal dispatch; step limit 0 rejects all"))
}

fn end_to_end() -> Check {
    let g = generate_graph(&GraphParams { seed: 3, ..GraphParams::default() }).map_err(|e| e.to_string())?;
    let instances = generate_instances(&g, 10, &QuestionType::ALL, 3).map_err(|e| e.to_string())?;
    ensure(instances.len() == 170, || format!("{} instances", instances.len()))?;
    let cfg = PipelineConfig::default();
    let mut oracle_rows = Vec::new();
    let mut random_rows = Vec::new();
    for t in &instances {
        let r = run(t, &g, Technique::Cotapi, &OracleClient::new(t, &g), &cfg).map_err(|e| e.to_string())?;
        oracle_rows.push(score_result(t, &r));
        let r = run(t, &g, Technique::Cotapi, &RandomFunctionClient::new(t, 1), &cfg).map_err(|e| e.to_string())?;
        random_rows.push(score_result(t, &r));
    }
    let oracle = aggregate(&oracle_rows);
    let acc = oracle.techniques[0].accuracy;
    ensure(acc == 100.0, || format!("oracle accuracy {acc}"))?;
    let cells = oracle.function_usage.as_ref().map(|u| u.cells());
    ensure(cells == Some([100.0, 0.0, 0.0, 0.0]), || format!("function usage {cells:?}"))?;
    let random = aggregate(&random_rows).techniques[0].accuracy;
    ensure(random < 100.0, || format!("random mock scored {random}"))?;
    Ok(format!("oracle 100.0%, usage 100/0/0/0; random {random:.1}%"))
}

fn call_counts() -> Check {
    let g = generate_graph(&GraphParams { seed: 3, ..GraphParams::default() }).map_err(|e| e.to_string())?;
    let instances = generate_instances(&g, 2, &QuestionType::ALL, 3).map_err(|e| e.to_string())?;
    let cfg = PipelineConfig::default();
    let bound = TotConfig::default().max_calls();
    let mut seen: BTreeMap<&str, BTreeSet<usize>> = BTreeMap::new();
    for tech in Technique::ALL {
        for t in &instances {
            let r = run(t, &g, tech, &OracleClient::new(t, &g), &cfg).map_err(|e| e.to_string())?;
            let n = r.llm_calls;
            let ok = match tech {
                Technique::Direct => n == 1,
                Technique::Cot => n == 3,
                Technique::Cotapi => n == 3,
                Technique::CotapiS => n == 4,
                Technique::Cote => n == 2,
                Technique::CoteS => n == 3,
                Technique::Cotr => (3..=3 + cfg.max_reflexions).contains(&n),
                Technique::Tot => n <= bound,
            };
            ensure(ok, || format!("{} made {n} calls on {}", tech.as_str(), t.id))?;
            seen.entry(tech.as_str()).or_default().insert(n);
        }
    }
    let summary: Vec<String> = seen
        .iter()
        .map(|(k, v)| format!("{k}={}", v.iter().map(usize::to_string).collect::<Vec<_>>().join("|")))
        .collect();
    Ok(format!("{} (tot bound {bound})", summary.join(" ")))
}

fn confidence_arithmetic() -> Check {
    let r = ConfidenceReport::from_matrix([[940, 60], [0, 1000]], 0.8, 0);
    ensure(r.accuracy == Some(97.0), || format!("accuracy {:?}", r.accuracy))?;
    let items = [
        (TaskLabel::Temporal, Some(0.8)),
        (TaskLabel::Temporal, Some(0.799_999)),
        (TaskLabel::Knowledge, Some(0.8)),
        (TaskLabel::Knowledge, Some(0.799_999)),
    ];
    let m = confidence_report(&items, 0.8).matrix;
    ensure(m == [[1, 1], [1, 1]], || format!("boundary matrix {m:?}"))?;
    Ok("940/60/0/1000 gives 97.0%; 0.8 is temporal, 0.799999 knowledge".into())
}

fn performance() -> Check {
    let g = generate_graph(&GraphParams {
        n_entities: 2000,
        n_relations: 20,
        n_facts: 10_000,
        time_range: Interval::new(1000, 2024).map_err(|e| e.to_string())?,
        max_episodes_per_triple: 3,
        seed: 1,
    })
    .map_err(|e| e.to_string())?;
    ensure(g.len() == 10_000, || format!("graph has {} facts", g.len()))?;
    let mut worst = Duration::ZERO;
    let mut r = common::rng(99);
    for q in QuestionType::ALL {
        for _ in 0..20 {
            let call = common::random_call(&mut r, &g, q).to_call();
            let started = Instant::now();
            let _ = dispatch(&g, &call);
            worst = worst.max(started.elapsed());
        }
    }
    ensure(worst < Duration::from_millis(100), || format!("slowest dispatch {:?}", worst))?;
    Ok(format!("slowest of 340 dispatches on 10000 facts: {:.2} ms", worst.as_secs_f64() * 1000.0))
}

fn determinism() -> Check {
    let dir = tempfile::TempDir::new().map_err(|e| e.to_string())?;
    let d = dir.path();
    let read = |name: &str| std::fs::read(d.join(name)).map_err(|e| e.to_string());
    for name in ["g1.jsonl", "g2.jsonl"] {
        tempqa(d, &["gen-graph", "--seed", "7", "--entities", "50", "--relations", "8", "--facts", "120", "--out", name])?;
    }
    ensure(read("g1.jsonl")? == read("g2.jsonl")?, || "graphs differ".into())?;
    for name in ["d1.jsonl", "d2.jsonl"] {
        tempqa(d, &["gen-dataset", "--graph", "g1.jsonl", "--per-type", "10", "--seed", "3", "--out", name])?;
    }
    ensure(read("d1.jsonl")? == read("d2.jsonl")?, || "datasets differ".into())?;
    for mock in ["oracle", "random"] {
        for name in ["t1.jsonl", "t2.jsonl"] {
            tempqa(d, &["eval", "--dataset", "d1.jsonl", "--limit", "34", "--mock", mock, "--transcripts", name])?;
        }
        ensure(read("t1.jsonl")? == read("t2.jsonl")?, || format!("{mock} transcripts differ"))?;
    }
    Ok("graphs, datasets and oracle/random transcripts byte-identical".into())
}

fn live() -> Outcome {
    let (Ok(_), Ok(url)) = (std::env::var("TEMPQA_API_KEY"), std::env::var("TEMPQA_BASE_URL")) else {
        return Outcome::Skip("TEMPQA_API_KEY and TEMPQA_BASE_URL not set".into());
    };
    let model = std::env::var("TEMPQA_MODEL").unwrap_or_else(|_| "gpt-4o".into());
    let result = (|| -> Check {
        let dir = tempfile::TempDir::new().map_err(|e| e.to_string())?;
        let d = dir.path();
        tempqa(d, &["gen-dataset", "--seed", "3", "--per-type", "6", "--out", "d.jsonl"])?;
        let args = ["eval", "--dataset", "d.jsonl", "--limit", "100", "--technique", "direct,cotapi"];
        let live = ["--base-url", url.as_str(), "--model", model.as_str()];
        let json = tempqa(d, &[&args[..], &live[..], &["--format", "json"]].concat())?;
        let report: serde_json::Value = serde_json::from_str(&json).map_err(|e| e.to_string())?;
        let acc = |label: &str| {
            report["techniques"]
                .as_array()
                .and_then(|rows| rows.iter().find(|r| r["technique"] == label))
                .and_then(|r| r["accuracy"].as_f64())
        };
        let (Some(direct), Some(cotapi)) = (acc("direct"), acc("cotapi")) else {
            return Err("report lacks a technique row".into());
        };
        ensure(cotapi >= direct, || format!("cotapi {cotapi:.1}% below direct {direct:.1}%"))?;
        Ok(format!("cotapi {cotapi:.1}% >= direct {direct:.1}% on {model}"))
    })();
    match result {
        Ok(s) => Outcome::Pass(s),
        Err(s) => Outcome::Fail(s),
    }
}

fn main() {
    let required: [Criterion; 10] = [
        ("oracle equivalence", oracle_equivalence),
        ("fixture golden values", fixture_values),
        ("double-oracle dataset", dataset),
        ("interval-merge laws", merge_laws),
        ("DSL golden programs", dsl_golden),
        ("end-to-end plumbing", end_to_end),
        ("technique call counts", call_counts),
        ("confidence arithmetic", confidence_arithmetic),
        ("performance bar", performance),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in required {
        let outcome = match catch_unwind(AssertUnwindSafe(check)) {
            Ok(Ok(detail)) => Outcome::Pass(detail),
            Ok(Err(detail)) => Outcome::Fail(detail),
            Err(_) => Outcome::Fail("panicked".into()),
        };
        if matches!(outcome, Outcome::Fail(_)) {
            failed += 1;
        }
        print_line(name, &outcome);
    }
    print_line("live directional check (optional)", &live());
    if failed > 0 {
        println!("{failed} required criteria failed");
        std::process::exit(1);
    }
}

fn print_line(name: &str, outcome: &Outcome) {
    let (tag, detail) = match outcome {
        Outcome::Pass(d) => ("PASS", d),
        Outcome::Fail(d) => ("FAIL", d),
        Outcome::Skip(d) => ("SKIP", d),
    };
    println!("{tag} {name}: {detail}");
}
