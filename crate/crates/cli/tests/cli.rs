use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn tempqa(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tempqa"))
        .args(args)
        .current_dir(dir)
        .env_remove("TEMPQA_API_KEY")
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = tempqa(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    std::fs::read(dir.join(name)).unwrap()
}

/// A graph and a 170-instance dataset in a fresh directory.
fn workspace() -> TempDir {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["gen-graph", "--seed", "7", "--entities", "50", "--relations", "8", "--facts", "120", "--out", "g.jsonl"]);
    ok(dir.path(), &["gen-dataset", "--graph", "g.jsonl", "--per-type", "10", "--seed", "3", "--out", "d.jsonl"]);
    dir
}

#[test]
fn gen_graph_is_deterministic_and_summarised() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let args = ["gen-graph", "--seed", "7", "--entities", "50", "--relations", "8", "--facts", "120", "--out"];
    let summary = ok(d, &[&args[..], &["a.jsonl"]].concat());
    ok(d, &[&args[..], &["b.jsonl"]].concat());
    assert_eq!(read(d, "a.jsonl"), read(d, "b.jsonl"));
    let lines = String::from_utf8(read(d, "a.jsonl")).unwrap().lines().count();
    assert!(summary.contains(&format!("facts: {lines},")), "{summary}");

    let out = tempqa(d, &["gen-graph", "--facts", "10", "--out", "c.jsonl"]);
    assert_eq!(code(&out), 2);
    assert!(!d.join("c.jsonl").exists());
}

#[test]
fn gen_dataset_counts_and_determinism() {
    let dir = workspace();
    let d = dir.path();
    let text = String::from_utf8(read(d, "d.jsonl")).unwrap();
    assert_eq!(text.lines().count(), 170);
    ok(d, &["gen-dataset", "--graph", "g.jsonl", "--per-type", "10", "--seed", "3", "--out", "d2.jsonl"]);
    assert_eq!(read(d, "d.jsonl"), read(d, "d2.jsonl"));
    assert!(ok(d, &["verify", "--dataset", "d.jsonl"]).contains("verified 170 of 170"));

    ok(d, &["gen-dataset", "--graph", "g.jsonl", "--types", "timeline,before_after", "--per-type", "5", "--seed", "3", "--out", "small.jsonl"]);
    assert_eq!(String::from_utf8(read(d, "small.jsonl")).unwrap().lines().count(), 10);

    ok(d, &["gen-dataset", "--seed", "4", "--per-type", "1", "--out", "own.jsonl"]);
    ok(d, &["gen-dataset", "--seed", "4", "--per-type", "1", "--out", "own2.jsonl"]);
    assert_eq!(read(d, "own.jsonl"), read(d, "own2.jsonl"));
}

#[test]
fn linked_graph_datasets_verify_and_evaluate() {
    let dir = workspace();
    let d = dir.path();
    std::fs::create_dir(d.join("sub")).unwrap();
    ok(d, &["gen-dataset", "--graph", "g.jsonl", "--link-graph", "--per-type", "1", "--seed", "3", "--out", "sub/l.jsonl"]);
    let text = String::from_utf8(read(d, "sub/l.jsonl")).unwrap();
    assert!(text.lines().all(|l| l.contains("\"tkg\":\"../g.jsonl\"")), "{text}");
    assert!(ok(d, &["verify", "--dataset", "sub/l.jsonl"]).contains("verified 17 of 17"));
    assert!(ok(d, &["eval", "--dataset", "sub/l.jsonl", "--technique", "cote", "--mock", "oracle"]).contains("100.0%"));
}

#[test]
fn corrupted_inputs_are_domain_errors() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    std::fs::write(d.join("bad.jsonl"), "{\"s\":\"E1\",\"r\":\"R1\"\n").unwrap();
    let out = tempqa(d, &["gen-dataset", "--graph", "bad.jsonl", "--seed", "3", "--out", "d.jsonl"]);
    assert_eq!(code(&out), 1);
    let out = tempqa(d, &["verify", "--dataset", "bad.jsonl"]);
    assert_eq!(code(&out), 1);
    std::fs::write(d.join("conf.jsonl"), "{\"id\":\"q1\",\"question\":\"When?\",\"excerpt\":\"\"}\n").unwrap();
    let out = tempqa(d, &["confidence", "--input", "conf.jsonl", "--mock", "oracle"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn oracle_eval_is_perfect_and_reaggregates() {
    let dir = workspace();
    let d = dir.path();
    let json = ok(d, &["eval", "--dataset", "d.jsonl", "--technique", "cotapi", "--mock", "oracle", "--rows", "rows.jsonl", "--format", "json"]);
    let report: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(report["techniques"][0]["accuracy"], 100.0);
    assert_eq!(report["function_usage"]["associated_true"], 100.0);
    let again = ok(d, &["report", "--rows", "rows.jsonl", "--format", "json"]);
    let again: serde_json::Value = serde_json::from_str(&again).unwrap();
    assert_eq!(report["per_type"], again["per_type"]);
    assert_eq!(report["token_bins"], again["token_bins"]);

    let csv = ok(d, &["report", "--rows", "rows.jsonl", "--format", "csv"]);
    assert!(csv.starts_with("section,Method,Accuracy"));
    let text = ok(d, &["report", "--rows", "rows.jsonl"]);
    assert!(text.starts_with("Method"));
}

#[test]
fn mock_transcripts_are_byte_identical() {
    let dir = workspace();
    let d = dir.path();
    for (i, mock) in ["oracle", "random"].iter().enumerate() {
        let a = format!("t{i}a.jsonl");
        let b = format!("t{i}b.jsonl");
        ok(d, &["eval", "--dataset", "d.jsonl", "--limit", "34", "--mock", mock, "--transcripts", &a]);
        ok(d, &["eval", "--dataset", "d.jsonl", "--limit", "34", "--mock", mock, "--transcripts", &b]);
        assert_eq!(read(d, &a), read(d, &b));
        assert_eq!(String::from_utf8(read(d, &a)).unwrap().lines().count(), 34 * 8);
    }
}

#[test]
fn scripted_mock_gives_one_row_per_technique() {
    let dir = workspace();
    let d = dir.path();
    std::fs::write(d.join("script.json"), r#"{"": "```json\n{\"explanation\": \"guess\", \"answer\": \"E1\"}\n```"}"#).unwrap();
    let text = ok(d, &["eval", "--dataset", "d.jsonl", "--technique", "direct,cotapi", "--mock", "script.json", "--limit", "17"]);
    let header: Vec<&str> = text.lines().take_while(|l| !l.is_empty()).collect();
    assert_eq!(header.len(), 3, "{text}");
    assert!(header[1].starts_with("Direct") && header[2].starts_with("CoTAPI"));

    std::fs::write(d.join("short.json"), r#"["only one reply"]"#).unwrap();
    let out = tempqa(d, &["eval", "--dataset", "d.jsonl", "--technique", "cot", "--mock", "short.json", "--limit", "1"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn live_eval_without_key_fails_before_any_request() {
    let dir = workspace();
    let d = dir.path();
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    listener.set_nonblocking(true).unwrap();
    let url = format!("http://{}", listener.local_addr().unwrap());
    let out = tempqa(d, &["eval", "--dataset", "d.jsonl", "--technique", "direct", "--base-url", &url]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("TEMPQA_API_KEY"));
    assert!(listener.accept().is_err(), "a request reached the endpoint");

    std::fs::write(d.join("live.conf"), format!("base_url = {url}\n")).unwrap();
    let out = tempqa(d, &["--config", "live.conf", "eval", "--dataset", "d.jsonl"]);
    assert_eq!(code(&out), 2);
    assert!(listener.accept().is_err());
}

#[test]
fn backend_choice_is_exclusive() {
    let dir = workspace();
    let d = dir.path();
    let out = tempqa(d, &["eval", "--dataset", "d.jsonl"]);
    assert_eq!(code(&out), 2);
    let out = tempqa(d, &["eval", "--dataset", "d.jsonl", "--mock", "oracle", "--base-url", "http://x"]);
    assert_eq!(code(&out), 2);
    let out = tempqa(d, &["eval", "--dataset", "d.jsonl", "--mock", "missing.json"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn config_file_precedence() {
    let dir = workspace();
    let d = dir.path();
    std::fs::write(d.join("run.conf"), "# eval defaults\ndataset = d.jsonl\ntechniques = direct\n").unwrap();
    let text = ok(d, &["--config", "run.conf", "eval", "--mock", "oracle", "--limit", "17"]);
    assert!(text.lines().nth(1).unwrap().starts_with("Direct"));
    assert!(!text.contains("CoT "));
    let text = ok(d, &["--config", "run.conf", "eval", "--mock", "oracle", "--limit", "17", "--technique", "cot"]);
    assert!(text.lines().nth(1).unwrap().starts_with("CoT "));

    std::fs::write(d.join("seed.conf"), "seed = 11\n").unwrap();
    ok(d, &["--config", "seed.conf", "gen-graph", "--out", "s1.jsonl"]);
    ok(d, &["gen-graph", "--seed", "11", "--out", "s2.jsonl"]);
    assert_eq!(read(d, "s1.jsonl"), read(d, "s2.jsonl"));

    for bad in ["api_key = sk-secret\n", "colour = blue\n", "seed = lots\n"] {
        std::fs::write(d.join("bad.conf"), bad).unwrap();
        let out = tempqa(d, &["--config", "bad.conf", "gen-graph", "--out", "x.jsonl"]);
        assert_eq!(code(&out), 2, "{bad}");
    }
}

#[test]
fn confidence_command() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(d, &["gen-dataset", "--seed", "3", "--per-type", "2", "--out", "d.jsonl", "--confidence-out", "c.jsonl", "--knowledge", "20"]);
    let text = ok(d, &["confidence", "--input", "c.jsonl", "--mock", "oracle", "--scores", "s.jsonl"]);
    assert!(text.contains("Threshold: 0.8"), "{text}");
    assert!(text.contains("Accuracy: 100.0%"));
    let csv = ok(d, &["confidence", "--input", "c.jsonl", "--mock", "oracle", "--format", "csv"]);
    assert!(csv.contains("Temporal,0,34"), "{csv}");
    let above = ok(d, &["confidence", "--input", "c.jsonl", "--mock", "oracle", "--threshold", "1.01", "--format", "csv"]);
    assert!(above.contains("Temporal,34,0"), "{above}");

    ok(d, &["eval", "--dataset", "d.jsonl", "--technique", "direct", "--mock", "oracle", "--rows", "r.jsonl"]);
    let text = ok(d, &["report", "--rows", "r.jsonl", "--confidence", "s.jsonl"]);
    assert!(text.contains("Actual \\ Predicted"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    for args in [&["frobnicate"][..], &["eval", "--format", "yaml"], &["report"]] {
        assert_eq!(code(&tempqa(dir.path(), args)), 2, "{args:?}");
    }
    assert_eq!(code(&tempqa(dir.path(), &["--help"])), 0);
}

/// Flags named in the README section of each subcommand, and nothing more.
#[test]
fn help_matches_readme() {
    let readme = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../README.md")).unwrap();
    let flags = |text: &str| -> std::collections::BTreeSet<String> {
        text.split(|c: char| !(c.is_ascii_alphanumeric() || c == '-'))
            .filter(|w| w.starts_with("--") && w[2..].starts_with(|c: char| c.is_ascii_lowercase()))
            .map(str::to_string)
            .collect()
    };
    let dir = TempDir::new().unwrap();
    for sub in ["gen-graph", "gen-dataset", "verify", "eval", "confidence", "report"] {
        let marker = format!("#### `tempqa {sub}`");
        let start = readme.find(&marker).unwrap_or_else(|| panic!("README lacks {marker}"));
        let section = &readme[start + marker.len()..];
        let section = &section[..section.find("####").unwrap_or(section.len())];
        let help = ok(dir.path(), &[sub, "--help"]);
        let mut in_help = flags(&help);
        in_help.remove("--help");
        assert_eq!(flags(section), in_help, "{sub}");
    }
}
