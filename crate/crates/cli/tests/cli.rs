#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::{corpus_dir, machine_manifest};
use gu_core::beta::{beta_encode, ValueSequence};
use proptest::prelude::*;
use serde_json::Value;

fn gu(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gu"))
        .args(args)
        .env_remove("GU_FORMAT")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr_lines(o: &Output) -> Vec<Value> {
    String::from_utf8(o.stderr.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn manifests(o: &Output) -> Vec<Value> {
    stderr_lines(o)
        .into_iter()
        .filter(|v| v.get("manifest").is_some())
        .collect()
}

fn jsonl(o: &Output) -> Vec<Value> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn exit_codes_follow_the_corpus_manifest() {
    let dir = corpus_dir().join("machines");
    for row in machine_manifest(&dir) {
        let file = dir.join(&row.file);
        let budget = row.budget.to_string();
        let o = gu(&["run", path(&file), "--budget", &budget, "--format", "jsonl"]);
        let want = match row.expected.as_str() {
            "halt" => 0,
            "loop" => 2,
            _ => 3,
        };
        assert_eq!(o.status.code(), Some(want), "{}", row.file);
        let records = jsonl(&o);
        let last = records.last().unwrap();
        if want != 3 {
            assert_eq!(last["step"].as_u64(), row.steps, "{}", row.file);
        }
        assert_eq!(manifests(&o).len(), 1);
    }
}

#[test]
fn trace_lists_every_visited_configuration() {
    let file = corpus_dir().join("machines/bb2.tm");
    let o = gu(&["run", path(&file), "--trace", "--format", "jsonl"]);
    let records = jsonl(&o);
    assert_eq!(records.len(), 6 + 1 + 1);
    assert!(records[..7].iter().all(|r| r["record"] == "id"));
    assert_eq!(records[7]["outcome"], "halted");
}

#[test]
fn input_override_and_head() {
    let file = corpus_dir().join("machines/parity.tm");
    let odd = gu(&["run", path(&file), "--input", "111", "--format", "jsonl"]);
    let even = gu(&["run", path(&file), "--input", "1 1", "--format", "jsonl"]);
    assert_eq!(odd.status.code(), Some(0));
    assert!(jsonl(&odd)[0]["tape"].as_str().unwrap().contains('1'));
    assert!(!jsonl(&even)[0]["tape"].as_str().unwrap().contains('1'));
    let bad = gu(&["run", path(&file), "--input", "x"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn malformed_machine_reports_its_location() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.tm");
    std::fs::write(&file, "states: a\nalphabet: _ 1\nstart: a\na 1 -> b 1 R\n").unwrap();
    let o = gu(&["run", path(&file)]);
    assert_eq!(o.status.code(), Some(1));
    let lines = stderr_lines(&o);
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["error"]["code"], "E_PARSE");
    assert!(lines[0]["error"]["message"]
        .as_str()
        .unwrap()
        .contains(":4:8:"));
    assert_eq!(
        manifests(&o)[0]["manifest"]["outcome_summary"],
        "error E_PARSE"
    );
}

#[test]
fn usage_errors_are_single_line_codes() {
    for args in [
        &["bogus"][..],
        &["beta", "matches", "0"],
        &["run"],
        &["beta", "encode", "1,x"],
    ] {
        let o = gu(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        let lines = stderr_lines(&o);
        assert_eq!(lines.len(), 2, "{args:?}");
        assert!(lines[0]["error"]["code"]
            .as_str()
            .unwrap()
            .starts_with("E_"));
    }
}

#[test]
fn beta_encode_agrees_with_the_library() {
    let o = gu(&["beta", "encode", "3,1,4", "--format", "jsonl"]);
    let rec = &jsonl(&o)[0];
    let p = beta_encode(&ValueSequence::new(vec![3, 1, 4]).unwrap());
    assert_eq!(rec["b"], p.b().to_string());
    assert_eq!(rec["c"], p.c().to_string());
}

#[test]
fn beta_matches_counts_records() {
    let o = gu(&["beta", "matches", "0", "--bound", "2"]);
    assert_eq!(stdout(&o), "c,b\n1,0\n1,2\n2,0\n");
}

#[test]
fn beta_predict_and_superpose() {
    let o = gu(&["beta", "predict", "0", "--bound", "2", "--format", "jsonl"]);
    let r = jsonl(&o);
    assert_eq!(r.len(), 2);
    assert_eq!(r[0]["frequency"], "2/3");
    let o = gu(&["beta", "superpose", "0:1,3:2", "1:0,2:4"]);
    assert_eq!(stdout(&o), "index,tag,value\n0,0,1\n1,1,0\n2,2,4\n3,3,2\n");
    let o = gu(&["beta", "superpose", "0:1", "0:2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn universe_sim_emits_signatures_and_one_report() {
    let cfg = corpus_dir().join("universes/two_particle.json");
    let o = gu(&[
        "universe",
        "sim",
        "--config",
        path(&cfg),
        "--steps",
        "5",
        "--format",
        "jsonl",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = jsonl(&o);
    assert_eq!(r.len(), 11);
    assert_eq!(r.iter().filter(|x| x["record"] == "signature").count(), 10);
    assert_eq!(r[10]["record"], "report");
    assert_eq!(r[10]["class"], "partially-pre-destined");
}

#[test]
fn collapse_demo_table() {
    let o = gu(&[
        "collapse",
        "demo",
        "--pred",
        "parity",
        "--k",
        "3",
        "--measure",
        "7",
        "--eval",
        "0..10",
        "--format",
        "jsonl",
    ]);
    let r = jsonl(&o);
    assert_eq!(r.len(), 10);
    for (n, rec) in r.iter().enumerate() {
        let before = if n < 3 {
            (n % 2).to_string()
        } else {
            "loop".into()
        };
        let after = if n < 8 {
            (n % 2).to_string()
        } else {
            "loop".into()
        };
        assert_eq!(rec["before"], before.as_str());
        assert_eq!(rec["after"], after.as_str());
    }
    assert_eq!(
        manifests(&o)[0]["manifest"]["outcome_summary"],
        "horizons 3 -> 8"
    );
}

#[test]
fn dovetail_races_two_searches() {
    let parity = corpus_dir().join("machines/parity.tm");
    let zero = format!("zero-of:{}", path(&parity));
    let nonzero = format!("nonzero-of:{}", path(&parity));
    // g(1, y) = (1 + y) mod 2: zero first at y = 1, nonzero already at y = 0.
    let o = gu(&[
        "dovetail", "--task", &zero, "--task", &nonzero, "--args", "1", "--format", "jsonl",
    ]);
    let r = jsonl(&o);
    assert_eq!(r.len(), 1);
    assert_eq!(r[0]["record"], "success");
    assert_eq!(r[0]["label"], "nonzero-of");
    assert_eq!(r[0]["trial"], 0);
    assert_eq!(r[0]["value"], 1);

    let o = gu(&[
        "dovetail",
        "--task",
        &nonzero,
        "--args",
        "1",
        "--max-trials",
        "0",
    ]);
    assert!(stdout(&o).contains("exhausted"));
}

#[test]
fn format_defaults_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_gu"))
        .args(["beta", "matches", "0", "--bound", "2"])
        .env("GU_FORMAT", "jsonl")
        .output()
        .unwrap();
    assert_eq!(jsonl(&o).len(), 3);
}

#[test]
fn corpus_verify_is_byte_reproducible() {
    let a = gu(&["corpus", "verify", "--seed", "3"]);
    let b = gu(&["corpus", "verify", "--seed", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
    assert_eq!(manifests(&a)[0]["manifest"]["seed"], 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn repeated_invocations_are_identical(seq in prop::collection::vec(0u64..5, 1..3), bound in 1u64..60) {
        let s = seq.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        let b = bound.to_string();
        let first = gu(&["beta", "predict", &s, "--bound", &b]);
        let second = gu(&["beta", "predict", &s, "--bound", &b]);
        prop_assert_eq!(first.stdout, second.stdout);
        prop_assert_eq!(first.stderr, second.stderr);
    }
}
