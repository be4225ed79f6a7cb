use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superext"))
        .args(args)
        .env_remove("SUPEREXT_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn rank_one_cohomology() {
    let out = run(&["cohomology", "--field", "3", "--r", "1", "--s", "0", "--maxdeg", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let poincare: Vec<u64> = serde_json::from_value(v["poincare"].clone()).unwrap();
    assert_eq!(poincare, (1..=9).collect::<Vec<_>>());
    assert_eq!(v["passed"], true);
    assert!(v["presentation"]["relations"].as_array().unwrap().iter().all(|r| r["holds"] == true));
    assert_eq!(v["quotient"]["dims"], serde_json::json!([1, 2, 2, 1]));
    assert!(v["code_version"].as_str().unwrap().starts_with("superext-"));
}

#[test]
fn main_relations_over_f9() {
    let out = run(&["cohomology", "--field", "3^2", "--r", "0", "--s", "2", "--mu", "1,w", "--maxdeg", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["main_theorem"]["exponent"], 6);
    assert_eq!(v["passed"], true);
}

#[test]
fn invalid_input_exits_with_two() {
    let out = run(&["cohomology", "--field", "3", "--r", "0", "--s", "2", "--mu", "1,2"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "invalid_input");
    assert_eq!(run(&["cohomology", "--field", "4"]).status.code(), Some(2));
    assert_eq!(run(&["cohomology", "--r", "0", "--s", "1"]).status.code(), Some(2));
    assert_eq!(run(&["rankvariety", "--i", "3"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic_with_and_without_cache() {
    let args = ["cohomology", "--field", "3", "--r", "1", "--s", "1", "--mu", "1", "--maxdeg", "8"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    let cached: Vec<&str> = args.iter().copied().chain(["--cache-dir", dir.path().to_str().unwrap()]).collect();
    let first = run(&cached);
    let second = run(&cached);
    assert_eq!(first.stdout, a.stdout);
    assert_eq!(second.stdout, a.stdout);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn module_commands() {
    let out = run(&["sympowers", "--field", "3", "--r", "1", "--s", "1", "--mu", "1", "--max-n", "18"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["suite"]["steinberg"], serde_json::json!([true, true]));

    let out = run(&["invariants", "--field", "3", "--r", "1", "--s", "0", "--maxdeg", "9"]);
    assert_eq!(json(&out)["dims"], serde_json::json!([1, 1, 1, 2, 2, 2, 3, 3, 3, 4]));

    let out = run(&["rankvariety", "--field", "3", "--r", "1", "--s", "1", "--mu", "1", "--i", "1", "--sample-field", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["non_free"], serde_json::json!([["1", "1"], ["2", "2"]]));

    let out = run(&["rankvariety", "--field", "3", "--r", "1", "--s", "1", "--mu", "1", "--i", "1", "--sample-field", "3^2"]);
    assert_eq!(json(&out)["non_free"].as_array().unwrap().len(), 8);
}

#[test]
fn csv_and_text_formats() {
    let out = run(&["cohomology", "--field", "5", "--r", "1", "--s", "0", "--maxdeg", "4", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,even,odd,total");
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[2], "1,1,1,2");
    let out = run(&["invariants", "--format", "text", "--maxdeg", "3"]);
    assert!(String::from_utf8(out.stdout).unwrap().lines().last().unwrap().ends_with("true"));
}
