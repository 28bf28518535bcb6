use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permwordle")).args(args).env_remove("PERMWORDLE_OUT_DIR").output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/schemas").join(name);
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn assert_valid(validator: &jsonschema::Validator, value: &Value) {
    let errors: Vec<String> = validator.iter_errors(value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?} in {value}");
}

#[test]
fn gf_json_is_exact() {
    let out = stdout(&["gf", "--strategy", "inductive:2,3,4,1", "--n", "4", "--format", "json"]);
    assert_eq!(out, "{\"n\":4,\"coeffs\":{\"1\":1,\"2\":11,\"3\":11,\"4\":1},\"loops\":0}\n");
    assert_valid(&schema("gf.schema.json"), &serde_json::from_str(&out).unwrap());
}

#[test]
fn gf_methods_agree() {
    let a = stdout(&["gf", "--strategy", "inductive:3,5,2,1,4", "--method", "playback", "--format", "json"]);
    let b = stdout(&["gf", "--strategy", "inductive:3,5,2,1,4", "--method", "decomposition", "--format", "json"]);
    assert_eq!(a, b);
    assert!(a.contains("\"6\":1"));
    assert_eq!(run(&["gf", "--strategy", "cs", "--n", "4", "--method", "guess"]).status.code(), Some(1));
}

#[test]
fn play_traces_and_exit_codes() {
    let out = stdout(&["play", "--secret", "4,1,2,3", "--strategy", "cs"]);
    assert!(out.contains("guess 2: [4,1,2,3] correct {1,2,3,4}"));
    assert!(out.contains("solved in 2 guesses"));
    assert!(stdout(&["play", "--secret", "1,2,3,4"]).contains("solved in 1 guess\n"));
    let looped = run(&["play", "--secret", "3,4,1,2", "--strategy", "1;2,1;2,3,1;2,1,4,3"]);
    assert_eq!(looped.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&looped.stdout).contains("looped"));
}

#[test]
fn worked_example_second_guess() {
    let out = stdout(&["play", "--secret", "4,2,1,5,3", "--format", "json"]);
    let trace: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(trace["guesses"][1], serde_json::json!([5, 2, 1, 3, 4]));
    assert_eq!(trace["correct_sets"][0], serde_json::json!([2]));
}

#[test]
fn usage_errors_exit_one() {
    let bad = run(&["play", "--secret", "4,1,x"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("column 5"));
    assert_eq!(run(&["gf", "--strategy", "inductive:2,1,4,3"]).status.code(), Some(1));
    assert_eq!(run(&["gf", "--strategy", "cs"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "--id", "no-such-check"]).status.code(), Some(1));
    assert!(run(&["--help"]).status.success());
}

#[test]
fn average() {
    assert_eq!(stdout(&["avg", "--strategy", "cs", "--n", "4"]), "5/2 (2.500000)\n");
    assert_eq!(
        stdout(&["avg", "--strategy", "cs", "--n", "2", "--format", "csv"]),
        "strategy_id,n,avg_num,avg_den\n1;2,1,2,3,2\n"
    );
    let looping = stdout(&["avg", "--strategy", "1;2,1;2,3,1;2,1,4,3", "--format", "json"]);
    assert!(looping.contains("\"average\":\"inf\""));
}

#[test]
fn scan_csv_columns_and_thread_independence() {
    let one = stdout(&["scan", "--n", "5", "--class", "deranged", "--format", "csv", "--threads", "1"]);
    let two = stdout(&["scan", "--n", "5", "--class", "deranged", "--format", "csv", "--threads", "2"]);
    assert_eq!(one, two);
    let mut lines = one.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("strategy_id,n,a_1,a_2,a_3,a_4,a_5"));
    assert!(header.ends_with(",loops,avg_num,avg_den,rho1,rho2,rho3"));
    let width = header.split(',').count();
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 792);
    for row in &rows {
        // the strategy id is quoted because it contains commas
        let after_id = row.rsplit_once('"').unwrap().1;
        assert_eq!(after_id.split(',').count(), width, "{row}");
    }
    assert!(rows.iter().any(|r| r.contains(",inf,")));
}

#[test]
fn scan_json_rows_match_schema() {
    let out = stdout(&["scan", "--n", "4", "--class", "deranged", "--format", "json"]);
    let value: Value = serde_json::from_str(&out).unwrap();
    let rows = value["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 18);
    let validator = schema("scan-row.schema.json");
    for row in rows {
        assert_valid(&validator, row);
    }
    assert_eq!(value["summary"]["looping_strategies"], 6);
}

#[test]
fn refused_scan_mentions_override() {
    let out = run(&["scan", "--n", "7", "--class", "cyclic"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("refused") && err.contains("--allow-large"), "{err}");
}

#[test]
fn verify_reports() {
    let out = stdout(&["verify", "--id", "csl-cubic", "--min", "3", "--max", "8", "--format", "json", "--no-timing"]);
    let report: Value = serde_json::from_str(&out).unwrap();
    assert_valid(&schema("report.schema.json"), &report);
    assert_eq!(report["status"], "pass");
    let observed: Vec<u64> =
        report["rows"].as_array().unwrap().iter().map(|r| r["observed"]["brute_force"].as_u64().unwrap()).collect();
    assert_eq!(observed, [1, 7, 51, 263, 1100, 4093]);
    let again = stdout(&["verify", "--id", "csl-cubic", "--min", "3", "--max", "8", "--format", "json", "--no-timing"]);
    assert_eq!(out, again);

    let table2 = stdout(&["verify", "--id", "table2", "--format", "json", "--no-timing"]);
    assert!(table2.contains("\"status\":\"erratum-noted\""));
    let failing = run(&["verify", "--id", "conjecture-cubic-deranged", "--no-timing"]);
    assert_eq!(failing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&failing.stdout).contains("mirror image"));
    let out_of_range = run(&["verify", "--id", "avg-optimality", "--min", "3", "--max", "9"]);
    assert_eq!(out_of_range.status.code(), Some(1));
}

#[test]
fn verify_list_and_sequences() {
    let list = stdout(&["verify", "--list"]);
    for id in ["prop-derange", "linquad", "eulerian-cs", "best-rho2", "worst-rho2", "avg-optimality", "table1"] {
        assert!(list.contains(id), "{id}");
    }
    let seq = stdout(&["sequence", "--name", "A385588-prefix", "--format", "json", "--no-timing"]);
    let report: Value = serde_json::from_str(&seq).unwrap();
    assert_valid(&schema("report.schema.json"), &report);
    let prefix: Vec<u64> = report["rows"].as_array().unwrap()[..3]
        .iter()
        .map(|r| r["observed"]["brute_force"].as_u64().unwrap())
        .collect();
    assert_eq!(prefix, [0, 4, 45]);
    assert!(stdout(&["sequence", "--name", "A284843"]).contains("PASS"));
    assert_eq!(run(&["sequence", "--name", "A000001"]).status.code(), Some(1));
}

#[test]
fn tables() {
    let t1 = stdout(&["tables", "--which", "1"]);
    assert_eq!(t1.lines().count(), 11);
    assert!(t1.contains("[4,1,2,3] | {1,2,3,4}"));
    let t2 = stdout(&["tables", "--which", "2"]);
    assert!(t2.contains("5x^6 + 11x^5 + 26x^4 + 51x^3 + 26x^2 + x"));
    assert!(t2.contains("printed twice"));
    assert_eq!(stdout(&["tables", "--which", "2", "--format", "csv"]).lines().count(), 11);
    assert_eq!(run(&["tables", "--which", "3"]).status.code(), Some(1));
}

#[test]
fn output_file_and_directory_variable() {
    let dir = tempfile::tempdir().unwrap();
    let direct = dir.path().join("gf.json");
    stdout(&["gf", "--strategy", "cs", "--n", "3", "--format", "json", "--out", direct.to_str().unwrap()]);
    assert!(std::fs::read_to_string(&direct).unwrap().starts_with("{\"n\":3"));

    let status = Command::new(env!("CARGO_BIN_EXE_permwordle"))
        .args(["tables", "--which", "1", "--out", "nested/t1.txt"])
        .env("PERMWORDLE_OUT_DIR", dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    assert!(std::fs::read_to_string(dir.path().join("nested/t1.txt")).unwrap().contains("g2 = [4,1,2,3]"));
}
