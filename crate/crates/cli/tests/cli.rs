use std::process::{Command, Output};

use serde_json::Value;

fn valdiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_valdiv")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    });
    assert_eq!(v["schema"], 1);
    v
}

#[test]
fn cd_adds_the_tower_height() {
    let out = valdiv(&["cd", "decl(cd_q=1)((x))((y))", "--q", "3", "--q", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "cd");
    assert_eq!(v["layers"], 2);
    for row in v["primes"].as_array().unwrap() {
        assert_eq!(row["r_q"], 2);
        assert_eq!(row["cd_q"], "3");
    }
    let v = json(&valdiv(&["cd", "F5((t))", "--q", "5", "--q", "3"]));
    assert!(v["primes"][0]["cd_q"].is_null());
    assert_eq!(v["primes"][1]["cd_q"], "2");
}

#[test]
fn input_errors_exit_with_two() {
    let out = valdiv(&["cd", "F5((t)"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1, column 6"));
    assert_eq!(valdiv(&["cd", "F5((t))", "--q", "4"]).status.code(), Some(2));
    assert_eq!(valdiv(&["cd", "F5((t))", "--assert-cd", "3=5"]).status.code(), Some(2));
    assert_eq!(valdiv(&["classify", "--algebra", "symbol(n=2, a=1, b=t) over Q((t))"]).status.code(), Some(0));
    assert_eq!(valdiv(&["example", "4"]).status.code(), Some(2));
    assert_eq!(valdiv(&["--precision", "0", "example", "1"]).status.code(), Some(2));
}

#[test]
fn classify_reports_the_ramification_class() {
    let out = valdiv(&["--precision", "16", "classify", "--algebra", "symbol(n=3, omega=2, a=x, b=y) over F7((x))((y))"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["class"], "tame totally ramified");
    assert_eq!(v["report"]["index"], 9);
    assert_eq!(v["report"]["value_group"]["denominator"], 3);
}

#[test]
fn witnesses_are_verified_and_seeded() {
    let args = ["--precision", "16", "--seed", "7", "sk1-witness", "--algebra", "symbol(n=2, a=2, b=t) over F5((t))", "--count", "3"];
    let first = valdiv(&args);
    assert_eq!(first.status.code(), Some(0));
    let v = json(&first);
    let ws = v["witnesses"].as_array().unwrap();
    assert_eq!(ws.len(), 3);
    assert!(ws.iter().all(|w| w["verified"] == true && w["witness"].as_str().unwrap().starts_with('[')));
    assert_eq!(first.stdout, valdiv(&args).stdout);
}

#[test]
fn verdicts_follow_the_asserted_dimension() {
    let v = json(&valdiv(&["verdict", "--algebra", "symbol(n=9, a=x, b=x) over decl(cdq<=2, char=7)((t))", "--q", "3"]));
    assert_eq!(v["verdict"]["conclusion"], "not_applicable");
    let v = json(&valdiv(&[
        "verdict",
        "--algebra",
        "symbol(n=9, a=x, b=x) over decl(cdq<=2, char=7)((t))",
        "--q",
        "3",
        "--assert-cd",
        "3=3",
    ]));
    assert_eq!(v["verdict"]["conclusion"], "trivial");
    assert_eq!(v["verdict"]["case"], "case1");
    let v = json(&valdiv(&["--precision", "16", "verdict", "--algebra", "symbol(n=2, a=2, b=t) over F5((t))"]));
    assert_eq!(v["verdict"]["case"], "square_free_index");
}

#[test]
fn examples_run_in_both_formats() {
    let v = json(&valdiv(&["--precision", "16", "example", "3"]));
    assert_eq!(v["r_q"], 2);
    assert_eq!(v["cd_q"], "3");
    assert_eq!(v["verdict"]["case"], "case1");
    let out = valdiv(&["--format", "text", "example", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("Example 1"));
    assert!(text.contains("cd_q = <=3"));
}

#[test]
fn selftest_passes_and_the_mutant_fails() {
    let out = valdiv(&["--precision", "16", "--seed", "42", "selftest", "--size", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(json(&out)["passed"], true);
    let out = valdiv(&["--precision", "16", "selftest", "--size", "4", "--mutant"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let norm = v["suites"].as_array().unwrap().iter().find(|s| s["name"] == "norm-multiplicativity").unwrap();
    assert!(norm["failures"].as_u64().unwrap() > 0);
}
