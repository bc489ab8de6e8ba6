use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qctower"))
        .args(args)
        .env_remove("QCTOWER_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn structured(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "structured"]);
    let out = run(&all);
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn qc_prints_the_canonical_pair() {
    let out = run(&["qc", "--q", "2", "--c", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "c = 1\nD = 3\ng_c = x^3 + x + 1\nh_c = x^2 + x\n");
    let v = structured(&["qc", "--q", "5", "--order", "6"]);
    assert_eq!(v["result"]["g_c"], "x^6 + x + 2");
    assert_eq!(v["result"]["h_c"], "x^5 + 4x");
    assert_eq!(v["result"]["D"], 6);
}

#[test]
fn transform_and_tower() {
    let out = run(&["transform", "--q", "2", "--c", "1", "--poly", "x^4 + x^3 + 1"]);
    assert!(stdout(&out).starts_with("x^12 + x^11 + x^10 + x^9 + x^8 + x^6 + x^4 + x + 1\n"));
    let v = structured(&["tower", "--q", "2", "--c", "1", "--seed-poly", "x^4 + x^3 + 1", "--depth", "2"]);
    let steps = v["result"]["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 3);
    assert_eq!(steps[2]["degree"], 36);
    assert_eq!(steps[2]["irreducible"], true);
}

#[test]
fn structured_output_is_deterministic_apart_from_timing() {
    let args = [
        "construct", "--q", "5", "--c", "3", "--method", "random", "--degree", "3", "--rng-seed", "11",
    ];
    let mut a = structured(&args);
    let mut b = structured(&args);
    assert!(a["elapsed_ms"].is_number());
    a.as_object_mut().unwrap().remove("elapsed_ms");
    b.as_object_mut().unwrap().remove("elapsed_ms");
    assert_eq!(a, b);
    assert_eq!(a["result"]["rng_seed"], 11);
    assert_eq!(a["result"]["method"], "random");
}

#[test]
fn recursive_construct_reports_both_counters() {
    let v = structured(&["construct", "--q", "2", "--c", "1", "--method", "recursive", "--seed-poly", "x^4 + x + 1"]);
    let r = &v["result"];
    assert_eq!(r["splits"], 1);
    assert_eq!(r["iterations_used"], 0);
    assert_eq!(r["bound"], 0);
}

#[test]
fn count_with_brute_force() {
    let out = run(&["count", "--q", "2", "--order", "3", "--m", "2", "--brute"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("= 0 for q = 2"));
    let v = structured(&["count", "--q", "5", "--order", "3", "--m", "2", "--brute"]);
    assert_eq!(v["result"]["formula"], "6");
    assert_eq!(v["result"]["agrees"], true);
}

#[test]
fn prob_is_exact() {
    let v = structured(&["prob", "--q", "2", "--c", "1", "--degree", "4"]);
    assert_eq!(v["result"]["p"], "2/3");
    assert_eq!(v["result"]["tau_exact"], "1/4");
    assert_eq!(v["result"]["expected_trials"], "3/2");
}

#[test]
fn graph_formats() {
    let out = run(&["graph", "--q", "2", "--c", "1", "--degree", "4", "--format", "graphtext"]);
    let dot = stdout(&out);
    assert!(dot.starts_with("digraph G {"));
    assert!(dot.contains("n0 -> n0;"));
    let v = structured(&["graph", "--q", "2", "--c", "1", "--degree", "4"]);
    assert_eq!(v["result"]["nodes"][0], "x^4 + x + 1");
    assert_eq!(v["result"]["periodic"], serde_json::json!([true, false, false]));
}

#[test]
fn scan_reports_tallies() {
    let v = structured(&["scan-conjecture", "--q", "5", "--c", "3", "--degree", "3"]);
    assert_eq!(v["result"]["seeds_scanned"], 40);
    assert_eq!(v["result"]["other"], 0);
    assert_eq!(v["result"]["partial"], false);
}

#[test]
fn failures_carry_category_and_exit_code() {
    let out = run(&["tower", "--q", "5", "--c", "3", "--seed-poly", "x^3 + 4x + 3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error[invalid-input]"));

    let out = run(&["transform", "--q", "2", "--c", "1", "--poly", "x^2 + 7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error[parse]"));

    let out = run(&["graph", "--q", "2", "--c", "1", "--degree", "30", "--budget", "1000"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error[budget-exceeded]"));

    let out = run(&["construct", "--q", "2", "--c", "1", "--method", "random", "--degree", "4", "--max-trials", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error[trials-exhausted]"));

    let out = run(&["qc", "--q", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn budget_env_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_qctower"))
        .args(["graph", "--q", "2", "--c", "1", "--degree", "12"])
        .env("QCTOWER_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget is 100"));
}
