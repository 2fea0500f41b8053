use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const HEADER: &str = "n,p,eps,mu,phi,eps2mu_over_logn,eps2phi_over_logn,estimate,ci_lo,ci_hi,trials,degenerate";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_extcount")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("extcount-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn classify_fixture_and_graph_file() {
    let v = json(&["classify", "fig1c", "--json"]);
    assert_eq!(v["theorem_case"], "ThmUniqueGroundedPrimal");
    assert_eq!(v["m_value"], "3/2");
    assert_eq!(v["j_max"]["vertex_subset"], serde_json::json!([1, 2, 3]));

    let file = scratch("tri.graph", "# triangle at the root\n1 3\n1-2 1-3\n2-3\n");
    let v = json(&["classify", file.to_str().unwrap(), "--json"]);
    assert_eq!(v["theorem_case"], "ThmStrBalGrounded");

    let bad = scratch("bad.graph", "1 3\n2-1\n");
    assert_eq!(run(&["classify", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["classify", "no-such-graph"]).status.code(), Some(2));
}

#[test]
fn theory_is_exact() {
    let v = json(&["theory", "tri_root", "--n", "20", "--p", "1/2", "--eps", "1/2", "--json"]);
    // C(19, 2) pairs, each closing a triangle with probability 1/8.
    assert_eq!(v["mu"]["exact"], "171/8");
    assert_eq!(v["nu"]["exact"], "171/4");
    assert_eq!(v["aut"], 2);
    assert_eq!(v["r_star"], 33);
}

#[test]
fn count_on_host_files_and_samples() {
    let host = scratch("paw.host", "4\n1 2\n1 3\n2 3\n3 4\n");
    let v = json(&["count", "tri_root", "--host", host.to_str().unwrap(), "--json"]);
    assert_eq!(v["ordered"], 2);
    assert_eq!(v["unordered"], 1);
    let v = json(&["count", "tri_root", "--host", host.to_str().unwrap(), "--root", "4", "--json"]);
    assert_eq!(v["unordered"], 0);

    let out_of_range = scratch("oob.host", "3\n1 4\n");
    assert_eq!(run(&["count", "tri_root", "--host", out_of_range.to_str().unwrap()]).status.code(), Some(2));

    let a = stdout(&["count", "fig1c", "--gnp", "200", "0.1", "7", "--extrema", "--json"]);
    let b = stdout(&["--sequential", "count", "fig1c", "--gnp", "200", "0.1", "7", "--extrema", "--json"]);
    assert_eq!(a, b);
}

#[test]
fn exact_prints_rational_law() {
    let text = stdout(&["exact", "tri_root", "--n", "4", "--p", "1/2", "dist"]);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows, ["value\tprobability", "0\t45/64", "1\t15/64", "2\t3/64", "3\t1/64"]);
    assert_eq!(run(&["exact", "tri_root", "--n", "9", "--p", "1/2", "dist"]).status.code(), Some(2));
}

#[test]
fn simulate_reports_an_interval() {
    let v = json(&["simulate", "fig1b", "--n", "40", "--p", "0.3", "--eps", "0.5", "--trials", "50", "--json"]);
    let (est, lo, hi) = (v["estimate"].as_f64().unwrap(), v["ci_lo"].as_f64().unwrap(), v["ci_hi"].as_f64().unwrap());
    assert!(lo <= est && est <= hi && (0.0..=1.0).contains(&est));
    assert_eq!(v["trials"], 50);
}

#[test]
fn scan_csv_is_reproducible() {
    let cfg = scratch(
        "scan.toml",
        "graph = \"fig1b\"\nn = [60]\ntrials = 40\nseed = 3\n\n[p_rule]\nkind = \"mu\"\ntarget = 40.0\n\n[eps_rule]\nkind = \"eps2mu\"\nvalues = [0.2, 5.0, 30.0]\n",
    );
    let cfg = cfg.to_str().unwrap();
    let first = stdout(&["scan", "--config", cfg]);
    assert_eq!(first.lines().next(), Some(HEADER));
    assert_eq!(first.lines().count(), 4);
    assert_eq!(stdout(&["--workers", "3", "scan", "--config", cfg]), first);
    assert_eq!(stdout(&["--sequential", "scan", "--config", cfg]), first);

    let out = scratch("scan.csv", "");
    stdout(&["scan", "--config", cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(std::fs::read_to_string(out).unwrap(), first);
}

#[test]
fn preset_exit_codes() {
    let out = run(&["scan", "--preset", "thm11-ungrounded"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with(HEADER));
    // Its bar at ratio 20 is not met at n = 1024.
    assert_eq!(run(&["scan", "--preset", "thm11-grounded"]).status.code(), Some(1));
    assert_eq!(run(&["scan", "--preset", "no-such-preset"]).status.code(), Some(2));
}
