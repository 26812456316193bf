use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_primepoly")).args(args).env_remove("PRIMEPOLY_BUDGET").output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn rational(v: &Value) -> (String, String) {
    (v["num"].as_str().unwrap().to_string(), v["den"].as_str().unwrap().to_string())
}

#[test]
fn constants_a4b3() {
    let v = json(&["constants", "--kind", "a4b3", "--cutoff", "1000000"]);
    assert_eq!(v["schema"], "1");
    assert_eq!(v["command"], "constants");
    assert_eq!(v["inputs"]["cutoff"], 1_000_000);
    let value = v["value"].as_f64().unwrap();
    assert!((0.3735..=0.3745).contains(&value), "{value}");
}

#[test]
fn delta_witness() {
    let v = json(&["delta", "--n", "4", "--p", "3", "--d", "1", "--witness"]);
    assert_eq!(rational(&v["delta_exact"]), ("1".into(), "24".into()));
    assert_eq!(rational(&v["bound_large_exact"]), ("1".into(), "12".into()));
    assert_eq!(v["within_bounds"], true);
    assert!(v["argmax_u"].is_string());
    let bare = json(&["delta", "--n", "4", "--p", "3", "--d", "1"]);
    assert!(bare.get("argmax_u").is_none());
}

#[test]
fn density_routes_agree() {
    let v = json(&["density", "--n", "2", "--p", "3", "--kind", "sqf,max", "--route", "both"]);
    assert_eq!(v["routes_agree"], true);
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 4);
    assert!(reports.iter().all(|r| rational(&r["exact"]) == ("5".into(), "6".into())));
}

#[test]
fn dedekind_report() {
    let v = json(&["dedekind", "--poly", "x^2+3*x+2", "--p", "3"]);
    assert_eq!((v["maximal"].as_bool(), v["disc"].as_str(), v["disc_class"].as_str()), (Some(true), Some("1"), Some("unit")));
    let v = json(&["dedekind", "--poly", "x^2+4", "--p", "2"]);
    assert_eq!(v["disc"], "-16");
    assert_eq!(v["maximal"], false);
    assert!(v["disc_class"].is_null() && v["note"].is_string());
    let v = json(&["dedekind", "--poly", "x^2-5"]);
    assert_eq!(v["maximal"], false);
    assert_eq!(v["tested_primes"], serde_json::json!(["2"]));
}

#[test]
fn rho_and_p2() {
    let v = json(&["rho", "--spec", "a4b3", "--p", "3"]);
    assert_eq!((v["rho_prime"].as_str(), v["unit_tuples"].as_str()), (Some("6"), Some("36")));
    assert_eq!(rational(&v["local_factor"]), ("5".into(), "6".into()));
    let v = json(&["p2", "--n-max", "5"]);
    assert_eq!(rational(&v["densities"][4]["max"]), ("3".into(), "4".into()));
    assert_eq!(rational(&v["densities"][4]["sqf"]), ("0".into(), "1".into()));
}

#[test]
fn lseries_holds() {
    let v = json(&["lseries", "--p", "3", "--degree", "6"]);
    assert_eq!(v["all_hold"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 2);
}

#[test]
fn csv_and_text_formats() {
    let out = run(&["p2", "--n-max", "3", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("n,sqf.num,sqf.den,max.num,max.den"));
    assert_eq!(text.lines().count(), 4);
    let out = run(&["rho", "--spec", "a4b3", "--p", "3", "--format", "text"]);
    assert!(String::from_utf8(out.stdout).unwrap().lines().any(|l| l == "rho_prime: 6"));
}

#[test]
fn output_files() {
    let dir = std::env::temp_dir().join(format!("primepoly-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let report = dir.join("report.json");
    let marginals = dir.join("marginals.csv");
    let out = run(&[
        "experiment",
        "--kind",
        "sqf_monic",
        "--n",
        "2",
        "--X",
        "5",
        "--cutoff",
        "100",
        "--marginals",
        marginals.to_str().unwrap(),
        "--output",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["kind"], "sqf_monic(2)");
    assert_eq!(v["unknown"], 0);
    let total = v["total_tuples"].as_u64().unwrap();
    let csv = std::fs::read_to_string(&marginals).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("coordinate,value,tuples,counted,unknown"));
    let first: u64 = lines.filter(|l| l.starts_with("0,")).map(|l| l.split(',').nth(2).unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(first, total);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn deterministic_output() {
    let args = ["lemma-check", "--p", "3", "--dmax", "1", "--nmax", "4", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!((v["seed"].as_u64(), v["all_passed"].as_bool()), (Some(7), Some(true)));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["density", "--n", "2", "--p", "4"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["verify-all", "--only", "c99"]).status.code(), Some(2));
    assert_eq!(run(&["density", "--n", "6", "--p", "5", "--route", "brute", "--budget", "10"]).status.code(), Some(2));
    let out = run(&["verify-all", "--only", "c03_cyclotomic", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("PASS c03_cyclotomic"));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("id,status,title,details\nc03_cyclotomic,pass,"));
}
