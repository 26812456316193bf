//! Acceptance suite: runs every criterion at its stated tolerance and wall
//! time cap and prints one PASS/FAIL/WARN line per criterion. Arguments that
//! do not start with '-' select criteria by id substring.

use std::process::ExitCode;

use primepoly::verify::{criterion_ids, run_criterion, Status};
use primepoly::Budget;

const SEED: u64 = 42;

/// Wall time caps in seconds.
const CAPS: [(&str, f64); 11] = [
    ("c01_route_equality", 300.0),
    ("c02_p2_closed_forms", 60.0),
    ("c03_cyclotomic", 30.0),
    ("c04_lseries", 120.0),
    ("c05_discrepancy", 600.0),
    ("c06_lemma_suite", 300.0),
    ("c07_euler_products", 60.0),
    ("c08_sieve_local_factors", 300.0),
    ("c09_experiments", 600.0),
    ("c10_count_vs_paths", 120.0),
    ("c11_main_term_proximity", 900.0),
];

fn main() -> ExitCode {
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let budget = Budget::default();
    let mut failed = Vec::new();
    let mut ran = 0;
    for id in criterion_ids() {
        if !filters.is_empty() && !filters.iter().any(|f| id.contains(f.as_str())) {
            continue;
        }
        ran += 1;
        let c = run_criterion(id, SEED, &budget).expect("id from the criterion table");
        let cap = CAPS.iter().find(|(i, _)| *i == id).expect("every criterion has a cap").1;
        let late = c.seconds > cap;
        if late {
            println!("FAIL {id} ({:.1}s): exceeded the {cap:.0}s cap", c.seconds);
        } else {
            println!("{}", c.summary_line());
        }
        if c.status != Status::Pass {
            for line in c.details.iter().filter(|l| !l.starts_with("ok ")) {
                println!("    {line}");
            }
        }
        if c.status == Status::Fail || late {
            failed.push(id);
        }
    }
    println!("acceptance: {} of {ran} criteria passed", ran - failed.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed: {}", failed.join(", "));
        ExitCode::FAILURE
    }
}
