//! Runs every default identity suite at one width and prints a summary per suite.
//!
//! Run with `cargo run --release --example relation_suite -- 3 7` (width, seed).

use std::collections::BTreeMap;

use loopcurrent::observables::relation_suite;

fn main() {
    let mut args = std::env::args().skip(1);
    let size: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(2);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);
    let report = relation_suite(size, seed);
    let mut per: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for c in &report.checks {
        let e = per.entry(c.suite.name()).or_default();
        if c.passed {
            e.0 += 1;
        } else {
            e.1 += 1;
        }
    }
    for (suite, (ok, bad)) in &per {
        println!("{suite:<12} {ok:>4} passed {bad:>3} failed");
    }
    for s in &report.skipped {
        println!("skipped: {s}");
    }
    for c in report.failures() {
        println!("FAILED {} / {} at {}: {:?}", c.suite, c.name, c.point, c.detail);
    }
    println!("all passed: {}", report.all_passed());
}
