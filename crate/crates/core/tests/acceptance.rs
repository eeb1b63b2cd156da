//! Acceptance criteria. Each test prints one `[PASS]` or `[FAIL]` line and
//! fails if any of its checks fail. Lines go to the stdout handle directly so
//! the test harness does not capture them.

use std::io::Write;
use std::time::{Duration, Instant};

use loopcurrent::numfield::DEFAULT_REL_TOL;
use loopcurrent::observables::{oracle_suite, run_suite_uncapped, Observable, Report, Suite, SuiteConfig, BACKEND_TOL, FD_TOL};

const SEED: u64 = 0x5eed_2024;

/// Float tolerances the suites compare with, pinned here so a change in the
/// library cannot silently loosen a criterion.
const FLOAT_TOL: f64 = 1e-10;
const LOG_DERIV_TOL: f64 = 1e-8;

fn cfg(size: usize, points: usize) -> SuiteConfig {
    SuiteConfig { size, seed: SEED, points }
}

fn suite(s: Suite, sizes: impl IntoIterator<Item = usize>, points: usize) -> Report {
    let mut report = Report::default();
    for l in sizes {
        report.extend(run_suite_uncapped(s, cfg(l, points)));
    }
    report
}

fn criterion(n: &str, what: &str, budget: Duration, run: impl FnOnce() -> Report) {
    let start = Instant::now();
    let report = run();
    let elapsed = start.elapsed();
    let total = report.checks.len();
    let passed = report.passed_count();
    let ok = total > 0 && passed == total && report.skipped.is_empty();
    let tag = if ok { "PASS" } else { "FAIL" };
    let over = if elapsed > budget { " over budget" } else { "" };
    let mut text = format!(
        "[{tag}] criterion {n}: {what} ({passed}/{total} checks, {:.1} s of {} s{over})\n",
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    for c in report.failures().take(10) {
        text += &format!("    failed: {} {} L={} at {} {}\n", c.suite, c.name, c.size, c.point, c.detail.as_deref().unwrap_or(""));
    }
    for s in &report.skipped {
        text += &format!("    skipped: {s}\n");
    }
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes()).and_then(|_| out.flush()).expect("stdout");
    assert!(ok, "criterion {n}: {} of {total} checks failed", total - passed);
}

#[test]
fn tolerances_are_pinned() {
    assert_eq!(DEFAULT_REL_TOL, FLOAT_TOL);
    assert_eq!(BACKEND_TOL, FLOAT_TOL);
    assert_eq!(FD_TOL, LOG_DERIV_TOL);
}

#[test]
fn criterion_1_oracle_matches_closed_form_small() {
    criterion("1", "oracle X and Y equal closed forms exactly, L = 2, 3, 10 points", Duration::from_secs(30), || {
        let mut r = Report::default();
        for l in 2..=3 {
            r.extend(oracle_suite(cfg(l, 10), &[Observable::X, Observable::Y]));
        }
        r
    });
}

#[test]
fn criterion_2_factor_hypothesis_extension() {
    criterion("2", "oracle equals closed form, X and Y at L = 4, X at L = 5, 5 points", Duration::from_secs(600), || {
        let mut r = oracle_suite(cfg(4, 5), &[Observable::X, Observable::Y]);
        r.extend(oracle_suite(cfg(5, 5), &[Observable::X]));
        r
    });
}

#[test]
fn criterion_3_transfer_matrix() {
    criterion("3", "transfer matrix relations exact, L = 1..4", Duration::from_secs(300), || {
        suite(Suite::Transfer, 1..=4, Suite::Transfer.default_points())
    });
}

#[test]
fn criterion_4_qkz() {
    criterion("4", "qKZ and dual qKZ exact, L = 1..4, 5 points", Duration::from_secs(120), || suite(Suite::Qkz, 1..=4, 5));
}

#[test]
fn criterion_5_recursions() {
    criterion("5", "closed-form recursions and chains exact, L = 1..6, 5 points", Duration::from_secs(120), || {
        suite(Suite::Recursions, 1..=6, 5)
    });
}

#[test]
fn criterion_6_operator_and_weight_identities_at_omega() {
    criterion("6a", "marked operator identities L = 1..3, weight identities exact at q = ω, 10 points", Duration::from_secs(60), || {
        let mut r = suite(Suite::AppendixA, 1..=3, Suite::AppendixA.default_points());
        r.extend(run_suite_uncapped(Suite::AppendixB, cfg(0, 10)));
        r
    });
}

#[test]
fn criterion_6_weight_identities_at_generic_q() {
    criterion("6b", "weight identities to 1e-10 at 5 generic complex q", Duration::from_secs(60), || {
        run_suite_uncapped(Suite::AppendixBGenericQ, cfg(0, 5))
    });
}

#[test]
fn criterion_7_backend_coherence() {
    criterion("7", "float backend within 1e-10, log-derivatives within 1e-8, L = 1..4", Duration::from_secs(60), || {
        suite(Suite::Backend, 1..=4, Suite::Backend.default_points())
    });
}

#[test]
fn criterion_8_structural() {
    criterion("8", "k-independence, w-independence, norm and symmetry of Z, L = 1..3", Duration::from_secs(120), || {
        suite(Suite::Structural, 1..=3, Suite::Structural.default_points())
    });
}
