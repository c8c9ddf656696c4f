//! Full verification battery: one test per headline criterion, each
//! printing a pass/fail line. Run with --nocapture to see the report.

use moduli::suite::{run_one, CheckResult};

fn assert_pass(r: CheckResult) {
    println!(
        "[{}] criterion {:2} {} ({:.2}s): {}",
        if r.ok { "PASS" } else { "FAIL" },
        r.id,
        r.name,
        r.seconds,
        r.detail
    );
    assert!(r.ok, "criterion {} ({}) failed: {}", r.id, r.name, r.detail);
}

#[test]
fn criterion_01_singular_moduli() {
    assert_pass(run_one(1));
}

#[test]
fn criterion_02_traces() {
    assert_pass(run_one(2));
}

#[test]
fn criterion_03_level4_bases() {
    assert_pass(run_one(3));
}

#[test]
fn criterion_04_duality() {
    assert_pass(run_one(4));
}

#[test]
fn criterion_05_level8_basis() {
    assert_pass(run_one(5));
}

#[test]
fn criterion_06_recurrences_and_identities() {
    assert_pass(run_one(6));
}

#[test]
fn criterion_07_level1_products() {
    assert_pass(run_one(7));
}

#[test]
fn criterion_08_jacobi_forms() {
    assert_pass(run_one(8));
}

#[test]
fn criterion_09_fricke() {
    assert_pass(run_one(9));
}

#[test]
fn criterion_10_rademacher() {
    assert_pass(run_one(10));
}

#[test]
fn criterion_11_modular_polynomial() {
    assert_pass(run_one(11));
}
