//! One test per acceptance criterion; each prints a PASS/FAIL line.

use cido_core::acceptance::*;

fn check(r: CriterionResult) {
    println!("{r}");
    assert!(r.pass, "{r}");
}

#[test]
fn criterion_1_fermat_cubic() {
    check(criterion_1());
}

#[test]
fn criterion_2_fermat_quintic() {
    check(criterion_2());
}

#[test]
fn criterion_3_quadric_pair() {
    check(criterion_3());
}

#[test]
fn criterion_4_comparison() {
    check(criterion_4());
}

#[test]
fn criterion_5_homotopy() {
    check(criterion_5(0, 50));
}

#[test]
fn criterion_6_kernel() {
    check(criterion_6());
}

#[test]
fn criterion_7_phi() {
    check(criterion_7());
}

#[test]
fn criterion_8_smoothness() {
    check(criterion_8());
}

#[test]
fn criterion_9_calculus() {
    check(criterion_9(0, 200));
}
