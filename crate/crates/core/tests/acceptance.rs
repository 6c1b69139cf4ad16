//! One line per acceptance criterion, with its time limit.

use std::io::Write;

use coxlab::suite::{run_criterion, Status};

const SEED: u64 = 7;

fn criterion(id: u8) {
    let r = run_criterion(id, SEED).expect("known criterion");
    let verdict = match r.status {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Inconclusive => "INCONCLUSIVE",
    };
    // straight to stderr so the line shows without --nocapture
    let _ = writeln!(
        std::io::stderr(),
        "criterion {:>2} [{}] {verdict} in {:.2}s (limit {}s): {}",
        r.criterion, r.name, r.seconds, r.limit_seconds, r.detail
    );
    assert_eq!(r.status, Status::Pass, "criterion {id}: {}", r.detail);
}

#[test]
fn criterion_01_word_oracle() {
    criterion(1);
}

#[test]
fn criterion_02_orders_and_centralizers() {
    criterion(2);
}

#[test]
fn criterion_03_geometric_sets() {
    criterion(3);
}

#[test]
fn criterion_04_determinant_obstruction() {
    criterion(4);
}

#[test]
fn criterion_05_complexity_monotonicity() {
    criterion(5);
}

#[test]
fn criterion_06_definability_checkers() {
    criterion(6);
}

#[test]
fn criterion_07_affine_models() {
    criterion(7);
}

#[test]
fn criterion_08_raag_bridge() {
    criterion(8);
}

#[test]
fn criterion_09_unsuperstability_tree() {
    criterion(9);
}

#[test]
fn criterion_10_domain_probe() {
    criterion(10);
}
