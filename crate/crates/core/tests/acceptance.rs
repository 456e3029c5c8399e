//! Acceptance suite: the full verification grid, one test per criterion,
//! each printing its pass/fail line. Sample counts and tolerances are fixed
//! in `stable_torsion::suite`; the same grid backs the CLI `table`
//! subcommand. Run with `--nocapture` to see the lines as they complete.

use stable_torsion::suite::{run_criterion, SuiteConfig};

const SEED: u64 = 20250808;

fn run(id: u32) {
    let cfg = SuiteConfig::new(SEED);
    let result = run_criterion(id, &cfg).expect("criterion execution failed");
    println!("{}", result.summary());
    assert!(result.passed, "{}", result.summary());
}

#[test]
fn criterion_01_closed_form_goldens() {
    run(1);
}

#[test]
fn criterion_02_laplace_link() {
    run(2);
}

#[test]
fn criterion_03_interval_product() {
    run(3);
}

#[test]
fn criterion_04_sampler_fidelity() {
    run(4);
}

#[test]
fn criterion_05_resurrection_engine() {
    run(5);
}

#[test]
fn criterion_06_geometric_domination() {
    run(6);
}

#[test]
fn criterion_07_renewal_identity() {
    run(7);
}

#[test]
fn criterion_08_eigenvalue_window() {
    run(8);
}

#[test]
fn criterion_09_sandwiches() {
    run(9);
}

#[test]
fn criterion_10_comparison_growth() {
    run(10);
}

#[test]
fn criterion_11_pathwise_invariants() {
    run(11);
}
