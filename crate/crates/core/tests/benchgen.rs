mod common;

use fmlearn::benchgen::generate_test;
use fmlearn::fixtures::build_fixture;

#[test]
fn generated_problems_keep_their_contract() {
    common::suites::benchgen_contract(11, 50).assert_ok(150);
}

#[test]
fn different_seeds_eventually_differ() {
    let (o, _) = build_fixture();
    let first = generate_test(&o, 2, 3, 0.05, 0).unwrap();
    assert!((1..20).any(|s| generate_test(&o, 2, 3, 0.05, s).unwrap() != first));
}
