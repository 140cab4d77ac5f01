//! Randomized checks of the reasoner, metrics, refinement operator, start
//! classes, shared pool and parser against brute-force oracles.

mod common;

use common::suites;

#[test]
fn downward_refinements_shrink_extensions() {
    suites::refinement_shrinks(1, 1000).assert_ok(1000);
}

#[test]
fn evaluation_agrees_with_counting() {
    suites::evaluation_matches_oracle(2, 500).assert_ok(500);
}

#[test]
fn instances_agree_with_recursive_check() {
    suites::instances_match_oracle(3, 500).assert_ok(500);
}

#[test]
fn start_classes_are_minimal_and_covering() {
    suites::start_classes_sound(4, 500).assert_ok(500);
}

#[test]
fn pool_entries_respect_invariants() {
    suites::pool_entries_valid(5, 500).assert_ok(500);
}

#[test]
fn serialized_ontologies_parse_back() {
    suites::parser_round_trip(6, 500).assert_ok(500);
}
