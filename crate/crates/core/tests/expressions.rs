mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::Oracle;
use fmlearn::fixtures::random::{self, RandomOntologySpec};

fn small_world(seed: u64) -> (ChaCha8Rng, fmlearn::Ontology) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let o = random::ontology(&mut rng, &RandomOntologySpec::default());
    (rng, o)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn canonical_form_is_idempotent_and_equivalent(seed in any::<u64>(), depth in 0usize..4) {
        let (mut rng, o) = small_world(seed);
        let ce = random::expression(&mut rng, &o, depth);
        let c = ce.canonical_form();
        prop_assert_eq!(c.canonical_form(), c.clone());
        let oracle = Oracle::new(&o);
        prop_assert_eq!(oracle.instances(&ce), oracle.instances(&c));
    }

    #[test]
    fn length_is_positive_and_additive(seed in any::<u64>(), depth in 0usize..4) {
        let (mut rng, o) = small_world(seed);
        let a = random::expression(&mut rng, &o, depth);
        let b = random::expression(&mut rng, &o, depth);
        prop_assert!(a.length() >= 1);
        let conj = fmlearn::ClassExpression::conjoin(&a, &b);
        // one connective per extra operand once both sides are flattened
        let n = conj.conjuncts().len();
        let sum: usize = conj.conjuncts().iter().map(|c| c.length()).sum();
        prop_assert_eq!(conj.length(), sum + n - 1);
    }

    #[test]
    fn refinement_is_deterministic(seed in any::<u64>(), bound in 1usize..8) {
        let (mut rng, o) = small_world(seed);
        let ce = random::expression(&mut rng, &o, 1);
        let op = fmlearn::refinement::RefinementOperator::for_ontology(&o, Default::default());
        prop_assert_eq!(op.refine_down(&ce, ce.length() + bound), op.refine_down(&ce, ce.length() + bound));
    }
}
