//! Checked-in test ontologies and random generators for property tests.

use crate::ontology::{parse_ontology, IndividualId, Ontology};
use crate::problem::LearningProblem;

pub const UNIVERSITY_OFN: &str = include_str!("../fixtures/university.ofn");
pub const UNIVERSITY_CONF: &str = include_str!("../fixtures/university.conf");
pub const BIRDS_OFN: &str = include_str!("../fixtures/birds.ofn");

const UNI: &str = "http://example.org/uni#";

fn uni(name: &str) -> IndividualId {
    IndividualId::new(format!("{UNI}{name}")).unwrap()
}

/// The university ontology with its learning problem: alice and bob are
/// positive, carol, dave and erin negative.
pub fn build_fixture() -> (Ontology, LearningProblem) {
    let o = parse_ontology(UNIVERSITY_OFN).expect("university fixture parses");
    let lp = LearningProblem::new(
        ["alice", "bob"].map(uni),
        ["carol", "dave", "erin"].map(uni),
    )
    .expect("university examples are valid");
    (o, lp)
}

pub fn birds() -> Ontology {
    parse_ontology(BIRDS_OFN).expect("birds fixture parses")
}

pub mod random {
    //! Seeded generators of small ontologies, expressions and problems.

    use rand::seq::SliceRandom;
    use rand::Rng;

    use crate::expr::ClassExpression;
    use crate::ontology::{ClassId, IndividualId, Ontology, OntologyBuilder, PropertyId};
    use crate::problem::LearningProblem;

    pub const NS: &str = "http://example.org/rand#";

    #[derive(Clone, Debug)]
    pub struct RandomOntologySpec {
        pub classes: usize,
        pub properties: usize,
        pub individuals: usize,
        /// Chance that a class gets a superclass among the earlier classes.
        pub subclass_prob: f64,
        /// Chance of each (individual, class) assertion.
        pub assertion_prob: f64,
        /// Chance of each (subject, property, object) assertion.
        pub edge_prob: f64,
    }

    impl Default for RandomOntologySpec {
        fn default() -> Self {
            RandomOntologySpec {
                classes: 6,
                properties: 2,
                individuals: 20,
                subclass_prob: 0.5,
                assertion_prob: 0.25,
                edge_prob: 0.08,
            }
        }
    }

    pub fn class(i: usize) -> ClassId {
        ClassId::new(format!("{NS}C{i}")).unwrap()
    }

    pub fn property(i: usize) -> PropertyId {
        PropertyId::new(format!("{NS}r{i}")).unwrap()
    }

    pub fn individual(i: usize) -> IndividualId {
        IndividualId::new(format!("{NS}i{i}")).unwrap()
    }

    /// Subclass edges only point from later to earlier classes, so the
    /// hierarchy is acyclic by construction.
    pub fn ontology<R: Rng>(rng: &mut R, spec: &RandomOntologySpec) -> Ontology {
        let mut b = OntologyBuilder::new().iri("http://example.org/rand");
        b.prefix("", NS);
        for c in 0..spec.classes {
            b.class(class(c));
            if c > 0 && rng.gen_bool(spec.subclass_prob) {
                let sup = rng.gen_range(0..c);
                b.subclass_of(class(c), class(sup));
                if c > 1 && rng.gen_bool(0.2) {
                    let other = rng.gen_range(0..c);
                    if other != sup {
                        b.subclass_of(class(c), class(other));
                    }
                }
            }
        }
        if spec.classes >= 2 && rng.gen_bool(0.3) {
            let a = rng.gen_range(0..spec.classes);
            let c = rng.gen_range(0..spec.classes);
            if a != c {
                b.disjoint([class(a), class(c)]);
            }
        }
        for p in 0..spec.properties {
            b.property(property(p));
        }
        for i in 0..spec.individuals {
            b.individual(individual(i));
            for c in 0..spec.classes {
                if rng.gen_bool(spec.assertion_prob) {
                    b.class_assertion(individual(i), class(c));
                }
            }
            for p in 0..spec.properties {
                for j in 0..spec.individuals {
                    if rng.gen_bool(spec.edge_prob) {
                        b.property_assertion(individual(i), property(p), individual(j));
                    }
                }
            }
        }
        b.build().expect("generated ontology is valid")
    }

    /// Random expression over the entities of `o`, using every constructor.
    pub fn expression<R: Rng>(rng: &mut R, o: &Ontology, depth: usize) -> ClassExpression {
        let classes: Vec<&ClassId> = o.classes().iter().collect();
        let props: Vec<&PropertyId> = o.properties().iter().collect();
        let leaf = |rng: &mut R| match rng.gen_range(0..10) {
            0 => ClassExpression::Top,
            1 => ClassExpression::Bottom,
            _ if classes.is_empty() => ClassExpression::Top,
            _ => ClassExpression::Named((*classes.choose(rng).unwrap()).clone()),
        };
        if depth == 0 {
            return leaf(rng);
        }
        let choice = if props.is_empty() {
            rng.gen_range(0..4)
        } else {
            rng.gen_range(0..9)
        };
        match choice {
            0 => leaf(rng),
            1 => ClassExpression::not(expression(rng, o, depth - 1)),
            2 => {
                let k = rng.gen_range(2..=3);
                ClassExpression::And((0..k).map(|_| expression(rng, o, depth - 1)).collect())
            }
            3 => {
                let k = rng.gen_range(2..=3);
                ClassExpression::Or((0..k).map(|_| expression(rng, o, depth - 1)).collect())
            }
            4 | 5 => ClassExpression::exists(
                (*props.choose(rng).unwrap()).clone(),
                expression(rng, o, depth - 1),
            ),
            6 => ClassExpression::for_all(
                (*props.choose(rng).unwrap()).clone(),
                expression(rng, o, depth - 1),
            ),
            7 => ClassExpression::min_card(
                rng.gen_range(1..=3),
                (*props.choose(rng).unwrap()).clone(),
                expression(rng, o, depth - 1),
            ),
            _ => ClassExpression::max_card(
                rng.gen_range(0..=3),
                (*props.choose(rng).unwrap()).clone(),
                expression(rng, o, depth - 1),
            ),
        }
    }

    /// Disjoint random example sets; `None` if the ontology is too small.
    pub fn problem<R: Rng>(
        rng: &mut R,
        o: &Ontology,
        positives: usize,
        negatives: usize,
    ) -> Option<LearningProblem> {
        let mut all: Vec<IndividualId> = o.individuals().iter().cloned().collect();
        if positives == 0 || negatives == 0 || all.len() < positives + negatives {
            return None;
        }
        all.shuffle(rng);
        let neg = all.split_off(positives);
        LearningProblem::new(all, neg.into_iter().take(negatives)).ok()
    }
}
