//! Seeded randomized suites, shared by the property tests and the
//! acceptance report. Each returns how many cases ran and what failed.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fmlearn::expr::ClassExpression;
use fmlearn::fixtures::random::{self, RandomOntologySpec};
use fmlearn::ontology::{parse_ontology, serialize_ontology, Ontology};
use fmlearn::reasoner::{materialize, ClassHierarchy};
use fmlearn::refinement::{RefinementConfig, RefinementOperator};
use fmlearn::search::{find_starting_classes, maybe_share_conjunction, Algorithm, FmParams, Search, SharedPool};

use super::{scores, Oracle};

#[derive(Debug, Default)]
pub struct Outcome {
    pub cases: usize,
    pub failures: Vec<String>,
}

impl Outcome {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failures.len() < 10 {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn assert_ok(&self, min_cases: usize) {
        assert!(self.failures.is_empty(), "failures: {:#?}", self.failures);
        assert!(self.cases >= min_cases, "only {} cases", self.cases);
    }
}

fn spec<R: Rng>(rng: &mut R) -> RandomOntologySpec {
    RandomOntologySpec {
        classes: rng.gen_range(2..=7),
        properties: rng.gen_range(1..=3),
        individuals: rng.gen_range(6..=18),
        subclass_prob: 0.5,
        assertion_prob: rng.gen_range(0.15..0.5),
        edge_prob: rng.gen_range(0.03..0.2),
    }
}

fn expr(rng: &mut ChaCha8Rng, o: &Ontology, max_depth: usize) -> ClassExpression {
    let depth = rng.gen_range(0..=max_depth);
    random::expression(rng, o, depth)
}

fn world(seed: u64) -> (ChaCha8Rng, Ontology) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = spec(&mut rng);
    let o = random::ontology(&mut rng, &s);
    (rng, o)
}

/// Every downward refinement has a subset of the parent's instances and
/// respects the length bound; every upward refinement a superset.
pub fn refinement_shrinks(seed: u64, applications: usize) -> Outcome {
    let mut out = Outcome::default();
    let mut world_seed = seed;
    while out.cases < applications {
        let (mut rng, o) = world(world_seed);
        world_seed += 1;
        let oracle = Oracle::new(&o);
        let op = RefinementOperator::for_ontology(&o, RefinementConfig::default());
        for _ in 0..10 {
            let ce = expr(&mut rng, &o, 2);
            let parent = oracle.instances(&ce);
            let bound = ce.length() + rng.gen_range(1..=3);
            for d in op.refine_down(&ce, bound).into_iter().take(40) {
                let sub = oracle.instances(&d);
                out.check(sub.is_subset(&parent) && d.length() <= bound, || {
                    format!("seed {world_seed}: {d} is not below {ce} (bound {bound})")
                });
            }
            for u in op.refine_up(&ce) {
                let sup = oracle.instances(&u);
                out.check(parent.is_subset(&sup), || format!("seed {world_seed}: {u} is not above {ce}"));
            }
        }
    }
    out
}

/// The library's confusion matrix, accuracy and F1 against longhand counts.
pub fn evaluation_matches_oracle(seed: u64, n: usize) -> Outcome {
    let mut out = Outcome::default();
    let mut s = seed;
    while out.cases < n {
        let (mut rng, o) = world(s);
        s += 1;
        let npos = rng.gen_range(1..=4);
        let nneg = rng.gen_range(1..=4);
        let Some(lp) = random::problem(&mut rng, &o, npos, nneg) else {
            continue;
        };
        let oracle = Oracle::new(&o);
        let (_, ext) = materialize(&o);
        let sets = lp.index(&ext).unwrap();
        for _ in 0..5 {
            let ce = expr(&mut rng, &o, 3);
            let e = sets.evaluate(&ce, &ext).unwrap();
            let (tp, fp, tn, fn_) = oracle.confusion(&ce, lp.positives(), lp.negatives());
            let (acc, f1) = scores(tp, fp, tn, fn_);
            out.check(
                (e.tp, e.fp, e.tn, e.fn_) == (tp, fp, tn, fn_)
                    && (e.accuracy - acc).abs() < 1e-12
                    && (e.f1 - f1).abs() < 1e-12,
                || format!("seed {s}: {ce}: {e:?} vs ({tp},{fp},{tn},{fn_}) {acc} {f1}"),
            );
        }
    }
    out
}

/// `instances_of` against per-individual recursive checking.
pub fn instances_match_oracle(seed: u64, n: usize) -> Outcome {
    let mut out = Outcome::default();
    let mut s = seed;
    while out.cases < n {
        let (mut rng, o) = world(s);
        s += 1;
        let oracle = Oracle::new(&o);
        let (_, ext) = materialize(&o);
        for _ in 0..10 {
            let ce = expr(&mut rng, &o, 4);
            let got: BTreeSet<_> = ext.ids(&ext.instances_of(&ce).unwrap());
            let want = oracle.instances(&ce);
            out.check(got == want, || format!("seed {s}: {ce}: {got:?} vs {want:?}"));
        }
    }
    out
}

/// Start classes cover every positive and have no child that does.
pub fn start_classes_sound(seed: u64, n: usize) -> Outcome {
    let mut out = Outcome::default();
    let mut s = seed;
    while out.cases < n {
        let (mut rng, o) = world(s);
        s += 1;
        let npos = rng.gen_range(1..=4);
        let Some(lp) = random::problem(&mut rng, &o, npos, 1) else {
            continue;
        };
        let oracle = Oracle::new(&o);
        let (_, ext) = materialize(&o);
        let h = ClassHierarchy::from_ontology(&o);
        let sets = lp.index(&ext).unwrap();
        let nb = rng.gen_range(1..=4);
        let found = find_starting_classes(&sets, &h, &ext, nb).unwrap();
        let ok_count = !found.classes.is_empty() && found.classes.len() <= nb;
        out.check(ok_count, || format!("seed {s}: {} start classes for nb {nb}", found.classes.len()));
        for c in &found.classes {
            let full = oracle.pos_cov(c, lp.positives()) == 1.0;
            let blocked = oracle
                .direct_subclasses(c)
                .iter()
                .all(|k| oracle.pos_cov(k, lp.positives()) < 1.0);
            out.check(full && blocked, || format!("seed {s}: start class {c} is not minimal"));
        }
    }
    out
}

/// Pool entries keep distinct named classes and stay under the length
/// threshold, both when fed directly and inside full FM runs.
pub fn pool_entries_valid(seed: u64, n: usize) -> Outcome {
    let mut out = Outcome::default();
    let mut s = seed;
    let check_pool = |out: &mut Outcome, pool: &SharedPool, max_length: usize, ctx: &str| {
        for e in pool.entries() {
            let names = e.named_classes();
            let distinct: BTreeSet<_> = names.iter().collect();
            out.check(distinct.len() == names.len() && e.length() < max_length, || {
                format!("{ctx}: bad pool entry {e}")
            });
        }
    };
    while out.cases < n {
        let (mut rng, o) = world(s);
        s += 1;
        let max_length = rng.gen_range(3..=12);
        let mut pool = SharedPool::new();
        for _ in 0..10 {
            let cur = expr(&mut rng, &o, 2);
            let others: Vec<ClassExpression> = (0..rng.gen_range(1..=3))
                .map(|_| expr(&mut rng, &o, 2))
                .collect();
            maybe_share_conjunction(&cur, &others, &mut pool, max_length);
        }
        check_pool(&mut out, &pool, max_length, &format!("direct seed {s}"));
        if s.is_multiple_of(10) {
            if let Some(lp) = random::problem(&mut rng, &o, 2, 2) {
                let params = FmParams {
                    nb_trees: 3,
                    max_length,
                    max_refinements: 80,
                    ..FmParams::default()
                };
                let mut search = Search::new(&o, &lp, Algorithm::Fm, params).unwrap();
                search.run().unwrap();
                check_pool(&mut out, search.pool(), max_length, &format!("run seed {s}"));
            }
        }
    }
    out
}

/// serialize → parse gives back the same ontology.
pub fn parser_round_trip(seed: u64, n: usize) -> Outcome {
    let mut out = Outcome::default();
    for s in seed..seed + n as u64 {
        let (_, o) = world(s);
        let text = serialize_ontology(&o);
        let back = parse_ontology(&text);
        out.check(back.as_ref().is_ok_and(|b| *b == o), || {
            format!("seed {s}: round trip failed: {:?}", back.err())
        });
    }
    out
}

/// Generated tests: clean positives are target instances, noise breaks the
/// target's perfection, equal seeds give equal output.
pub fn benchgen_contract(seed: u64, generations: usize) -> Outcome {
    use fmlearn::benchgen::{generate_test, BenchError};
    let mut out = Outcome::default();
    let mut made = 0;
    let mut s = seed;
    while made < generations {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let spec = RandomOntologySpec {
            classes: rng.gen_range(2..=6),
            properties: rng.gen_range(1..=3),
            individuals: rng.gen_range(30..=60),
            assertion_prob: 0.3,
            edge_prob: 0.05,
            ..RandomOntologySpec::default()
        };
        let o = random::ontology(&mut rng, &spec);
        let gen_seed = s * 31 + 7;
        s += 1;
        let t = match generate_test(&o, 4, 10, 0.05, gen_seed) {
            Ok(t) => t,
            Err(BenchError::GenerationFailure { .. }) => continue,
            Err(e) => {
                out.check(false, || format!("seed {s}: {e}"));
                continue;
            }
        };
        made += 1;
        let oracle = Oracle::new(&o);
        let extension = oracle.instances(&t.target);
        out.check(t.clean_positives.is_subset(&extension), || format!("seed {s}: positive outside {}", t.target));
        let (tp, fp, tn, fn_) = oracle.confusion(&t.target, &t.positives, &t.negatives);
        let (acc, _) = scores(tp, fp, tn, fn_);
        out.check(acc < 1.0 && (acc - t.target_accuracy).abs() < 1e-12, || {
            format!("seed {s}: target accuracy {} / oracle {acc}", t.target_accuracy)
        });
        out.check(t.positives.is_disjoint(&t.negatives), || format!("seed {s}: overlapping sets"));
        let again = generate_test(&o, 4, 10, 0.05, gen_seed).unwrap();
        out.check(again == t && again.to_json() == t.to_json(), || format!("seed {s}: not deterministic"));
    }
    out
}
