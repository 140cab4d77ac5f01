//! Synthetic learning problems with a known `A ⊓ ∃r.⊤` target and noisy
//! example sets.

use std::collections::BTreeSet;

use rand::seq::{IteratorRandom, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::expr::ClassExpression;
use crate::ontology::{IndividualId, Ontology};
use crate::problem::{LearningProblem, ProblemError};
use crate::reasoner::{materialize, ReasonerError};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("min_pos must be at least 2, got {0}")]
    MinPosTooSmall(usize),
    #[error("ontology has {have} individuals, need at least {need}")]
    TooFewIndividuals { have: usize, need: usize },
    #[error("no class/property pair has at least {min_pos} common instances")]
    GenerationFailure { min_pos: usize },
    #[error("noise would leave an empty example set")]
    NoiseInfeasible,
    #[error("noise ratio must be within [0, 1), got {0}")]
    BadRatio(f64),
    #[error(transparent)]
    Reasoner(#[from] ReasonerError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratedTest {
    pub target: ClassExpression,
    /// Positives before noise; all of them are instances of `target`.
    pub clean_positives: BTreeSet<IndividualId>,
    pub positives: BTreeSet<IndividualId>,
    pub negatives: BTreeSet<IndividualId>,
    pub noise_ratio: f64,
    pub swap_count: usize,
    pub seed: u64,
    /// Accuracy of `target` on the final (noisy) sets.
    pub target_accuracy: f64,
}

pub const DEFAULT_NOISE_RATIO: f64 = 0.05;

/// Swaps needed so the target cannot stay perfect: the noise ratio applied
/// to the smaller set, at least one.
pub fn default_swap_count(pos: usize, neg: usize, ratio: f64) -> usize {
    ((ratio * pos.min(neg) as f64).floor() as usize).max(1)
}

pub fn generate_test(
    o: &Ontology,
    min_pos: usize,
    neg_count: usize,
    noise_ratio: f64,
    seed: u64,
) -> Result<GeneratedTest, BenchError> {
    if min_pos < 2 {
        return Err(BenchError::MinPosTooSmall(min_pos));
    }
    if !(0.0..1.0).contains(&noise_ratio) {
        return Err(BenchError::BadRatio(noise_ratio));
    }
    let have = o.individuals().len();
    if have < min_pos + neg_count {
        return Err(BenchError::TooFewIndividuals {
            have,
            need: min_pos + neg_count,
        });
    }
    let (_, ext) = materialize(o);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut pairs: Vec<_> = o
        .classes()
        .iter()
        .flat_map(|c| o.properties().iter().map(move |p| (c.clone(), p.clone())))
        .collect();
    pairs.shuffle(&mut rng);

    let mut chosen = None;
    for (c, p) in pairs {
        let target = ClassExpression::and(vec![
            ClassExpression::Named(c),
            ClassExpression::exists(p, ClassExpression::Top),
        ]);
        let inst = ext.instances_of(&target)?;
        if inst.len() >= min_pos {
            chosen = Some((target, inst));
            break;
        }
    }
    let (target, inst) = chosen.ok_or(BenchError::GenerationFailure { min_pos })?;

    let members: Vec<usize> = inst.iter().collect();
    let pos_idx: BTreeSet<usize> = members
        .choose_multiple(&mut rng, min_pos)
        .copied()
        .collect();
    let neg_idx: BTreeSet<usize> = (0..ext.universe())
        .filter(|i| !pos_idx.contains(i))
        .choose_multiple(&mut rng, neg_count)
        .into_iter()
        .collect();
    let name = |i: &usize| ext.individuals()[*i].clone();
    let clean_positives: BTreeSet<_> = pos_idx.iter().map(name).collect();
    let clean_negatives: BTreeSet<_> = neg_idx.iter().map(name).collect();

    let swap_count = default_swap_count(clean_positives.len(), clean_negatives.len(), noise_ratio);
    let (positives, negatives) = apply_noise(
        &clean_positives,
        &clean_negatives,
        noise_ratio,
        swap_count,
        rng_for_noise(seed),
    )?;

    let lp = LearningProblem::new(positives.iter().cloned(), negatives.iter().cloned())?;
    let target_accuracy = lp.index(&ext)?.evaluate(&target, &ext)?.accuracy;

    Ok(GeneratedTest {
        target,
        clean_positives,
        positives,
        negatives,
        noise_ratio,
        swap_count,
        seed,
        target_accuracy,
    })
}

fn rng_for_noise(seed: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(1)
}

/// Drops ⌊ratio·|set|⌋ random members from each set, then moves
/// `swap_count` positives to the negatives and as many negatives to the
/// positives.
pub fn apply_noise(
    positives: &BTreeSet<IndividualId>,
    negatives: &BTreeSet<IndividualId>,
    ratio: f64,
    swap_count: usize,
    seed: u64,
) -> Result<(BTreeSet<IndividualId>, BTreeSet<IndividualId>), BenchError> {
    if !(0.0..1.0).contains(&ratio) {
        return Err(BenchError::BadRatio(ratio));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut thin = |set: &BTreeSet<IndividualId>| -> Result<Vec<IndividualId>, BenchError> {
        let drop = (ratio * set.len() as f64).floor() as usize;
        let keep = set.len() - drop;
        if keep <= swap_count {
            return Err(BenchError::NoiseInfeasible);
        }
        let mut kept: Vec<_> = set.iter().cloned().choose_multiple(&mut rng, keep);
        kept.shuffle(&mut rng);
        Ok(kept)
    };
    let mut pos = thin(positives)?;
    let mut neg = thin(negatives)?;
    let to_neg: Vec<_> = pos.drain(..swap_count).collect();
    let to_pos: Vec<_> = neg.drain(..swap_count).collect();
    pos.extend(to_pos);
    neg.extend(to_neg);
    Ok((pos.into_iter().collect(), neg.into_iter().collect()))
}

#[derive(Serialize)]
struct Sidecar<'a> {
    target: String,
    positives: Vec<&'a str>,
    negatives: Vec<&'a str>,
    seed: u64,
    noise_ratio: f64,
    swap_count: usize,
    target_accuracy: f64,
}

impl GeneratedTest {
    pub fn to_json(&self) -> String {
        let sidecar = Sidecar {
            target: self.target.render(),
            positives: self.positives.iter().map(|i| i.iri()).collect(),
            negatives: self.negatives.iter().map(|i| i.iri()).collect(),
            seed: self.seed,
            noise_ratio: self.noise_ratio,
            swap_count: self.swap_count,
            target_accuracy: self.target_accuracy,
        };
        serde_json::to_string_pretty(&sidecar).expect("sidecar serializes")
    }

    /// Learning-problem lines for a run config.
    pub fn config_fragment(&self) -> String {
        let list = |s: &BTreeSet<IndividualId>| {
            s.iter()
                .map(|i| format!("\"<{}>\"", i.iri()))
                .collect::<Vec<_>>()
                .join(", ")
        };
        format!(
            "// target: {}\nlp.positiveExamples = {{ {} }}\nlp.negativeExamples = {{ {} }}\n",
            self.target,
            list(&self.positives),
            list(&self.negatives)
        )
    }
}
