//! Positive/negative example sets and the metrics computed over them.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::expr::ClassExpression;
use crate::ontology::IndividualId;
use crate::reasoner::{IndividualSet, MaterializedExtensions, ReasonerError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("no positive examples")]
    NoPositives,
    #[error("no negative examples")]
    NoNegatives,
    #[error("`{0}` is both a positive and a negative example")]
    Overlap(String),
    #[error("example `{0}` is not an individual of the ontology")]
    UnknownIndividual(String),
}

/// A pair of disjoint, nonempty example sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LearningProblem {
    positives: BTreeSet<IndividualId>,
    negatives: BTreeSet<IndividualId>,
}

impl LearningProblem {
    pub fn new(
        positives: impl IntoIterator<Item = IndividualId>,
        negatives: impl IntoIterator<Item = IndividualId>,
    ) -> Result<Self, ProblemError> {
        let positives: BTreeSet<_> = positives.into_iter().collect();
        let negatives: BTreeSet<_> = negatives.into_iter().collect();
        if positives.is_empty() {
            return Err(ProblemError::NoPositives);
        }
        if negatives.is_empty() {
            return Err(ProblemError::NoNegatives);
        }
        if let Some(both) = positives.intersection(&negatives).next() {
            return Err(ProblemError::Overlap(both.iri().to_string()));
        }
        Ok(LearningProblem {
            positives,
            negatives,
        })
    }

    pub fn positives(&self) -> &BTreeSet<IndividualId> {
        &self.positives
    }

    pub fn negatives(&self) -> &BTreeSet<IndividualId> {
        &self.negatives
    }

    /// Resolves the examples against `ext`, failing on unknown individuals.
    pub fn index(&self, ext: &MaterializedExtensions) -> Result<ExampleSets, ProblemError> {
        let resolve = |set: &BTreeSet<IndividualId>| {
            let mut out = IndividualSet::empty(ext.universe());
            for ind in set {
                let i = ext
                    .index_of(ind)
                    .ok_or_else(|| ProblemError::UnknownIndividual(ind.iri().to_string()))?;
                out.insert(i);
            }
            Ok(out)
        };
        Ok(ExampleSets {
            pos: resolve(&self.positives)?,
            neg: resolve(&self.negatives)?,
        })
    }
}

/// Confusion matrix of an expression against a learning problem, with the
/// derived scores.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
    pub accuracy: f64,
    pub f1: f64,
    pub pos_cov: f64,
}

impl Evaluation {
    pub fn from_counts(tp: usize, fp: usize, tn: usize, fn_: usize) -> Self {
        let total = tp + fp + tn + fn_;
        let accuracy = if total == 0 {
            0.0
        } else {
            (tp + tn) as f64 / total as f64
        };
        let f1_den = 2 * tp + fp + fn_;
        let f1 = if f1_den == 0 {
            0.0
        } else {
            (2 * tp) as f64 / f1_den as f64
        };
        let pos = tp + fn_;
        let pos_cov = if pos == 0 { 0.0 } else { tp as f64 / pos as f64 };
        Evaluation {
            tp,
            fp,
            tn,
            fn_,
            accuracy,
            f1,
            pos_cov,
        }
    }
}

/// Example sets as index bitsets over one [`MaterializedExtensions`].
#[derive(Clone, Debug)]
pub struct ExampleSets {
    pub pos: IndividualSet,
    pub neg: IndividualSet,
}

impl ExampleSets {
    pub fn evaluate_set(&self, covered: &IndividualSet) -> Evaluation {
        let tp = covered.intersection_len(&self.pos);
        let fp = covered.intersection_len(&self.neg);
        Evaluation::from_counts(tp, fp, self.neg.len() - fp, self.pos.len() - tp)
    }

    pub fn evaluate(
        &self,
        ce: &ClassExpression,
        ext: &MaterializedExtensions,
    ) -> Result<Evaluation, ReasonerError> {
        Ok(self.evaluate_set(&*ext.instances_of(ce)?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvaluateError {
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Reasoner(#[from] ReasonerError),
}

/// Confusion matrix, predictive accuracy over the examples, F1 and positive
/// coverage of `ce`.
pub fn evaluate(
    ce: &ClassExpression,
    lp: &LearningProblem,
    ext: &MaterializedExtensions,
) -> Result<Evaluation, EvaluateError> {
    Ok(lp.index(ext)?.evaluate(ce, ext)?)
}

/// Fraction of the positive examples that are instances of `ce`.
pub fn pos_cov(
    ce: &ClassExpression,
    lp: &LearningProblem,
    ext: &MaterializedExtensions,
) -> Result<f64, EvaluateError> {
    Ok(evaluate(ce, lp, ext)?.pos_cov)
}
