//! Brute-force oracles that work straight off the asserted axioms, sharing
//! no code with the reasoner.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use fmlearn::expr::ClassExpression;
use fmlearn::ontology::{ClassId, IndividualId, Ontology};

pub struct Oracle<'a> {
    o: &'a Ontology,
    /// Named classes of each individual, closed upward along SubClassOf.
    types: BTreeMap<&'a IndividualId, BTreeSet<ClassId>>,
}

impl<'a> Oracle<'a> {
    pub fn new(o: &'a Ontology) -> Self {
        let mut types: BTreeMap<&IndividualId, BTreeSet<ClassId>> =
            o.individuals().iter().map(|i| (i, BTreeSet::new())).collect();
        for (ind, c) in o.class_assertions() {
            types.get_mut(ind).unwrap().insert(c.clone());
        }
        // fixpoint over subclass axioms
        loop {
            let mut changed = false;
            for set in types.values_mut() {
                for (sub, sup) in o.subclass_axioms() {
                    if set.contains(sub) && !set.contains(sup) {
                        set.insert(sup.clone());
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        Oracle { o, types }
    }

    fn successors(&self, ind: &IndividualId, p: &fmlearn::ontology::PropertyId) -> Vec<&'a IndividualId> {
        self.o
            .property_assertions()
            .iter()
            .filter(|(s, q, _)| s == ind && q == p)
            .map(|(_, _, t)| t)
            .collect()
    }

    pub fn is_instance(&self, ind: &IndividualId, ce: &ClassExpression) -> bool {
        use ClassExpression::*;
        match ce {
            Top => true,
            Bottom => false,
            Named(c) => self.types[ind].contains(c),
            Not(c) => !self.is_instance(ind, c),
            And(cs) => cs.iter().all(|c| self.is_instance(ind, c)),
            Or(cs) => cs.iter().any(|c| self.is_instance(ind, c)),
            Exists(p, c) => self.successors(ind, p).iter().any(|t| self.is_instance(t, c)),
            ForAll(p, c) => self.successors(ind, p).iter().all(|t| self.is_instance(t, c)),
            MinCard(n, p, c) => {
                self.successors(ind, p).iter().filter(|t| self.is_instance(t, c)).count() >= *n as usize
            }
            MaxCard(n, p, c) => {
                self.successors(ind, p).iter().filter(|t| self.is_instance(t, c)).count() <= *n as usize
            }
        }
    }

    pub fn instances(&self, ce: &ClassExpression) -> BTreeSet<IndividualId> {
        self.o
            .individuals()
            .iter()
            .filter(|i| self.is_instance(i, ce))
            .cloned()
            .collect()
    }

    /// (tp, fp, tn, fn) by counting example by example.
    pub fn confusion(
        &self,
        ce: &ClassExpression,
        pos: &BTreeSet<IndividualId>,
        neg: &BTreeSet<IndividualId>,
    ) -> (usize, usize, usize, usize) {
        let (mut tp, mut fp, mut tn, mut fn_) = (0, 0, 0, 0);
        for p in pos {
            if self.is_instance(p, ce) {
                tp += 1
            } else {
                fn_ += 1
            }
        }
        for n in neg {
            if self.is_instance(n, ce) {
                fp += 1
            } else {
                tn += 1
            }
        }
        (tp, fp, tn, fn_)
    }

    pub fn pos_cov(&self, ce: &ClassExpression, pos: &BTreeSet<IndividualId>) -> f64 {
        pos.iter().filter(|p| self.is_instance(p, ce)).count() as f64 / pos.len() as f64
    }

    /// Direct subclasses read straight from the axioms.
    pub fn direct_subclasses(&self, ce: &ClassExpression) -> Vec<ClassExpression> {
        match ce {
            ClassExpression::Top => {
                let has_super: BTreeSet<_> = self.o.subclass_axioms().iter().map(|(s, _)| s).collect();
                self.o
                    .classes()
                    .iter()
                    .filter(|c| !has_super.contains(c))
                    .map(|c| ClassExpression::Named(c.clone()))
                    .collect()
            }
            ClassExpression::Named(c) => self
                .o
                .subclass_axioms()
                .iter()
                .filter(|(_, sup)| sup == c)
                .map(|(sub, _)| ClassExpression::Named(sub.clone()))
                .collect(),
            _ => Vec::new(),
        }
    }
}

/// Accuracy and F1 from a confusion matrix, written out longhand.
pub fn scores(tp: usize, fp: usize, tn: usize, fn_: usize) -> (f64, f64) {
    let total = (tp + fp + tn + fn_) as f64;
    let acc = (tp + tn) as f64 / total;
    let precision = if tp + fp == 0 { 0.0 } else { tp as f64 / (tp + fp) as f64 };
    let recall = if tp + fn_ == 0 { 0.0 } else { tp as f64 / (tp + fn_) as f64 };
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    (acc, f1)
}

/// Drops `time: N` fields so traces can be compared across runs.
pub fn strip_times(line: &str) -> String {
    match line.find(" time: ") {
        Some(i) => line[..i].to_string(),
        None => line.to_string(),
    }
}

pub mod suites;
