use std::collections::{BTreeSet, HashSet};

use crate::expr::ClassExpression;

/// Append-only list of conjunctions of best nodes from different trees.
/// Every tree reads it through its own cursor.
#[derive(Clone, Debug, Default)]
pub struct SharedPool {
    entries: Vec<ClassExpression>,
    canonical: HashSet<ClassExpression>,
}

impl SharedPool {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[ClassExpression] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn push(&mut self, ce: ClassExpression) -> bool {
        if self.canonical.insert(ce.canonical_form()) {
            self.entries.push(ce);
            true
        } else {
            false
        }
    }
}

fn pairwise_distinct(ce: &ClassExpression) -> bool {
    let names = ce.named_classes();
    let set: BTreeSet<_> = names.iter().collect();
    set.len() == names.len()
}

/// Conjoins `current` with each best node of the other trees that shares no
/// named class with it, and appends the results that have pairwise-distinct
/// classes, stay shorter than `max_length` and are new to the pool.
/// Returns the appended expressions.
pub fn maybe_share_conjunction(
    current: &ClassExpression,
    best_of_other_trees: &[ClassExpression],
    pool: &mut SharedPool,
    max_length: usize,
) -> Vec<ClassExpression> {
    let mine: BTreeSet<_> = current.named_classes().into_iter().collect();
    let mut added = Vec::new();
    for prev in best_of_other_trees {
        if prev.named_classes().iter().any(|c| mine.contains(c)) {
            continue;
        }
        let conj = ClassExpression::conjoin(current, prev);
        if pairwise_distinct(&conj) && conj.length() < max_length && pool.push(conj.clone()) {
            added.push(conj);
        }
    }
    added
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::{ClassId, PropertyId};

    fn c(n: &str) -> ClassExpression {
        ClassExpression::Named(ClassId::new(format!("http://x#{n}")).unwrap())
    }

    #[test]
    fn disjoint_bests_are_conjoined() {
        let mut pool = SharedPool::new();
        let added = maybe_share_conjunction(&c("Student"), &[c("UniversityEmployee")], &mut pool, 11);
        assert_eq!(added.len(), 1);
        assert_eq!(pool.entries()[0].render(), "Student and UniversityEmployee");
        // same conjunction again, either order, is not re-added
        assert!(maybe_share_conjunction(&c("UniversityEmployee"), &[c("Student")], &mut pool, 11).is_empty());
    }

    #[test]
    fn shared_class_blocks() {
        let mut pool = SharedPool::new();
        let prev = ClassExpression::and(vec![c("Student"), c("X")]);
        assert!(maybe_share_conjunction(&c("Student"), &[prev], &mut pool, 11).is_empty());
        assert!(pool.is_empty());
    }

    #[test]
    fn length_threshold() {
        let r = PropertyId::new("http://x#r").unwrap();
        // length 6 each: A ⊓ ≥2 r.B is 1 + 4 + 1
        let left = ClassExpression::and(vec![c("A"), ClassExpression::min_card(2, r.clone(), c("B"))]);
        let right = ClassExpression::and(vec![c("C"), ClassExpression::min_card(2, r, c("D"))]);
        assert_eq!(left.length(), 6);
        let mut pool = SharedPool::new();
        assert!(maybe_share_conjunction(&left, std::slice::from_ref(&right), &mut pool, 11).is_empty());
        assert_eq!(maybe_share_conjunction(&left, &[right], &mut pool, 14).len(), 1);
    }
}
