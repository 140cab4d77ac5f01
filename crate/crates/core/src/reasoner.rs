//! Closed-world instance checking.
//!
//! [`materialize`] precomputes the declared class hierarchy, per-class
//! extensions (closed under subclass transitivity) and the successor lists
//! of every object property. Class expressions are then evaluated by plain
//! set algebra: whatever is not asserted is false.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex};

use fixedbitset::FixedBitSet;
use lru::LruCache;
use thiserror::Error;

use crate::expr::ClassExpression;
use crate::ontology::{ClassId, IndividualId, Ontology, PropertyId};

pub const DEFAULT_CACHE_CAPACITY: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReasonerError {
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("unknown object property `{0}`")]
    UnknownProperty(String),
}

/// A set of individuals, addressed by their index in
/// [`MaterializedExtensions::individuals`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndividualSet(FixedBitSet);

impl IndividualSet {
    pub fn empty(universe: usize) -> Self {
        IndividualSet(FixedBitSet::with_capacity(universe))
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        IndividualSet(bits)
    }

    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(universe);
        for i in indices {
            s.0.insert(i);
        }
        s
    }

    pub fn insert(&mut self, i: usize) {
        self.0.insert(i);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(i)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn is_subset(&self, other: &IndividualSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn intersection_len(&self, other: &IndividualSet) -> usize {
        self.0.intersection_count(&other.0)
    }

    pub fn intersect_with(&mut self, other: &IndividualSet) {
        self.0.intersect_with(&other.0);
    }

    pub fn union_with(&mut self, other: &IndividualSet) {
        self.0.union_with(&other.0);
    }

    pub fn complement(&self) -> IndividualSet {
        let mut bits = self.0.clone();
        bits.toggle_range(..);
        IndividualSet(bits)
    }
}

/// Declared subclass structure among named classes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassHierarchy {
    direct_sub: BTreeMap<ClassId, BTreeSet<ClassId>>,
    direct_sup: BTreeMap<ClassId, BTreeSet<ClassId>>,
    top_level: BTreeSet<ClassId>,
    leaves: BTreeSet<ClassId>,
}

impl ClassHierarchy {
    pub fn from_ontology(o: &Ontology) -> Self {
        let mut h = ClassHierarchy::default();
        for c in o.classes() {
            h.direct_sub.insert(c.clone(), BTreeSet::new());
            h.direct_sup.insert(c.clone(), BTreeSet::new());
        }
        for (sub, sup) in o.subclass_axioms() {
            h.direct_sub.get_mut(sup).unwrap().insert(sub.clone());
            h.direct_sup.get_mut(sub).unwrap().insert(sup.clone());
        }
        h.top_level = h
            .direct_sup
            .iter()
            .filter(|(_, s)| s.is_empty())
            .map(|(c, _)| c.clone())
            .collect();
        h.leaves = h
            .direct_sub
            .iter()
            .filter(|(_, s)| s.is_empty())
            .map(|(c, _)| c.clone())
            .collect();
        h
    }

    pub fn subclasses(&self, c: &ClassId) -> impl Iterator<Item = &ClassId> {
        self.direct_sub.get(c).into_iter().flatten()
    }

    pub fn superclasses(&self, c: &ClassId) -> impl Iterator<Item = &ClassId> {
        self.direct_sup.get(c).into_iter().flatten()
    }

    /// Classes without a declared superclass: the children of ⊤.
    pub fn top_level(&self) -> &BTreeSet<ClassId> {
        &self.top_level
    }

    /// Classes without a declared subclass.
    pub fn leaves(&self) -> &BTreeSet<ClassId> {
        &self.leaves
    }

    pub fn classes(&self) -> impl Iterator<Item = &ClassId> {
        self.direct_sub.keys()
    }

    /// Transitive superclasses of `c`, excluding `c` itself.
    pub fn ancestors(&self, c: &ClassId) -> BTreeSet<ClassId> {
        let mut out = BTreeSet::new();
        let mut work: Vec<&ClassId> = self.superclasses(c).collect();
        while let Some(s) = work.pop() {
            if out.insert(s.clone()) {
                work.extend(self.superclasses(s));
            }
        }
        out
    }
}

/// Extensions of every named class and successor lists of every property,
/// plus a bounded cache of evaluated expressions.
pub struct MaterializedExtensions {
    individuals: Vec<IndividualId>,
    index: HashMap<IndividualId, usize>,
    instances: BTreeMap<ClassId, IndividualSet>,
    successors: BTreeMap<PropertyId, Vec<Vec<usize>>>,
    cache: Mutex<LruCache<ClassExpression, Arc<IndividualSet>>>,
}

impl std::fmt::Debug for MaterializedExtensions {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MaterializedExtensions")
            .field("individuals", &self.individuals.len())
            .field("classes", &self.instances.len())
            .field("properties", &self.successors.len())
            .finish()
    }
}

/// Builds the hierarchy and the closed-world extensions of `o`.
pub fn materialize(o: &Ontology) -> (ClassHierarchy, MaterializedExtensions) {
    let hierarchy = ClassHierarchy::from_ontology(o);
    let ext = MaterializedExtensions::build(o, &hierarchy, DEFAULT_CACHE_CAPACITY);
    (hierarchy, ext)
}

impl MaterializedExtensions {
    pub fn build(o: &Ontology, hierarchy: &ClassHierarchy, cache_capacity: usize) -> Self {
        let individuals: Vec<IndividualId> = o.individuals().iter().cloned().collect();
        let index: HashMap<IndividualId, usize> = individuals
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();
        let n = individuals.len();
        let mut instances: BTreeMap<ClassId, IndividualSet> = o
            .classes()
            .iter()
            .map(|c| (c.clone(), IndividualSet::empty(n)))
            .collect();
        for (ind, class) in o.class_assertions() {
            let i = index[ind];
            instances.get_mut(class).unwrap().insert(i);
            for sup in hierarchy.ancestors(class) {
                instances.get_mut(&sup).unwrap().insert(i);
            }
        }
        let mut successors: BTreeMap<PropertyId, Vec<Vec<usize>>> = o
            .properties()
            .iter()
            .map(|p| (p.clone(), vec![Vec::new(); n]))
            .collect();
        for (s, p, t) in o.property_assertions() {
            successors.get_mut(p).unwrap()[index[s]].push(index[t]);
        }
        let cap = NonZeroUsize::new(cache_capacity.max(1)).unwrap();
        MaterializedExtensions {
            individuals,
            index,
            instances,
            successors,
            cache: Mutex::new(LruCache::new(cap)),
        }
    }

    /// All individuals, in index order.
    pub fn individuals(&self) -> &[IndividualId] {
        &self.individuals
    }

    pub fn universe(&self) -> usize {
        self.individuals.len()
    }

    pub fn index_of(&self, ind: &IndividualId) -> Option<usize> {
        self.index.get(ind).copied()
    }

    pub fn all_individuals(&self) -> IndividualSet {
        IndividualSet::full(self.universe())
    }

    /// Asserted members of `c` or of any of its transitive subclasses.
    pub fn class_instances(&self, c: &ClassId) -> Option<&IndividualSet> {
        self.instances.get(c)
    }

    /// Indices of the `p`-successors of individual `i`.
    pub fn successors(&self, i: usize, p: &PropertyId) -> Option<&[usize]> {
        self.successors.get(p).map(|s| s[i].as_slice())
    }

    pub fn properties(&self) -> impl Iterator<Item = &PropertyId> {
        self.successors.keys()
    }

    pub fn ids(&self, set: &IndividualSet) -> BTreeSet<IndividualId> {
        set.iter().map(|i| self.individuals[i].clone()).collect()
    }

    /// Closed-world extension of `ce`. Results are cached by canonical form.
    pub fn instances_of(&self, ce: &ClassExpression) -> Result<Arc<IndividualSet>, ReasonerError> {
        let key = ce.canonical_form();
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return Ok(Arc::clone(hit));
        }
        let set = Arc::new(self.eval(&key)?);
        self.cache.lock().unwrap().put(key, Arc::clone(&set));
        Ok(set)
    }

    fn eval(&self, ce: &ClassExpression) -> Result<IndividualSet, ReasonerError> {
        use ClassExpression::*;
        let n = self.universe();
        Ok(match ce {
            Top => IndividualSet::full(n),
            Bottom => IndividualSet::empty(n),
            Named(c) => self
                .instances
                .get(c)
                .cloned()
                .ok_or_else(|| ReasonerError::UnknownClass(c.iri().to_string()))?,
            Not(c) => self.eval(c)?.complement(),
            And(cs) => {
                let mut acc = IndividualSet::full(n);
                for c in cs {
                    acc.intersect_with(&self.eval(c)?);
                }
                acc
            }
            Or(cs) => {
                let mut acc = IndividualSet::empty(n);
                for c in cs {
                    acc.union_with(&self.eval(c)?);
                }
                acc
            }
            Exists(p, c) => self.count_filter(p, c, |k, _| k >= 1)?,
            ForAll(p, c) => self.count_filter(p, c, |k, total| k == total)?,
            MinCard(m, p, c) => self.count_filter(p, c, |k, _| k >= *m as usize)?,
            MaxCard(m, p, c) => self.count_filter(p, c, |k, _| k <= *m as usize)?,
        })
    }

    /// Individuals whose count of `p`-successors in `filler` (out of all
    /// their `p`-successors) satisfies `keep`.
    fn count_filter(
        &self,
        p: &PropertyId,
        filler: &ClassExpression,
        keep: impl Fn(usize, usize) -> bool,
    ) -> Result<IndividualSet, ReasonerError> {
        let succ = self
            .successors
            .get(p)
            .ok_or_else(|| ReasonerError::UnknownProperty(p.iri().to_string()))?;
        let filler = self.eval(filler)?;
        let mut out = IndividualSet::empty(self.universe());
        for (i, targets) in succ.iter().enumerate() {
            let k = targets.iter().filter(|&&t| filler.contains(t)).count();
            if keep(k, targets.len()) {
                out.insert(i);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::OntologyBuilder;

    fn c(n: &str) -> ClassId {
        ClassId::new(format!("http://x#{n}")).unwrap()
    }
    fn i(n: &str) -> IndividualId {
        IndividualId::new(format!("http://x#{n}")).unwrap()
    }
    fn p(n: &str) -> PropertyId {
        PropertyId::new(format!("http://x#{n}")).unwrap()
    }

    fn small() -> Ontology {
        let mut b = OntologyBuilder::new();
        b.class(c("A")).class(c("B")).property(p("r"));
        for n in ["x", "y", "z"] {
            b.individual(i(n));
        }
        b.subclass_of(c("A"), c("B"))
            .class_assertion(i("x"), c("A"))
            .property_assertion(i("y"), p("r"), i("x"))
            .property_assertion(i("y"), p("r"), i("z"));
        b.build().unwrap()
    }

    #[test]
    fn subclass_propagation() {
        let o = small();
        let (h, ext) = materialize(&o);
        let x = ext.index_of(&i("x")).unwrap();
        assert!(ext.class_instances(&c("B")).unwrap().contains(x));
        assert_eq!(h.top_level().iter().collect::<Vec<_>>(), [&c("B")]);
        assert_eq!(h.leaves().iter().collect::<Vec<_>>(), [&c("A")]);
    }

    #[test]
    fn no_assertions_means_empty_extensions() {
        let mut b = OntologyBuilder::new();
        b.class(c("A")).individual(i("x"));
        let (_, ext) = materialize(&b.build().unwrap());
        assert!(ext.class_instances(&c("A")).unwrap().is_empty());
    }

    #[test]
    fn restrictions() {
        let o = small();
        let (_, ext) = materialize(&o);
        let idx = |n| ext.index_of(&i(n)).unwrap();
        let some_a = ext
            .instances_of(&ClassExpression::exists(p("r"), ClassExpression::Named(c("A"))))
            .unwrap();
        assert_eq!(some_a.iter().collect::<Vec<_>>(), [idx("y")]);
        // x and z have no r-successors, so they satisfy ∀r.A vacuously; y does not
        let only_a = ext
            .instances_of(&ClassExpression::for_all(p("r"), ClassExpression::Named(c("A"))))
            .unwrap();
        assert_eq!(only_a.len(), 2);
        assert!(!only_a.contains(idx("y")));
        let two = ext
            .instances_of(&ClassExpression::min_card(2, p("r"), ClassExpression::Top))
            .unwrap();
        assert_eq!(two.len(), 1);
        let at_most_zero = ext
            .instances_of(&ClassExpression::max_card(0, p("r"), ClassExpression::Top))
            .unwrap();
        assert_eq!(at_most_zero.len(), 2);
        assert!(ext
            .instances_of(&ClassExpression::not(ClassExpression::Top))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn unknown_entities() {
        let (_, ext) = materialize(&small());
        assert_eq!(
            ext.instances_of(&ClassExpression::Named(c("Nope"))).unwrap_err(),
            ReasonerError::UnknownClass("http://x#Nope".into())
        );
        assert!(matches!(
            ext.instances_of(&ClassExpression::exists(p("q"), ClassExpression::Top)),
            Err(ReasonerError::UnknownProperty(_))
        ));
    }

    #[test]
    fn cache_is_bounded() {
        let o = small();
        let h = ClassHierarchy::from_ontology(&o);
        let ext = MaterializedExtensions::build(&o, &h, 1);
        let a = ClassExpression::Named(c("A"));
        let b = ClassExpression::Named(c("B"));
        assert_eq!(ext.instances_of(&a).unwrap().len(), 1);
        assert_eq!(ext.instances_of(&b).unwrap().len(), 1);
        assert_eq!(ext.cache.lock().unwrap().len(), 1);
    }
}
