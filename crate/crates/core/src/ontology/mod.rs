//! In-memory ontology: named classes, object properties, individuals, the
//! subclass / disjointness TBox and a simple ABox.
//!
//! Documents are read and written in a small subset of OWL 2 functional-style
//! syntax, see [`parse_ontology`] and [`serialize_ontology`].

mod parse;
mod write;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use parse::parse_ontology;
pub use write::serialize_ontology;

/// What kind of entity an identifier names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EntityKind {
    Class,
    ObjectProperty,
    Individual,
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntityKind::Class => "class",
            EntityKind::ObjectProperty => "object property",
            EntityKind::Individual => "individual",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OntologyError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("undeclared {kind} `{iri}`")]
    Undeclared { kind: EntityKind, iri: String },
    #[error("subclass cycle through `{0}`")]
    SubclassCycle(String),
    #[error("duplicate declaration of {kind} `{iri}`")]
    DuplicateDeclaration { kind: EntityKind, iri: String },
    #[error("invalid IRI `{0}`")]
    InvalidIri(String),
}

fn valid_iri(iri: &str) -> bool {
    !iri.is_empty()
        && !iri
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '<' | '>' | '(' | ')' | '"'))
}

macro_rules! entity_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(iri: impl AsRef<str>) -> Result<Self, OntologyError> {
                let iri = iri.as_ref();
                if valid_iri(iri) {
                    Ok(Self(Arc::from(iri)))
                } else {
                    Err(OntologyError::InvalidIri(iri.to_string()))
                }
            }

            /// Full (prefix-expanded) IRI.
            pub fn iri(&self) -> &str {
                &self.0
            }

            /// The part after the last `#` or `/`, used for display.
            pub fn local_name(&self) -> &str {
                local_name(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}({})", stringify!($name), self.local_name())
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.local_name())
            }
        }
    };
}

entity_id!(
    /// A named class.
    ClassId
);
entity_id!(
    /// A named object property.
    PropertyId
);
entity_id!(
    /// A named individual.
    IndividualId
);

pub(crate) fn local_name(iri: &str) -> &str {
    match iri.rfind(['#', '/']) {
        Some(i) if i + 1 < iri.len() => &iri[i + 1..],
        _ => iri,
    }
}

/// A validated ontology. Immutable once built; construct through
/// [`OntologyBuilder`] or [`parse_ontology`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ontology {
    iri: Option<String>,
    prefixes: BTreeMap<String, String>,
    classes: BTreeSet<ClassId>,
    properties: BTreeSet<PropertyId>,
    individuals: BTreeSet<IndividualId>,
    subclass_axioms: BTreeSet<(ClassId, ClassId)>,
    disjoint_axioms: BTreeSet<BTreeSet<ClassId>>,
    class_assertions: BTreeSet<(IndividualId, ClassId)>,
    property_assertions: BTreeSet<(IndividualId, PropertyId, IndividualId)>,
}

impl Ontology {
    pub fn iri(&self) -> Option<&str> {
        self.iri.as_deref()
    }

    pub fn prefixes(&self) -> &BTreeMap<String, String> {
        &self.prefixes
    }

    pub fn classes(&self) -> &BTreeSet<ClassId> {
        &self.classes
    }

    pub fn properties(&self) -> &BTreeSet<PropertyId> {
        &self.properties
    }

    pub fn individuals(&self) -> &BTreeSet<IndividualId> {
        &self.individuals
    }

    /// `(sub, sup)` pairs.
    pub fn subclass_axioms(&self) -> &BTreeSet<(ClassId, ClassId)> {
        &self.subclass_axioms
    }

    pub fn disjoint_axioms(&self) -> &BTreeSet<BTreeSet<ClassId>> {
        &self.disjoint_axioms
    }

    pub fn class_assertions(&self) -> &BTreeSet<(IndividualId, ClassId)> {
        &self.class_assertions
    }

    pub fn property_assertions(&self) -> &BTreeSet<(IndividualId, PropertyId, IndividualId)> {
        &self.property_assertions
    }

    /// Expand a name as written in a document or config: `<full-iri>`,
    /// `prefix:local`, or an already expanded IRI.
    pub fn expand_name(&self, name: &str) -> Option<String> {
        let name = name.trim();
        if let Some(inner) = name.strip_prefix('<').and_then(|s| s.strip_suffix('>')) {
            return Some(inner.to_string());
        }
        if let Some(colon) = name.find(':') {
            if let Some(ns) = self.prefixes.get(&name[..colon]) {
                return Some(format!("{}{}", ns, &name[colon + 1..]));
            }
        }
        valid_iri(name).then(|| name.to_string())
    }

    fn lookup<T: Clone + Ord>(
        &self,
        set: &BTreeSet<T>,
        name: &str,
        by_iri: impl Fn(&T) -> &str,
    ) -> Option<T> {
        let iri = self.expand_name(name)?;
        if let Some(hit) = set.iter().find(|e| by_iri(e) == iri) {
            return Some(hit.clone());
        }
        // bare local names are accepted when unambiguous
        let mut by_local = set.iter().filter(|e| local_name(by_iri(e)) == name);
        match (by_local.next(), by_local.next()) {
            (Some(hit), None) => Some(hit.clone()),
            _ => None,
        }
    }

    pub fn find_class(&self, name: &str) -> Option<ClassId> {
        self.lookup(&self.classes, name, ClassId::iri)
    }

    pub fn find_property(&self, name: &str) -> Option<PropertyId> {
        self.lookup(&self.properties, name, PropertyId::iri)
    }

    pub fn find_individual(&self, name: &str) -> Option<IndividualId> {
        self.lookup(&self.individuals, name, IndividualId::iri)
    }
}

/// Accumulates declarations and axioms in any order, then validates them
/// all at once in [`OntologyBuilder::build`].
#[derive(Debug, Default)]
pub struct OntologyBuilder {
    onto: Ontology,
    duplicate: Option<(EntityKind, String)>,
}

impl OntologyBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn iri(mut self, iri: impl Into<String>) -> Self {
        self.onto.iri = Some(iri.into());
        self
    }

    pub fn set_iri(&mut self, iri: impl Into<String>) {
        self.onto.iri = Some(iri.into());
    }

    pub fn prefix(&mut self, name: impl Into<String>, namespace: impl Into<String>) {
        self.onto.prefixes.insert(name.into(), namespace.into());
    }

    fn note_duplicate(&mut self, fresh: bool, kind: EntityKind, iri: &str) {
        if !fresh && self.duplicate.is_none() {
            self.duplicate = Some((kind, iri.to_string()));
        }
    }

    pub fn class(&mut self, c: ClassId) -> &mut Self {
        let iri = c.iri().to_string();
        let fresh = self.onto.classes.insert(c);
        self.note_duplicate(fresh, EntityKind::Class, &iri);
        self
    }

    pub fn property(&mut self, p: PropertyId) -> &mut Self {
        let iri = p.iri().to_string();
        let fresh = self.onto.properties.insert(p);
        self.note_duplicate(fresh, EntityKind::ObjectProperty, &iri);
        self
    }

    pub fn individual(&mut self, i: IndividualId) -> &mut Self {
        let iri = i.iri().to_string();
        let fresh = self.onto.individuals.insert(i);
        self.note_duplicate(fresh, EntityKind::Individual, &iri);
        self
    }

    pub fn subclass_of(&mut self, sub: ClassId, sup: ClassId) -> &mut Self {
        self.onto.subclass_axioms.insert((sub, sup));
        self
    }

    pub fn disjoint(&mut self, classes: impl IntoIterator<Item = ClassId>) -> &mut Self {
        self.onto.disjoint_axioms.insert(classes.into_iter().collect());
        self
    }

    pub fn class_assertion(&mut self, ind: IndividualId, class: ClassId) -> &mut Self {
        self.onto.class_assertions.insert((ind, class));
        self
    }

    pub fn property_assertion(
        &mut self,
        subject: IndividualId,
        property: PropertyId,
        object: IndividualId,
    ) -> &mut Self {
        self.onto
            .property_assertions
            .insert((subject, property, object));
        self
    }

    pub fn build(self) -> Result<Ontology, OntologyError> {
        if let Some((kind, iri)) = self.duplicate {
            return Err(OntologyError::DuplicateDeclaration { kind, iri });
        }
        let o = self.onto;
        let class = |c: &ClassId| {
            if o.classes.contains(c) {
                Ok(())
            } else {
                Err(OntologyError::Undeclared {
                    kind: EntityKind::Class,
                    iri: c.iri().to_string(),
                })
            }
        };
        let individual = |i: &IndividualId| {
            if o.individuals.contains(i) {
                Ok(())
            } else {
                Err(OntologyError::Undeclared {
                    kind: EntityKind::Individual,
                    iri: i.iri().to_string(),
                })
            }
        };
        for (sub, sup) in &o.subclass_axioms {
            class(sub)?;
            class(sup)?;
        }
        for set in &o.disjoint_axioms {
            set.iter().try_for_each(class)?;
        }
        for (i, c) in &o.class_assertions {
            individual(i)?;
            class(c)?;
        }
        for (s, p, t) in &o.property_assertions {
            individual(s)?;
            if !o.properties.contains(p) {
                return Err(OntologyError::Undeclared {
                    kind: EntityKind::ObjectProperty,
                    iri: p.iri().to_string(),
                });
            }
            individual(t)?;
        }
        check_acyclic(&o)?;
        Ok(o)
    }
}

fn check_acyclic(o: &Ontology) -> Result<(), OntologyError> {
    let mut sups: BTreeMap<&ClassId, Vec<&ClassId>> = BTreeMap::new();
    for (sub, sup) in &o.subclass_axioms {
        sups.entry(sub).or_default().push(sup);
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state: BTreeMap<&ClassId, u8> = BTreeMap::new();
    for start in o.classes.iter() {
        if state.get(start).copied().unwrap_or(0) != 0 {
            continue;
        }
        let mut stack: Vec<(&ClassId, usize)> = vec![(start, 0)];
        state.insert(start, 1);
        while let Some((node, next)) = stack.pop() {
            let succ = sups.get(node).map(Vec::as_slice).unwrap_or(&[]);
            if next < succ.len() {
                stack.push((node, next + 1));
                let s = succ[next];
                match state.get(s).copied().unwrap_or(0) {
                    0 => {
                        state.insert(s, 1);
                        stack.push((s, 0));
                    }
                    1 => return Err(OntologyError::SubclassCycle(s.iri().to_string())),
                    _ => {}
                }
            } else {
                state.insert(node, 2);
            }
        }
    }
    Ok(())
}
