//! Refinement operators over class expressions.
//!
//! [`RefinementOperator::refine_down`] specializes: every result has a
//! closed-world extension contained in the input's. It only introduces
//! conjunctions; disjunctions are refined operand-wise when already present.

use std::collections::HashSet;

use crate::expr::ClassExpression;
use crate::ontology::{ClassId, Ontology, PropertyId};
use crate::reasoner::ClassHierarchy;

/// Feature toggles of the operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinementConfig {
    pub use_negation: bool,
    pub use_all_restriction: bool,
    pub use_cardinality: bool,
    pub max_cardinality: u32,
}

impl Default for RefinementConfig {
    fn default() -> Self {
        RefinementConfig {
            use_negation: true,
            use_all_restriction: true,
            use_cardinality: true,
            max_cardinality: 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RefinementOperator {
    hierarchy: ClassHierarchy,
    properties: Vec<PropertyId>,
    cfg: RefinementConfig,
}

fn sorted(mut group: Vec<ClassExpression>) -> Vec<ClassExpression> {
    group.sort_by_cached_key(ClassExpression::render);
    group
}

/// Replaces operand `i` of a junction by `with`, splicing `with`'s operands
/// in place when it is a junction of the same kind.
fn replace_operand(
    items: &[ClassExpression],
    i: usize,
    with: ClassExpression,
    conj: bool,
) -> ClassExpression {
    let mut out = Vec::with_capacity(items.len() + 1);
    out.extend_from_slice(&items[..i]);
    match with {
        ClassExpression::And(cs) if conj => out.extend(cs),
        ClassExpression::Or(cs) if !conj => out.extend(cs),
        other => out.push(other),
    }
    out.extend_from_slice(&items[i + 1..]);
    if conj {
        ClassExpression::and(out)
    } else {
        ClassExpression::or(out)
    }
}

impl RefinementOperator {
    pub fn new(
        hierarchy: ClassHierarchy,
        properties: impl IntoIterator<Item = PropertyId>,
        cfg: RefinementConfig,
    ) -> Self {
        let mut properties: Vec<_> = properties.into_iter().collect();
        properties.sort();
        properties.dedup();
        assert!(cfg.max_cardinality >= 1, "max_cardinality must be at least 1");
        RefinementOperator {
            hierarchy,
            properties,
            cfg,
        }
    }

    pub fn for_ontology(o: &Ontology, cfg: RefinementConfig) -> Self {
        Self::new(
            ClassHierarchy::from_ontology(o),
            o.properties().iter().cloned(),
            cfg,
        )
    }

    pub fn hierarchy(&self) -> &ClassHierarchy {
        &self.hierarchy
    }

    pub fn config(&self) -> &RefinementConfig {
        &self.cfg
    }

    /// All downward refinements of `ce` no longer than `max_length`, in rule
    /// order and, within a rule, in rendered order. Exact duplicates are
    /// dropped; expressions that are merely equivalent are kept.
    pub fn refine_down(&self, ce: &ClassExpression, max_length: usize) -> Vec<ClassExpression> {
        let mut seen = HashSet::new();
        self.down(ce, max_length)
            .into_iter()
            .filter(|r| r.length() <= max_length && seen.insert(r.clone()))
            .collect()
    }

    fn top_refinements(&self, max_length: usize) -> Vec<ClassExpression> {
        use ClassExpression as C;
        let mut out = Vec::new();
        if max_length < 1 {
            return out;
        }
        let named = |c: &ClassId| C::Named(c.clone());
        out.extend(sorted(self.hierarchy.top_level().iter().map(named).collect()));
        if self.cfg.use_negation && max_length >= 2 {
            out.extend(sorted(
                self.hierarchy
                    .leaves()
                    .iter()
                    .map(|c| C::not(named(c)))
                    .collect(),
            ));
        }
        if max_length >= 3 {
            out.extend(sorted(
                self.properties
                    .iter()
                    .map(|p| C::exists(p.clone(), C::Top))
                    .collect(),
            ));
            if self.cfg.use_all_restriction {
                out.extend(sorted(
                    self.properties
                        .iter()
                        .map(|p| C::for_all(p.clone(), C::Top))
                        .collect(),
                ));
            }
        }
        if self.cfg.use_cardinality && max_length >= 4 && self.cfg.max_cardinality >= 2 {
            out.extend(sorted(
                self.properties
                    .iter()
                    .map(|p| C::min_card(2, p.clone(), C::Top))
                    .collect(),
            ));
        }
        out
    }

    /// `ce ⊓ D` for every `D ∈ ρ(⊤)` that fits.
    fn conjoin_top(&self, ce: &ClassExpression, max_length: usize) -> Vec<ClassExpression> {
        let budget = max_length.saturating_sub(ce.length() + 1);
        sorted(
            self.top_refinements(budget)
                .into_iter()
                .map(|d| ClassExpression::conjoin(ce, &d))
                .collect(),
        )
    }

    fn down(&self, ce: &ClassExpression, max_length: usize) -> Vec<ClassExpression> {
        use ClassExpression as C;
        if ce.length() > max_length && !matches!(ce, C::Top) {
            return Vec::new();
        }
        match ce {
            C::Top => self.top_refinements(max_length),
            C::Bottom => Vec::new(),
            C::Named(a) => {
                let mut out = sorted(self.hierarchy.subclasses(a).map(|c| C::Named(c.clone())).collect());
                out.extend(self.conjoin_top(ce, max_length));
                out
            }
            C::Not(inner) => match &**inner {
                C::Named(a) => {
                    let mut out = Vec::new();
                    if self.cfg.use_negation {
                        out.extend(sorted(
                            self.hierarchy
                                .superclasses(a)
                                .map(|s| C::not(C::Named(s.clone())))
                                .collect(),
                        ));
                    }
                    out.extend(self.conjoin_top(ce, max_length));
                    out
                }
                _ => Vec::new(),
            },
            C::Exists(p, filler) => {
                let mut out = sorted(
                    self.down(filler, max_length - 2)
                        .into_iter()
                        .map(|f| C::exists(p.clone(), f))
                        .collect(),
                );
                out.extend(self.conjoin_top(ce, max_length));
                if self.cfg.use_cardinality
                    && self.cfg.max_cardinality >= 2
                    && ce.length() < max_length
                {
                    out.push(C::min_card(2, p.clone(), (**filler).clone()));
                }
                out
            }
            C::ForAll(p, filler) => {
                let mut out = sorted(
                    self.down(filler, max_length - 2)
                        .into_iter()
                        .map(|f| C::for_all(p.clone(), f))
                        .collect(),
                );
                out.extend(self.conjoin_top(ce, max_length));
                out
            }
            C::MinCard(n, p, filler) => {
                let mut out = sorted(
                    self.down(filler, max_length - 3)
                        .into_iter()
                        .map(|f| C::MinCard(*n, p.clone(), Box::new(f)))
                        .collect(),
                );
                if *n < self.cfg.max_cardinality {
                    out.push(C::MinCard(n + 1, p.clone(), filler.clone()));
                }
                out
            }
            C::MaxCard(n, p, filler) => {
                // ≤n r.C shrinks as C grows, so the filler is generalized
                let mut out: Vec<_> = sorted(
                    self.up(filler)
                        .into_iter()
                        .map(|f| C::MaxCard(*n, p.clone(), Box::new(f)))
                        .collect(),
                );
                if *n >= 1 {
                    out.push(C::MaxCard(n - 1, p.clone(), filler.clone()));
                }
                out
            }
            C::And(cs) | C::Or(cs) => {
                let conj = matches!(ce, C::And(_));
                let total = ce.length();
                let mut out = Vec::new();
                for (i, operand) in cs.iter().enumerate() {
                    let budget = max_length - (total - operand.length());
                    out.extend(sorted(
                        self.down(operand, budget)
                            .into_iter()
                            .map(|d| replace_operand(cs, i, d, conj))
                            .collect(),
                    ));
                }
                out
            }
        }
    }

    /// Upward refinements: each result's extension contains the input's.
    /// Not used by the search loops.
    pub fn refine_up(&self, ce: &ClassExpression) -> Vec<ClassExpression> {
        let mut seen = HashSet::new();
        self.up(ce)
            .into_iter()
            .filter(|r| seen.insert(r.clone()))
            .collect()
    }

    fn up(&self, ce: &ClassExpression) -> Vec<ClassExpression> {
        use ClassExpression as C;
        match ce {
            C::Top | C::Bottom => Vec::new(),
            C::Named(a) => {
                let sups: Vec<_> = self.hierarchy.superclasses(a).map(|c| C::Named(c.clone())).collect();
                if sups.is_empty() {
                    vec![C::Top]
                } else {
                    sorted(sups)
                }
            }
            C::Not(inner) => match &**inner {
                C::Named(a) => {
                    let subs: Vec<_> = self
                        .hierarchy
                        .subclasses(a)
                        .map(|c| C::not(C::Named(c.clone())))
                        .collect();
                    if subs.is_empty() {
                        vec![C::Top]
                    } else {
                        sorted(subs)
                    }
                }
                _ => vec![C::Top],
            },
            C::And(cs) => (0..cs.len())
                .map(|i| {
                    let mut rest = cs.clone();
                    rest.remove(i);
                    C::and(rest)
                })
                .collect(),
            C::Or(cs) => {
                let mut out = Vec::new();
                for (i, operand) in cs.iter().enumerate() {
                    out.extend(
                        self.up(operand)
                            .into_iter()
                            .map(|g| replace_operand(cs, i, g, false)),
                    );
                }
                out
            }
            C::Exists(p, filler) | C::ForAll(p, filler) => {
                if **filler == C::Top {
                    return vec![C::Top];
                }
                let exists = matches!(ce, C::Exists(..));
                sorted(
                    self.up(filler)
                        .into_iter()
                        .map(|g| {
                            if exists {
                                C::exists(p.clone(), g)
                            } else {
                                C::for_all(p.clone(), g)
                            }
                        })
                        .collect(),
                )
            }
            C::MinCard(n, p, filler) => {
                let mut out = Vec::new();
                if *n >= 2 {
                    out.push(C::MinCard(n - 1, p.clone(), filler.clone()));
                } else {
                    out.push(C::Top);
                }
                out.extend(sorted(
                    self.up(filler)
                        .into_iter()
                        .map(|g| C::MinCard(*n, p.clone(), Box::new(g)))
                        .collect(),
                ));
                out
            }
            C::MaxCard(n, p, filler) => vec![C::MaxCard(n + 1, p.clone(), filler.clone())],
        }
    }
}
