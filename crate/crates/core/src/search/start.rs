use std::collections::{BTreeSet, VecDeque};

use crate::expr::ClassExpression;
use crate::problem::ExampleSets;
use crate::reasoner::{ClassHierarchy, MaterializedExtensions, ReasonerError};

/// Result of the start-class walk, with the coverage values it looked at.
#[derive(Clone, Debug, PartialEq)]
pub struct StartClasses {
    pub classes: Vec<ClassExpression>,
    /// One entry per visited class: its coverage and that of its children.
    pub visits: Vec<StartVisit>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StartVisit {
    pub class: ClassExpression,
    pub pos_cov: f64,
    pub children: Vec<(ClassExpression, f64)>,
}

impl StartClasses {
    /// The coverage line of the trace, e.g.
    /// `Thing  cov 1.0, Student cov1.0,  Student  cov 1.0`.
    pub fn coverage_line(&self) -> String {
        let mut tokens = Vec::new();
        for (i, v) in self.visits.iter().enumerate() {
            let lead = if i == 0 { "" } else { " " };
            tokens.push(format!("{lead}{}  cov {:?}", v.class, v.pos_cov));
            for (child, cov) in &v.children {
                tokens.push(format!("{child} cov{cov:?}"));
            }
        }
        tokens.join(", ")
    }
}

/// Walks down from ⊤ while some child keeps the parent's positive coverage;
/// a class none of whose children does becomes a start class.
///
/// When more than `nb_trees` classes qualify, the most specific ones
/// (smallest extension, then rendered name) are kept.
pub fn find_starting_classes(
    examples: &ExampleSets,
    hierarchy: &ClassHierarchy,
    ext: &MaterializedExtensions,
    nb_trees: usize,
) -> Result<StartClasses, ReasonerError> {
    let cov = |ce: &ClassExpression| -> Result<f64, ReasonerError> {
        Ok(examples.evaluate(ce, ext)?.pos_cov)
    };
    let mut queue = VecDeque::from([ClassExpression::Top]);
    let mut queued: BTreeSet<ClassExpression> = queue.iter().cloned().collect();
    let mut found: Vec<ClassExpression> = Vec::new();
    let mut visits = Vec::new();
    while let Some(class) = queue.pop_front() {
        let parent_cov = cov(&class)?;
        let children: Vec<ClassExpression> = match &class {
            ClassExpression::Top => hierarchy
                .top_level()
                .iter()
                .map(|c| ClassExpression::Named(c.clone()))
                .collect(),
            ClassExpression::Named(c) => hierarchy
                .subclasses(c)
                .map(|s| ClassExpression::Named(s.clone()))
                .collect(),
            _ => Vec::new(),
        };
        let mut scored = Vec::with_capacity(children.len());
        for child in children {
            let c = cov(&child)?;
            scored.push((child, c));
        }
        let keep: Vec<_> = scored
            .iter()
            .filter(|(_, c)| *c == parent_cov)
            .map(|(e, _)| e.clone())
            .collect();
        visits.push(StartVisit {
            class: class.clone(),
            pos_cov: parent_cov,
            children: scored,
        });
        if keep.is_empty() {
            if !found.contains(&class) {
                found.push(class);
            }
        } else {
            for k in keep {
                if queued.insert(k.clone()) {
                    queue.push_back(k);
                }
            }
        }
    }
    let mut ranked = Vec::with_capacity(found.len());
    for class in found {
        let size = ext.instances_of(&class)?.len();
        ranked.push((size, class.render(), class));
    }
    ranked.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    ranked.truncate(nb_trees.max(1));
    Ok(StartClasses {
        classes: ranked.into_iter().map(|(_, _, c)| c).collect(),
        visits,
    })
}
