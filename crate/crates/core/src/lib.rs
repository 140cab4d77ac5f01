//! Description-logic concept learning over closed-world ontologies.
//!
//! Parse an ontology, set up a [`problem::LearningProblem`], and run
//! [`search::run_celoe`] or [`search::run_fm`] to find a class expression
//! separating positives from negatives.

pub mod benchgen;
pub mod config;
pub mod expr;
pub mod fixtures;
pub mod heuristics;
pub mod ontology;
pub mod problem;
pub mod reasoner;
pub mod refinement;
pub mod runner;
pub mod search;

pub use expr::ClassExpression;
pub use ontology::{parse_ontology, serialize_ontology, Ontology};
pub use problem::LearningProblem;
