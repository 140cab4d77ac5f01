//! The learning loops.
//!
//! [`run_celoe`] grows one search tree from a single start class. [`run_fm`]
//! grows several trees round-robin; after each node selection the selected
//! expression is conjoined with the best nodes of the other trees and
//! suitable conjunctions go to a [`SharedPool`] every tree draws from.

mod engine;
mod pool;
mod start;

use thiserror::Error;

use crate::expr::ClassExpression;
use crate::heuristics::{Heuristic, HeuristicError};
use crate::problem::ProblemError;
use crate::reasoner::ReasonerError;
use crate::refinement::RefinementConfig;

pub use engine::{run_celoe, run_fm, NodeOrigin, Search, SearchNode, SearchTree};
pub use pool::{maybe_share_conjunction, SharedPool};
pub use start::{find_starting_classes, StartClasses, StartVisit};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Reasoner(#[from] ReasonerError),
    #[error(transparent)]
    Heuristic(#[from] HeuristicError),
    #[error("invalid search parameters: {0}")]
    InvalidParams(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Celoe,
    Fm,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Algorithm::Celoe => "celoe",
            Algorithm::Fm => "fm",
        })
    }
}

/// Parameters shared by both loops. CELOE ignores `nb_trees`,
/// `max_nodes_added_per_tree` and `max_length`.
#[derive(Clone, Debug)]
pub struct FmParams {
    pub nb_trees: usize,
    /// Cap on nodes one tree attaches per cycle, pool draws included.
    pub max_nodes_added_per_tree: usize,
    /// Pool conjunctions must be strictly shorter than this.
    pub max_length: usize,
    pub max_exec_ms: u64,
    /// Budget on accepted nodes over all trees.
    pub max_refinements: usize,
    pub heuristic: Heuristic,
    /// Explicit roots. For FM, when fewer than `nb_trees` are given one
    /// more tree starts at ⊤.
    pub start_classes: Option<Vec<ClassExpression>>,
    pub seed: u64,
    pub stop_on_perfect: bool,
    /// Fraction of positives a node may miss before it is discarded.
    pub noise: f64,
    /// Nodes are not expanded past this horizontal expansion.
    pub max_expression_length: usize,
    pub refinement: RefinementConfig,
    pub trace: bool,
}

impl Default for FmParams {
    fn default() -> Self {
        FmParams {
            nb_trees: 2,
            max_nodes_added_per_tree: 3,
            max_length: 11,
            max_exec_ms: 10_000,
            max_refinements: 1_000,
            heuristic: Heuristic::default(),
            start_classes: None,
            seed: 0,
            stop_on_perfect: false,
            noise: 0.0,
            max_expression_length: 12,
            refinement: RefinementConfig::default(),
            trace: false,
        }
    }
}

impl FmParams {
    pub fn validate(&self) -> Result<(), SearchError> {
        let bad = |m: &str| Err(SearchError::InvalidParams(m.to_string()));
        if self.nb_trees < 1 {
            return bad("nb_trees must be at least 1");
        }
        if self.max_nodes_added_per_tree < 1 {
            return bad("max_nodes_added_per_tree must be at least 1");
        }
        if self.max_length < 1 || self.max_expression_length < 1 {
            return bad("length bounds must be positive");
        }
        if self.refinement.max_cardinality < 1 {
            return bad("max_cardinality must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.noise) {
            return bad("noise must be within [0, 1]");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub algorithm: Algorithm,
    /// Canonical form of the best expression found.
    pub best_expr: ClassExpression,
    pub accuracy: f64,
    pub f1: f64,
    /// Nodes accepted over the whole run, all trees.
    pub refinement_count: usize,
    /// Accepted-node count at the moment the best expression was found.
    pub best_found_at: usize,
    pub elapsed_ms: u64,
    pub nb_trees: usize,
    pub seed: u64,
    pub trace: Option<Vec<String>>,
}
