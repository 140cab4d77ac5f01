//! Node scoring functions used to pick the next node to expand.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HeuristicError {
    #[error("non-root node whose parent has no refinements")]
    ParentWithoutRefinements,
    #[error("unknown heuristic `{0}` (expected oe, ht1 or fh1)")]
    Unknown(String),
}

/// Parent-side inputs of a score; absent for tree roots.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParentStats {
    pub acc: f64,
    /// Children the parent has accepted so far.
    pub refin: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NodeStats {
    pub acc: f64,
    pub f1: f64,
    /// Horizontal expansion of the node.
    pub horiz: usize,
    /// Children accepted under this node so far.
    pub refin: usize,
    pub parent: Option<ParentStats>,
}

impl NodeStats {
    pub fn is_root(&self) -> bool {
        self.parent.is_none()
    }
}

/// Weights of HT1; the CELOE-style OE score reuses all but `epsilon`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ht1Weights {
    pub start_bonus: f64,
    /// Horizontal expansion penalty.
    pub beta: f64,
    /// Penalty per accepted child.
    pub gamma: f64,
    /// Accuracy gain weight.
    pub delta: f64,
    /// Weight of the inverse parent refinement count.
    pub epsilon: f64,
}

impl Default for Ht1Weights {
    fn default() -> Self {
        Ht1Weights {
            start_bonus: 0.7,
            beta: 0.1,
            gamma: 0.01,
            delta: 0.3,
            epsilon: 0.1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fh1Weights {
    /// Penalty per unit of horizontal expansion.
    pub alpha: f64,
    /// Bonus factor for F1 at or above `hi`.
    pub beta: f64,
    /// Penalty factor for F1 at or below `lo`.
    pub gamma: f64,
    pub hi: f64,
    pub lo: f64,
}

impl Default for Fh1Weights {
    fn default() -> Self {
        Fh1Weights {
            alpha: 0.05,
            beta: 1.0,
            gamma: 0.5,
            hi: 0.8,
            lo: 0.3,
        }
    }
}

fn expansion_penalty(horiz: usize, beta: f64) -> f64 {
    (horiz as f64 - 1.0) * beta
}

pub fn score_ht1(s: &NodeStats, w: &Ht1Weights) -> Result<f64, HeuristicError> {
    let shared = -expansion_penalty(s.horiz, w.beta) - s.refin as f64 * w.gamma;
    match s.parent {
        None => Ok(w.start_bonus + shared),
        Some(ParentStats { refin: 0, .. }) => Err(HeuristicError::ParentWithoutRefinements),
        Some(p) => Ok((s.acc - p.acc) * w.delta + (1.0 / p.refin as f64) * w.epsilon + shared),
    }
}

pub fn score_fh1(s: &NodeStats, w: &Fh1Weights) -> f64 {
    let depth = -(s.horiz as f64) * w.alpha;
    let f1_term = if s.f1 >= w.hi {
        s.f1 * w.beta
    } else if s.f1 <= w.lo {
        -s.f1 * w.gamma
    } else {
        0.0
    };
    depth + f1_term
}

/// Baseline CELOE-style score: accuracy plus weighted gain, minus
/// expansion and child-count penalties.
pub fn score_oe(s: &NodeStats, w: &Ht1Weights) -> f64 {
    match s.parent {
        None => w.start_bonus - expansion_penalty(s.horiz, w.beta),
        Some(p) => {
            s.acc + (s.acc - p.acc) * w.delta
                - expansion_penalty(s.horiz, w.beta)
                - s.refin as f64 * w.gamma
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum HeuristicKind {
    Oe,
    #[default]
    Ht1,
    Fh1,
}

impl FromStr for HeuristicKind {
    type Err = HeuristicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "oe" | "celoe" => Ok(HeuristicKind::Oe),
            "ht1" => Ok(HeuristicKind::Ht1),
            "fh1" | "fh" => Ok(HeuristicKind::Fh1),
            _ => Err(HeuristicError::Unknown(s.to_string())),
        }
    }
}

impl fmt::Display for HeuristicKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HeuristicKind::Oe => "oe",
            HeuristicKind::Ht1 => "ht1",
            HeuristicKind::Fh1 => "fh1",
        })
    }
}

/// A heuristic together with its weights.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Heuristic {
    Oe(Ht1Weights),
    Ht1(Ht1Weights),
    Fh1(Fh1Weights),
}

impl Default for Heuristic {
    fn default() -> Self {
        Heuristic::Ht1(Ht1Weights::default())
    }
}

impl Heuristic {
    pub fn with_defaults(kind: HeuristicKind) -> Self {
        match kind {
            HeuristicKind::Oe => Heuristic::Oe(Ht1Weights::default()),
            HeuristicKind::Ht1 => Heuristic::Ht1(Ht1Weights::default()),
            HeuristicKind::Fh1 => Heuristic::Fh1(Fh1Weights::default()),
        }
    }

    pub fn kind(&self) -> HeuristicKind {
        match self {
            Heuristic::Oe(_) => HeuristicKind::Oe,
            Heuristic::Ht1(_) => HeuristicKind::Ht1,
            Heuristic::Fh1(_) => HeuristicKind::Fh1,
        }
    }

    pub fn score(&self, s: &NodeStats) -> Result<f64, HeuristicError> {
        match self {
            Heuristic::Oe(w) => Ok(score_oe(s, w)),
            Heuristic::Ht1(w) => score_ht1(s, w),
            Heuristic::Fh1(w) => Ok(score_fh1(s, w)),
        }
    }
}
