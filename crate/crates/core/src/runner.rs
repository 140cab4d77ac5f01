//! Turns a [`RunConfig`] into runs, reports and parameter sweeps.

use std::fmt::Write as _;
use std::fs;

use serde::Serialize;
use thiserror::Error;

use crate::config::{ConfigError, RunConfig};
use crate::expr::ClassExpression;
use crate::heuristics::{Fh1Weights, Heuristic, HeuristicKind, Ht1Weights};
use crate::ontology::{parse_ontology, Ontology, OntologyError};
use crate::problem::{LearningProblem, ProblemError};
use crate::search::{run_celoe, run_fm, Algorithm, FmParams, RunReport, SearchError};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot read ontology {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("in {path}: {source}")]
    Ontology { path: String, source: OntologyError },
    #[error("{kind} `{name}` does not resolve in the ontology")]
    Unresolved { kind: &'static str, name: String },
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("cannot sweep `{0}`; choose maxNodesAddedPerTree, nbTrees or maxLength")]
    UnknownSweepParam(String),
    #[error("sweep value `{0}` must be a positive integer")]
    BadSweepValue(String),
}

pub fn load_ontology(cfg: &RunConfig) -> Result<Ontology, RunError> {
    let path = cfg.ontology_path.display().to_string();
    let text = fs::read_to_string(&cfg.ontology_path).map_err(|source| RunError::Io {
        path: path.clone(),
        source,
    })?;
    parse_ontology(&text).map_err(|source| RunError::Ontology { path, source })
}

fn is_thing(name: &str) -> bool {
    matches!(
        name,
        "Thing" | "owl:Thing" | "<http://www.w3.org/2002/07/owl#Thing>" | "http://www.w3.org/2002/07/owl#Thing"
    )
}

/// Resolves the config's IRIs against `o` and builds the search inputs.
pub fn prepare(cfg: &RunConfig, o: &Ontology) -> Result<(LearningProblem, FmParams), RunError> {
    let individuals = |names: &[String]| {
        names
            .iter()
            .map(|n| {
                o.find_individual(n).ok_or_else(|| RunError::Unresolved {
                    kind: "individual",
                    name: n.clone(),
                })
            })
            .collect::<Result<Vec<_>, _>>()
    };
    let lp = LearningProblem::new(individuals(&cfg.positives)?, individuals(&cfg.negatives)?)?;

    let start_classes = if cfg.start_classes.is_empty() {
        None
    } else {
        let mut out = Vec::new();
        for n in &cfg.start_classes {
            if is_thing(n) {
                out.push(ClassExpression::Top);
            } else {
                let c = o.find_class(n).ok_or_else(|| RunError::Unresolved {
                    kind: "class",
                    name: n.clone(),
                })?;
                out.push(ClassExpression::Named(c));
            }
        }
        Some(out)
    };

    let w = &cfg.weights;
    let heuristic = match cfg.heuristic {
        HeuristicKind::Oe | HeuristicKind::Ht1 => {
            let d = Ht1Weights::default();
            let ht = Ht1Weights {
                start_bonus: w.start_bonus.unwrap_or(d.start_bonus),
                beta: w.beta.unwrap_or(d.beta),
                gamma: w.gamma.unwrap_or(d.gamma),
                delta: w.delta.unwrap_or(d.delta),
                epsilon: w.epsilon.unwrap_or(d.epsilon),
            };
            if cfg.heuristic == HeuristicKind::Oe {
                Heuristic::Oe(ht)
            } else {
                Heuristic::Ht1(ht)
            }
        }
        HeuristicKind::Fh1 => {
            let d = Fh1Weights::default();
            Heuristic::Fh1(Fh1Weights {
                alpha: w.alpha.unwrap_or(d.alpha),
                beta: w.beta.unwrap_or(d.beta),
                gamma: w.gamma.unwrap_or(d.gamma),
                hi: w.f1_hi.unwrap_or(d.hi),
                lo: w.f1_lo.unwrap_or(d.lo),
            })
        }
    };

    let params = FmParams {
        nb_trees: cfg.nb_trees,
        max_nodes_added_per_tree: cfg.max_nodes_added_per_tree,
        max_length: cfg.max_length,
        max_exec_ms: (cfg.max_exec_seconds * 1000.0).round() as u64,
        max_refinements: cfg.max_refinements,
        heuristic,
        start_classes,
        seed: cfg.seed,
        stop_on_perfect: cfg.stop_on_perfect,
        noise: cfg.noise_percentage / 100.0,
        trace: cfg.trace,
        ..FmParams::default()
    };
    params.validate()?;
    Ok((lp, params))
}

pub fn run_with(cfg: &RunConfig, o: &Ontology) -> Result<RunReport, RunError> {
    let (lp, params) = prepare(cfg, o)?;
    Ok(match cfg.algorithm {
        Algorithm::Celoe => run_celoe(o, &lp, &params)?,
        Algorithm::Fm => run_fm(o, &lp, &params)?,
    })
}

pub fn run(cfg: &RunConfig) -> Result<RunReport, RunError> {
    let o = load_ontology(cfg)?;
    run_with(cfg, &o)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct JsonReport {
    algorithm: String,
    best_expression: String,
    accuracy: f64,
    f1: f64,
    refinement_count: usize,
    elapsed_ms: u64,
    nb_trees: usize,
    seed: u64,
}

pub fn report_json(r: &RunReport) -> String {
    let j = JsonReport {
        algorithm: r.algorithm.to_string(),
        best_expression: r.best_expr.render(),
        accuracy: r.accuracy,
        f1: r.f1,
        refinement_count: r.refinement_count,
        elapsed_ms: r.elapsed_ms,
        nb_trees: r.nb_trees,
        seed: r.seed,
    };
    serde_json::to_string_pretty(&j).expect("report serializes") + "\n"
}

pub fn report_text(r: &RunReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "algorithm:       {}", r.algorithm);
    let _ = writeln!(s, "best expression: {}", r.best_expr);
    let _ = writeln!(s, "accuracy:        {:?}", r.accuracy);
    let _ = writeln!(s, "f1:              {:?}", r.f1);
    let _ = writeln!(s, "refinements:     {}", r.refinement_count);
    let _ = writeln!(s, "elapsed ms:      {}", r.elapsed_ms);
    let _ = writeln!(s, "trees:           {}", r.nb_trees);
    let _ = writeln!(s, "seed:            {}", r.seed);
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParam {
    MaxNodesAddedPerTree,
    NbTrees,
    MaxLength,
}

impl std::str::FromStr for SweepParam {
    type Err = RunError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "maxNodesAddedPerTree" => Ok(SweepParam::MaxNodesAddedPerTree),
            "nbTrees" => Ok(SweepParam::NbTrees),
            "maxLength" => Ok(SweepParam::MaxLength),
            _ => Err(RunError::UnknownSweepParam(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub value: usize,
    pub refinement_count: usize,
    pub elapsed_ms: u64,
    pub accuracy: f64,
}

/// One full run per value, sequentially, everything else fixed.
pub fn sweep(cfg: &RunConfig, param: SweepParam, values: &[usize]) -> Result<Vec<SweepRow>, RunError> {
    if values.is_empty() {
        return Ok(Vec::new());
    }
    let o = load_ontology(cfg)?;
    let mut rows = Vec::with_capacity(values.len());
    for &value in values {
        if value == 0 {
            return Err(RunError::BadSweepValue(value.to_string()));
        }
        let mut c = cfg.clone();
        c.trace = false;
        match param {
            SweepParam::MaxNodesAddedPerTree => c.max_nodes_added_per_tree = value,
            SweepParam::NbTrees => c.nb_trees = value,
            SweepParam::MaxLength => c.max_length = value,
        }
        let r = run_with(&c, &o)?;
        rows.push(SweepRow {
            value,
            refinement_count: r.refinement_count,
            elapsed_ms: r.elapsed_ms,
            accuracy: r.accuracy,
        });
    }
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from("value,refinement_count,elapsed_ms\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{}", r.value, r.refinement_count, r.elapsed_ms);
    }
    s
}

pub fn parse_sweep_values(list: &str) -> Result<Vec<usize>, RunError> {
    list.split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| match v.parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(RunError::BadSweepValue(v.to_string())),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;
    use crate::fixtures::{UNIVERSITY_CONF, UNIVERSITY_OFN};

    fn fixture_cfg() -> RunConfig {
        let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
        parse_config(UNIVERSITY_CONF, &dir).unwrap()
    }

    #[test]
    fn fixture_config_runs_to_perfect() {
        let r = run(&fixture_cfg()).unwrap();
        assert_eq!(r.accuracy, 1.0);
        assert_eq!(r.f1, 1.0);
        let json: serde_json::Value = serde_json::from_str(&report_json(&r)).unwrap();
        for key in ["algorithm", "bestExpression", "accuracy", "f1", "refinementCount", "elapsedMs", "nbTrees", "seed"] {
            assert!(json.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn unresolved_names() {
        let o = parse_ontology(UNIVERSITY_OFN).unwrap();
        let mut c = fixture_cfg();
        c.negatives.push(":zed".into());
        assert!(matches!(prepare(&c, &o), Err(RunError::Unresolved { kind: "individual", .. })));
        let mut c = fixture_cfg();
        c.start_classes = vec![":Professor".into()];
        assert!(matches!(prepare(&c, &o), Err(RunError::Unresolved { kind: "class", .. })));
    }

    #[test]
    fn sweep_values() {
        assert_eq!(parse_sweep_values("1, 2,3").unwrap(), vec![1, 2, 3]);
        assert!(parse_sweep_values("1,x").is_err());
        assert!(sweep(&fixture_cfg(), SweepParam::NbTrees, &[]).unwrap().is_empty());
        let rows = sweep(&fixture_cfg(), SweepParam::NbTrees, &[1, 2]).unwrap();
        assert!(rows[1].refinement_count >= rows[0].refinement_count);
        assert!(sweep_csv(&rows).starts_with("value,refinement_count,elapsed_ms\n1,"));
    }
}
