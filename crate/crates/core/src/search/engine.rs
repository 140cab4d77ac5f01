use std::cmp::Ordering;
use std::collections::HashSet;
use std::time::Instant;

use log::debug;

use super::pool::{maybe_share_conjunction, SharedPool};
use super::start::find_starting_classes;
use super::{Algorithm, FmParams, RunReport, SearchError};
use crate::expr::ClassExpression;
use crate::heuristics::{NodeStats, ParentStats};
use crate::ontology::Ontology;
use crate::problem::{Evaluation, ExampleSets, LearningProblem};
use crate::reasoner::{materialize, MaterializedExtensions};
use crate::refinement::RefinementOperator;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeOrigin {
    Root,
    /// Produced by refining the parent.
    Refinement,
    /// Drawn from the shared pool while the parent was selected.
    Pool,
}

#[derive(Clone, Debug)]
pub struct SearchNode {
    pub expr: ClassExpression,
    pub eval: Evaluation,
    /// Starts at the expression length, grows by one per selection.
    pub horiz: usize,
    pub children: Vec<usize>,
    pub parent: Option<usize>,
    pub tree_id: usize,
    pub origin: NodeOrigin,
    /// Parent's horizontal expansion when this node was generated.
    pub generated_at: usize,
    rendered: String,
}

#[derive(Clone, Debug)]
pub struct SearchTree {
    pub tree_id: usize,
    /// Index of the next pool entry this tree has not looked at.
    pub pool_cursor: usize,
    nodes: Vec<SearchNode>,
    seen: HashSet<ClassExpression>,
    best: usize,
}

impl SearchTree {
    pub fn root(&self) -> &SearchNode {
        &self.nodes[0]
    }

    pub fn nodes(&self) -> &[SearchNode] {
        &self.nodes
    }

    pub fn best(&self) -> &SearchNode {
        &self.nodes[self.best]
    }
}

/// `a` beats `b`: higher accuracy, then higher F1, then shorter.
fn better(a: &Evaluation, a_len: usize, b: &Evaluation, b_len: usize) -> bool {
    match a.accuracy.partial_cmp(&b.accuracy) {
        Some(Ordering::Greater) => true,
        Some(Ordering::Less) => false,
        _ => match a.f1.partial_cmp(&b.f1) {
            Some(Ordering::Greater) => true,
            Some(Ordering::Less) => false,
            _ => a_len < b_len,
        },
    }
}

fn fmt_list<'a>(items: impl IntoIterator<Item = &'a ClassExpression>) -> String {
    let parts: Vec<String> = items.into_iter().map(ClassExpression::render).collect();
    format!("[{}]", parts.join(", "))
}

struct Best {
    expr: ClassExpression,
    eval: Evaluation,
    len: usize,
}

/// One learning run. Owns its extensions, trees and pool so that tests can
/// inspect them after [`Search::run`].
pub struct Search {
    algorithm: Algorithm,
    params: FmParams,
    ext: MaterializedExtensions,
    examples: ExampleSets,
    op: RefinementOperator,
    trees: Vec<SearchTree>,
    pool: SharedPool,
    best: Option<Best>,
    refinement_count: usize,
    best_found_at: usize,
    max_missed_positives: usize,
    trace: Vec<String>,
    started: Instant,
}

impl Search {
    pub fn new(
        o: &Ontology,
        lp: &LearningProblem,
        algorithm: Algorithm,
        params: FmParams,
    ) -> Result<Self, SearchError> {
        params.validate()?;
        let (hierarchy, ext) = materialize(o);
        let examples = lp.index(&ext)?;
        let op = RefinementOperator::new(hierarchy, o.properties().iter().cloned(), params.refinement.clone());
        let max_missed_positives = (params.noise * examples.pos.len() as f64).floor() as usize;
        Ok(Search {
            algorithm,
            params,
            ext,
            examples,
            op,
            trees: Vec::new(),
            pool: SharedPool::new(),
            best: None,
            refinement_count: 0,
            best_found_at: 0,
            max_missed_positives,
            trace: Vec::new(),
            started: Instant::now(),
        })
    }

    pub fn trees(&self) -> &[SearchTree] {
        &self.trees
    }

    pub fn pool(&self) -> &SharedPool {
        &self.pool
    }

    pub fn operator(&self) -> &RefinementOperator {
        &self.op
    }

    pub fn extensions(&self) -> &MaterializedExtensions {
        &self.ext
    }

    fn log(&mut self, line: impl Into<String>) {
        if self.params.trace {
            let line = line.into();
            debug!("{line}");
            self.trace.push(line);
        }
    }

    fn elapsed_ms(&self) -> u64 {
        self.started.elapsed().as_millis() as u64
    }

    fn should_stop(&self) -> bool {
        self.refinement_count >= self.params.max_refinements
            || self.elapsed_ms() >= self.params.max_exec_ms
            || (self.params.stop_on_perfect
                && self.best.as_ref().is_some_and(|b| b.eval.accuracy == 1.0))
    }

    fn too_weak(&self, e: &Evaluation) -> bool {
        e.fn_ > self.max_missed_positives
    }

    fn evaluate(&self, ce: &ClassExpression) -> Result<Evaluation, SearchError> {
        Ok(self.examples.evaluate(ce, &self.ext)?)
    }

    fn offer_best(&mut self, expr: &ClassExpression, eval: Evaluation) {
        let len = expr.length();
        let improved = match &self.best {
            None => true,
            Some(b) => better(&eval, len, &b.eval, b.len),
        };
        if improved {
            let canonical = expr.canonical_form();
            self.best_found_at = self.refinement_count;
            let line = format!(
                "Best description so far: {} acc: {:?} f-score: {:?} ref: {} time: {}",
                canonical,
                eval.accuracy,
                eval.f1,
                self.refinement_count,
                self.elapsed_ms()
            );
            self.best = Some(Best {
                expr: canonical,
                eval,
                len,
            });
            self.log(line);
        }
    }

    fn plant_roots(&mut self) -> Result<(), SearchError> {
        let roots = match self.algorithm {
            Algorithm::Celoe => {
                self.log("CELOE starting");
                let start = self
                    .params
                    .start_classes
                    .as_ref()
                    .and_then(|s| s.first().cloned())
                    .unwrap_or(ClassExpression::Top);
                self.log(format!("Start class: {start}"));
                vec![start]
            }
            Algorithm::Fm => {
                self.log("FMA starting");
                match self.params.start_classes.clone() {
                    Some(mut given) if !given.is_empty() => {
                        // trees without a named start class begin at ⊤
                        if given.len() < self.params.nb_trees && !given.contains(&ClassExpression::Top) {
                            given.push(ClassExpression::Top);
                        }
                        self.log(format!("{} trees with given roots: {}", given.len(), fmt_list(&given)));
                        given
                    }
                    _ => {
                        let nb = self.params.nb_trees;
                        self.log(format!("Nb of tree roots to find: {nb}"));
                        let found = find_starting_classes(&self.examples, self.op.hierarchy(), &self.ext, nb)?;
                        self.log(found.coverage_line());
                        self.log(format!(
                            "{} trees found with roots: {}",
                            found.classes.len(),
                            fmt_list(&found.classes)
                        ));
                        found.classes
                    }
                }
            }
        };
        let mut planted = HashSet::new();
        for root in roots {
            if !planted.insert(root.canonical_form()) {
                continue;
            }
            let eval = self.evaluate(&root)?;
            let tree_id = self.trees.len();
            let rendered = root.render();
            self.log(format!("{rendered} acc: {:?}", eval.accuracy));
            let mut seen = HashSet::new();
            seen.insert(root.canonical_form());
            self.trees.push(SearchTree {
                tree_id,
                pool_cursor: 0,
                nodes: vec![SearchNode {
                    horiz: root.length(),
                    expr: root.clone(),
                    eval,
                    children: Vec::new(),
                    parent: None,
                    tree_id,
                    origin: NodeOrigin::Root,
                    generated_at: 0,
                    rendered,
                }],
                seen,
                best: 0,
            });
            self.offer_best(&root, eval);
        }
        Ok(())
    }

    fn stats(&self, tree: &SearchTree, idx: usize) -> NodeStats {
        let n = &tree.nodes[idx];
        NodeStats {
            acc: n.eval.accuracy,
            f1: n.eval.f1,
            horiz: n.horiz,
            refin: n.children.len(),
            parent: n.parent.map(|p| ParentStats {
                acc: tree.nodes[p].eval.accuracy,
                refin: tree.nodes[p].children.len(),
            }),
        }
    }

    /// Highest-scoring expandable node; ties go to the shorter expression,
    /// then to the smaller rendering.
    fn select(&self, t: usize) -> Result<Option<(usize, f64)>, SearchError> {
        let tree = &self.trees[t];
        let mut best: Option<(usize, f64)> = None;
        for (i, n) in tree.nodes.iter().enumerate() {
            if n.horiz > self.params.max_expression_length {
                continue;
            }
            let score = self.params.heuristic.score(&self.stats(tree, i))?;
            let wins = match best {
                None => true,
                Some((j, s)) => {
                    let m = &tree.nodes[j];
                    score > s
                        || (score == s
                            && (n.expr.length(), &n.rendered) < (m.expr.length(), &m.rendered))
                }
            };
            if wins {
                best = Some((i, score));
            }
        }
        Ok(best)
    }

    fn log_score(&mut self, t: usize, idx: usize, score: f64) {
        if !self.params.trace {
            return;
        }
        let tree = &self.trees[t];
        let s = self.stats(tree, idx);
        let lines = [
            format!("Node {} score calculation : ", tree.nodes[idx].rendered),
            format!("    Horizontal expansion: {:?}", s.horiz as f64),
            format!("    Start node: {:?}", if s.is_root() { 1.0 } else { 0.0 }),
            format!(
                "    Acc gain: {:?}",
                s.parent.map_or(-1.0, |p| s.acc - p.acc)
            ),
            format!(
                "    Parent Refinements: {:?}",
                s.parent.map_or(0, |p| p.refin) as f64
            ),
            format!("    Refinements: {:?}", s.refin as f64),
            format!("    score: {score:?}"),
        ];
        for l in lines {
            self.log(l);
        }
    }

    fn attach(
        &mut self,
        t: usize,
        parent: usize,
        expr: ClassExpression,
        eval: Evaluation,
        origin: NodeOrigin,
        generated_at: usize,
    ) {
        let label = match origin {
            NodeOrigin::Pool => format!("({expr})"),
            _ => expr.render(),
        };
        self.log(format!("Selected refinement: {label} acc: {:?}", eval.accuracy));
        self.refinement_count += 1;
        let tree = &mut self.trees[t];
        let idx = tree.nodes.len();
        tree.seen.insert(expr.canonical_form());
        tree.nodes[parent].children.push(idx);
        let len = expr.length();
        let tb = &tree.nodes[tree.best];
        if better(&eval, len, &tb.eval, tb.expr.length()) {
            tree.best = idx;
        }
        tree.nodes.push(SearchNode {
            horiz: len,
            rendered: expr.render(),
            expr: expr.clone(),
            eval,
            children: Vec::new(),
            parent: Some(parent),
            tree_id: tree.tree_id,
            origin,
            generated_at,
        });
        self.offer_best(&expr, eval);
        self.log(format!("Added node: {label}"));
    }

    /// One selection/expansion of tree `t`. Returns false when the tree has
    /// no expandable node left.
    fn step(&mut self, t: usize) -> Result<bool, SearchError> {
        let Some((idx, score)) = self.select(t)? else {
            return Ok(false);
        };
        self.log_score(t, idx, score);
        let (expr, horiz, acc) = {
            let n = &self.trees[t].nodes[idx];
            (n.expr.clone(), n.horiz, n.eval.accuracy)
        };
        let root = self.trees[t].root().rendered.clone();
        self.log(format!("CURRENT TREE WITH ROOT: {root}"));
        self.log(format!("Current node: {expr}, accuracy: {acc:?}"));
        self.log(format!("Horizontal Expansion: {horiz}"));

        let fm = self.algorithm == Algorithm::Fm;
        if fm {
            let others: Vec<ClassExpression> = self
                .trees
                .iter()
                .filter(|o| o.tree_id != t)
                .map(|o| o.best().expr.clone())
                .collect();
            let added = maybe_share_conjunction(&expr, &others, &mut self.pool, self.params.max_length);
            let shown: Vec<String> = added.iter().map(|e| format!("({e})")).collect();
            self.log(format!("REF added from conj: {}", shown.join(", ")));
        }

        let refinements = self.op.refine_down(&expr, horiz);
        self.trees[t].nodes[idx].horiz += 1;
        // The trace lists every refinement that is not too weak, including
        // ones equivalent to nodes already in the tree; those are skipped
        // when attaching.
        let mut listed = Vec::new();
        for r in refinements {
            let eval = self.evaluate(&r)?;
            if !self.too_weak(&eval) {
                listed.push((r, eval));
            }
        }
        self.log(format!(
            "Refinements for node {expr}: {}",
            fmt_list(listed.iter().map(|(r, _)| r))
        ));
        let fresh = listed;

        let mut quota = if fm {
            self.params.max_nodes_added_per_tree
        } else {
            usize::MAX
        };
        if fm {
            while quota > 0 && self.trees[t].pool_cursor < self.pool.len() {
                if self.should_stop() {
                    return Ok(true);
                }
                let entry = self.pool.entries()[self.trees[t].pool_cursor].clone();
                self.trees[t].pool_cursor += 1;
                if self.trees[t].seen.contains(&entry.canonical_form()) {
                    continue;
                }
                let eval = self.evaluate(&entry)?;
                if self.too_weak(&eval) {
                    continue;
                }
                self.attach(t, idx, entry, eval, NodeOrigin::Pool, horiz);
                quota -= 1;
            }
        }
        for (r, eval) in fresh {
            if quota == 0 || self.should_stop() {
                break;
            }
            if self.trees[t].seen.contains(&r.canonical_form()) {
                continue;
            }
            self.attach(t, idx, r, eval, NodeOrigin::Refinement, horiz);
            quota -= 1;
        }
        Ok(true)
    }

    pub fn run(&mut self) -> Result<RunReport, SearchError> {
        self.started = Instant::now();
        self.plant_roots()?;
        'outer: loop {
            let mut expanded = false;
            for t in 0..self.trees.len() {
                if self.should_stop() {
                    break 'outer;
                }
                expanded |= self.step(t)?;
            }
            if !expanded {
                break;
            }
        }
        let best = self.best.as_ref().expect("at least one root is planted");
        Ok(RunReport {
            algorithm: self.algorithm,
            best_expr: best.expr.clone(),
            accuracy: best.eval.accuracy,
            f1: best.eval.f1,
            refinement_count: self.refinement_count,
            best_found_at: self.best_found_at,
            elapsed_ms: self.elapsed_ms(),
            nb_trees: self.trees.len(),
            seed: self.params.seed,
            trace: self.params.trace.then(|| self.trace.clone()),
        })
    }
}

/// Single-tree search from `params.start_classes[0]`, or ⊤.
pub fn run_celoe(o: &Ontology, lp: &LearningProblem, params: &FmParams) -> Result<RunReport, SearchError> {
    Search::new(o, lp, Algorithm::Celoe, params.clone())?.run()
}

/// Forest-mixing search over `params.start_classes`, or over the start
/// classes found by [`find_starting_classes`].
pub fn run_fm(o: &Ontology, lp: &LearningProblem, params: &FmParams) -> Result<RunReport, SearchError> {
    Search::new(o, lp, Algorithm::Fm, params.clone())?.run()
}
