//! Depth-first search over depot-rooted simple paths.

use std::cmp::Ordering;

use super::{recourse_policy, Evaluator, RobustSolution};
use crate::error::{Error, Result};
use crate::instance::{Instance, WeightModel, DEPOT};
use crate::matrix::SquareMatrix;
use crate::models::ModelKind;
use crate::recourse::{Path, Policy, RecourseContext};

pub const DEFAULT_NODE_LIMIT: u64 = 10_000_000;

/// Largest instance [`exhaustive_search`] accepts, depot included.
const EXHAUSTIVE_MAX_NODES: usize = 11;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Paths evaluated before the search gives up.
    pub max_nodes: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self { max_nodes: DEFAULT_NODE_LIMIT }
    }
}

/// Cheapest arc into each node; any set of new nodes costs at least the sum
/// of their entries.
fn min_entry(weights: &SquareMatrix) -> Vec<f64> {
    let n = weights.dim();
    (0..n).map(|j| (0..n).filter(|&i| i != j).map(|i| weights.get(i, j)).fold(f64::INFINITY, f64::min)).collect()
}

/// Fractional knapsack over the unvisited customers.
fn knapsack(scores: &[f64], entry: &[f64], visited: &[bool], budget: f64) -> f64 {
    if budget < 0.0 {
        return 0.0;
    }
    let mut items: Vec<(f64, f64)> =
        (1..scores.len()).filter(|&j| !visited[j] && scores[j] > 0.0).map(|j| (scores[j], entry[j].max(0.0))).collect();
    // best ratio first: a before b iff s_a / w_a > s_b / w_b
    items.sort_by(|a, b| (b.0 * a.1).partial_cmp(&(a.0 * b.1)).unwrap_or(Ordering::Equal));
    let mut left = budget;
    let mut total = 0.0;
    for (score, weight) in items {
        if weight <= left {
            total += score;
            left -= weight;
        } else {
            total += score * left / weight;
            break;
        }
    }
    total
}

struct State<'a> {
    eval: &'a Evaluator<'a>,
    limit: f64,
    order: Vec<usize>,
    entry_first: Vec<f64>,
    entry_worst: Option<Vec<f64>>,
    policy: Option<Policy>,
    ctx: Option<RecourseContext<'a>>,
    max_nodes: u64,
    nodes: u64,
    exhausted: bool,
    best: f64,
    best_path: Vec<usize>,
    stack: Vec<usize>,
    visited: Vec<bool>,
}

impl State<'_> {
    fn consider(&mut self, path: &Path) {
        if !self.eval.is_feasible(path) {
            return;
        }
        let value = self.eval.evaluate_unchecked(path);
        if value > self.best || (value == self.best && path.nodes() < self.best_path.as_slice()) {
            self.best = value;
            self.best_path = path.nodes().to_vec();
        }
    }

    /// Upper bound on every extension of the current stack (itself excluded).
    fn bound(&self, path: &Path, score: f64, prefix_first: f64, prefix_worst: f64) -> f64 {
        let scores = self.eval.scores();
        let mut ub = score + knapsack(scores, &self.entry_first, &self.visited, self.limit - prefix_first);
        if let (Some(policy), Some(ctx), Some(entry), Some(worst)) =
            (self.policy, self.ctx.as_ref(), self.entry_worst.as_ref(), self.eval.worst_case())
        {
            let outcome = ctx.evaluate(policy, path, worst);
            let kept = score - outcome.loss;
            let grow = score + knapsack(scores, entry, &self.visited, self.limit - prefix_worst);
            let reach = match policy {
                // once aborted, later nodes are never reached
                Policy::Sequential if outcome.last_reached < path.len() => kept,
                Policy::Sequential => grow,
                Policy::Concurrent if prefix_worst > self.limit => kept,
                Policy::Concurrent => kept.max(grow),
            };
            ub = ub.min(reach);
        }
        ub
    }

    fn dfs(&mut self, score: f64, prefix_first: f64, prefix_worst: f64) {
        let path = Path::from_vec_unchecked(self.stack.clone());
        if !path.is_empty() {
            self.consider(&path);
        }
        let ub = self.bound(&path, score, prefix_first, prefix_worst);
        let tol = 1e-9 * self.best.abs().max(1.0);
        if ub < self.best - tol || (ub <= self.best && self.best_path.as_slice() < path.nodes()) {
            return;
        }
        let last = self.stack.last().copied().unwrap_or(DEPOT);
        for idx in 0..self.order.len() {
            let next = self.order[idx];
            if self.visited[next] {
                continue;
            }
            let open = prefix_first + self.eval.first_stage_weights().get(last, next);
            if open > self.limit {
                continue;
            }
            if self.nodes >= self.max_nodes {
                self.exhausted = true;
                return;
            }
            self.nodes += 1;
            let worst = self.eval.worst_case().map_or(0.0, |w| prefix_worst + w.get(last, next));
            self.visited[next] = true;
            self.stack.push(next);
            self.dfs(score + self.eval.scores()[next], open, worst);
            self.stack.pop();
            self.visited[next] = false;
            if self.exhausted {
                return;
            }
        }
    }
}

/// Best first-stage path for `kind`. Ties go to the lexicographically
/// smallest node sequence; `optimal` is false when `limits` stopped the search.
pub fn branch_and_bound(inst: &Instance, w: &WeightModel, kind: ModelKind, limits: SearchLimits) -> Result<RobustSolution> {
    let eval = Evaluator::new(inst, w, kind)?;
    let scores = eval.scores().to_vec();
    if eval.first_stage_weights().rows().iter().flatten().any(|&d| d < 0.0) {
        return Err(Error::Unsupported("path search needs nonnegative first-stage weights".into()));
    }
    let mut order: Vec<usize> = (1..inst.len()).collect();
    order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).unwrap_or(Ordering::Equal).then(a.cmp(&b)));
    let policy = recourse_policy(kind);
    let mut state = State {
        eval: &eval,
        limit: inst.length_limit(),
        order,
        entry_first: min_entry(eval.first_stage_weights()),
        entry_worst: eval.worst_case().filter(|_| policy.is_some()).map(min_entry),
        policy,
        ctx: policy.map(|_| RecourseContext::new(eval.scores(), w.dbar(), inst.length_limit())),
        max_nodes: limits.max_nodes,
        nodes: 0,
        exhausted: false,
        best: 0.0,
        best_path: Vec::new(),
        stack: Vec::new(),
        visited: vec![false; inst.len()],
    };
    state.dfs(0.0, 0.0, 0.0);
    Ok(RobustSolution {
        path: Path::from_vec_unchecked(state.best_path),
        kind,
        objective: state.best,
        optimal: !state.exhausted,
        nodes_explored: state.nodes,
    })
}

/// Calls `visit` on every simple path over customers `1..n`, the empty path first.
pub fn for_each_path(n: usize, mut visit: impl FnMut(&Path)) {
    fn rec(n: usize, stack: &mut Vec<usize>, used: &mut [bool], visit: &mut dyn FnMut(&Path)) {
        visit(&Path::from_vec_unchecked(stack.clone()));
        for v in 1..n {
            if !used[v] {
                used[v] = true;
                stack.push(v);
                rec(n, stack, used, visit);
                stack.pop();
                used[v] = false;
            }
        }
    }
    rec(n, &mut Vec::new(), &mut vec![false; n.max(1)], &mut visit);
}

/// Scores every simple path; the independent reference for [`branch_and_bound`].
pub fn exhaustive_search(inst: &Instance, w: &WeightModel, kind: ModelKind) -> Result<RobustSolution> {
    if inst.len() > EXHAUSTIVE_MAX_NODES {
        return Err(Error::Capacity { found: inst.len(), limit: EXHAUSTIVE_MAX_NODES });
    }
    let eval = Evaluator::new(inst, w, kind)?;
    let mut best = (f64::NEG_INFINITY, Path::empty());
    let mut count = 0u64;
    for_each_path(inst.len(), |path| {
        count += 1;
        if let Ok(value) = eval.evaluate(path) {
            if value > best.0 || (value == best.0 && path < &best.1) {
                best = (value, path.clone());
            }
        }
    });
    Ok(RobustSolution { path: best.1, kind, objective: best.0, optimal: true, nodes_explored: count })
}
