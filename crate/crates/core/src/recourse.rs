//! Second-stage abort-and-return recourse.
//!
//! A first-stage path `(v0, v1, ..., vn, v0)` is executed under realized arc
//! weights. When continuing would break the length budget the vehicle returns
//! straight to the depot. Return legs are always costed at their expected
//! weight `dbar[vk][0]`; the deviation on the way home is covered by a safety
//! stock outside the budget.
//!
//! * [`RecourseContext::sequential`] reveals weights one arc ahead and aborts
//!   at the first node whose prefix plus return no longer fits (forward check).
//! * [`RecourseContext::concurrent`] reveals every weight at departure and keeps
//!   the longest prefix that fits (backward check).
//!
//! [`RecourseContext::step_executor`] and [`RecourseContext::brute_force_cut`]
//! are definitional oracles for the two scans.

use std::fmt;

use crate::error::{Error, Result};
use crate::instance::DEPOT;
use crate::matrix::SquareMatrix;

/// Ordered non-depot nodes of a depot-rooted closed path. May be empty.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path(Vec<usize>);

impl Path {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Validates node ids against an instance of `node_count` nodes.
    pub fn new(nodes: Vec<usize>, node_count: usize) -> Result<Self> {
        let mut seen = vec![false; node_count];
        for &v in &nodes {
            if v == DEPOT {
                return Err(Error::Domain("the depot cannot appear inside a path".into()));
            }
            if v >= node_count {
                return Err(Error::Domain(format!("node {v} does not exist ({node_count} nodes)")));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::Domain(format!("node {v} is visited twice")));
            }
        }
        Ok(Self(nodes))
    }

    /// Wraps a sequence the caller already knows to be valid.
    pub(crate) fn from_vec_unchecked(nodes: Vec<usize>) -> Self {
        Self(nodes)
    }

    pub fn nodes(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `v0, v1, ..., vn, v0`.
    pub fn closed_walk(&self) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(DEPOT).chain(self.0.iter().copied()).chain(std::iter::once(DEPOT))
    }

    /// Arcs `(v0,v1), ..., (vn,v0)`; none for the empty path.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        if self.0.is_empty() {
            return Vec::new();
        }
        let walk: Vec<usize> = self.closed_walk().collect();
        walk.windows(2).map(|w| (w[0], w[1])).collect()
    }

    /// Closed length under `weights`, summed along the walk.
    pub fn closed_length(&self, weights: &SquareMatrix) -> f64 {
        if self.0.is_empty() {
            0.0
        } else {
            weights.walk_length(self.closed_walk())
        }
    }

    pub fn score(&self, scores: &[f64]) -> f64 {
        self.0.iter().map(|&v| scores[v]).fold(0.0, |acc, s| acc + s)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0")?;
        for v in &self.0 {
            write!(f, "-{v}")?;
        }
        write!(f, "-0")
    }
}

/// Result of a recourse evaluation. `last_reached` counts path positions, 0 = depot only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecourseOutcome {
    pub last_reached: usize,
    pub loss: f64,
}

impl RecourseOutcome {
    pub fn objective(&self) -> f64 {
        -self.loss
    }
}

/// Which realization the recourse reacts to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Policy {
    Sequential,
    Concurrent,
}

impl Policy {
    pub const ALL: [Policy; 2] = [Policy::Sequential, Policy::Concurrent];

    pub fn name(self) -> &'static str {
        match self {
            Policy::Sequential => "sequential",
            Policy::Concurrent => "concurrent",
        }
    }
}

/// Scores, expected weights and budget shared by every recourse evaluation.
#[derive(Debug, Clone, Copy)]
pub struct RecourseContext<'a> {
    pub scores: &'a [f64],
    pub dbar: &'a SquareMatrix,
    pub length_limit: f64,
}

impl<'a> RecourseContext<'a> {
    pub fn new(scores: &'a [f64], dbar: &'a SquareMatrix, length_limit: f64) -> Self {
        Self { scores, dbar, length_limit }
    }

    pub fn evaluate(&self, policy: Policy, path: &Path, realized: &SquareMatrix) -> RecourseOutcome {
        match policy {
            Policy::Sequential => self.sequential(path, realized),
            Policy::Concurrent => self.concurrent(path, realized),
        }
    }

    fn suffix_loss(&self, path: &Path, keep: usize) -> f64 {
        path.nodes()[keep..].iter().map(|&v| self.scores[v]).fold(0.0, |acc, s| acc + s)
    }

    /// Forward check: abort before the first position whose realized prefix
    /// plus expected return exceeds the budget.
    pub fn sequential(&self, path: &Path, realized: &SquareMatrix) -> RecourseOutcome {
        let mut prefix = 0.0;
        let mut prev = DEPOT;
        for (k, &v) in path.nodes().iter().enumerate() {
            prefix += realized.get(prev, v);
            if prefix + self.dbar.get(v, DEPOT) > self.length_limit {
                return RecourseOutcome { last_reached: k, loss: self.suffix_loss(path, k) };
            }
            prev = v;
        }
        RecourseOutcome { last_reached: path.len(), loss: 0.0 }
    }

    /// Backward check: keep the largest prefix whose realized length plus
    /// expected return fits. Cancelling everything is always possible.
    pub fn concurrent(&self, path: &Path, realized: &SquareMatrix) -> RecourseOutcome {
        let nodes = path.nodes();
        let mut prefix = Vec::with_capacity(nodes.len());
        let mut acc = 0.0;
        let mut prev = DEPOT;
        for &v in nodes {
            acc += realized.get(prev, v);
            prefix.push(acc);
            prev = v;
        }
        for k in (1..=nodes.len()).rev() {
            let v = nodes[k - 1];
            if prefix[k - 1] + self.dbar.get(v, DEPOT) <= self.length_limit {
                return RecourseOutcome { last_reached: k, loss: self.suffix_loss(path, k) };
            }
        }
        RecourseOutcome { last_reached: 0, loss: self.suffix_loss(path, 0) }
    }

    /// Every cut position `k` with its own length evaluation; the feasible cut
    /// with the smallest loss wins, later cuts breaking ties.
    pub fn brute_force_cut(&self, path: &Path, realized: &SquareMatrix) -> RecourseOutcome {
        let nodes = path.nodes();
        let mut best = RecourseOutcome { last_reached: 0, loss: self.suffix_loss(path, 0) };
        for k in 1..=nodes.len() {
            let length = realized.walk_length(std::iter::once(DEPOT).chain(nodes[..k].iter().copied()))
                + self.dbar.get(nodes[k - 1], DEPOT);
            if length > self.length_limit {
                continue;
            }
            let loss = self.suffix_loss(path, k);
            if loss <= best.loss {
                best = RecourseOutcome { last_reached: k, loss };
            }
        }
        best
    }

    /// Drives the path move by move, checking the next hop plus its expected
    /// return against the remaining budget before committing to it.
    pub fn step_executor(&self, path: &Path, realized: &SquareMatrix) -> RecourseOutcome {
        let mut consumed = 0.0;
        let mut position = DEPOT;
        let mut reached = 0;
        for &next in path.nodes() {
            let hop = realized.get(position, next);
            if consumed + hop + self.dbar.get(next, DEPOT) > self.length_limit {
                break;
            }
            consumed += hop;
            position = next;
            reached += 1;
        }
        let lost: f64 = path.nodes().iter().skip(reached).map(|&v| self.scores[v]).fold(0.0, |acc, s| acc + s);
        RecourseOutcome { last_reached: reached, loss: lost }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // depot (0,0), v1 = (10,0) score 10, v2 = (3,0) score 5
    fn toy() -> (Vec<f64>, SquareMatrix) {
        let pts = [(0.0f64, 0.0f64), (10.0, 0.0), (3.0, 0.0)];
        let dbar = SquareMatrix::from_fn(3, |i, j| (pts[i].0 - pts[j].0).hypot(pts[i].1 - pts[j].1));
        (vec![0.0, 10.0, 5.0], dbar)
    }

    fn realized(dbar: &SquareMatrix, d01: f64, d12: f64) -> SquareMatrix {
        let mut d = dbar.clone();
        d.set(0, 1, d01);
        d.set(1, 0, d01);
        d.set(1, 2, d12);
        d.set(2, 1, d12);
        d
    }

    #[test]
    fn sequential_aborts_at_first_violation() {
        let (scores, dbar) = toy();
        let ctx = RecourseContext::new(&scores, &dbar, 20.0);
        let path = Path::new(vec![1, 2], 3).unwrap();
        let out = ctx.sequential(&path, &realized(&dbar, 11.0, 7.0));
        assert_eq!(out, RecourseOutcome { last_reached: 0, loss: 15.0 });
        assert_eq!(out.objective(), -15.0);
        assert_eq!(ctx.step_executor(&path, &realized(&dbar, 11.0, 7.0)), out);
    }

    #[test]
    fn concurrent_examples() {
        let (scores, dbar) = toy();
        let ctx = RecourseContext::new(&scores, &dbar, 20.0);
        let path = Path::new(vec![1, 2], 3).unwrap();

        let d = realized(&dbar, 11.0, 7.0);
        assert_eq!(ctx.concurrent(&path, &d), RecourseOutcome { last_reached: 0, loss: 15.0 });
        assert_eq!(ctx.brute_force_cut(&path, &d), ctx.concurrent(&path, &d));

        // ties count as feasible
        let d = realized(&dbar, 10.0, 7.0);
        assert_eq!(ctx.concurrent(&path, &d).loss, 0.0);
        assert_eq!(ctx.sequential(&path, &d).loss, 0.0);

        // concurrent sees the cheap second hop, sequential does not
        let d = realized(&dbar, 10.5, 6.0);
        assert_eq!(ctx.sequential(&path, &d).loss, 15.0);
        assert_eq!(ctx.concurrent(&path, &d), RecourseOutcome { last_reached: 2, loss: 0.0 });
        assert_eq!(ctx.brute_force_cut(&path, &d), ctx.concurrent(&path, &d));
    }

    #[test]
    fn empty_path_loses_nothing() {
        let (scores, dbar) = toy();
        let ctx = RecourseContext::new(&scores, &dbar, 1.0);
        let empty = Path::empty();
        for policy in Policy::ALL {
            assert_eq!(ctx.evaluate(policy, &empty, &dbar), RecourseOutcome { last_reached: 0, loss: 0.0 });
        }
        assert_eq!(ctx.brute_force_cut(&empty, &dbar).loss, 0.0);
        assert_eq!(ctx.step_executor(&empty, &dbar).loss, 0.0);
    }

    #[test]
    fn single_node_paths() {
        let (scores, dbar) = toy();
        let path = Path::new(vec![1], 3).unwrap();
        let fits = RecourseContext::new(&scores, &dbar, 20.0);
        assert_eq!(fits.brute_force_cut(&path, &dbar).loss, 0.0);
        assert_eq!(fits.concurrent(&path, &dbar).loss, 0.0);
        // the lone node is unreachable: the whole path score is lost
        let tight = RecourseContext::new(&scores, &dbar, 19.0);
        assert_eq!(tight.brute_force_cut(&path, &dbar), RecourseOutcome { last_reached: 0, loss: 10.0 });
        assert_eq!(tight.concurrent(&path, &dbar), RecourseOutcome { last_reached: 0, loss: 10.0 });
        assert_eq!(tight.sequential(&path, &dbar), RecourseOutcome { last_reached: 0, loss: 10.0 });
    }

    #[test]
    fn first_move_violation_loses_everything() {
        let (scores, dbar) = toy();
        let ctx = RecourseContext::new(&scores, &dbar, 5.0);
        let path = Path::new(vec![1, 2], 3).unwrap();
        assert_eq!(ctx.step_executor(&path, &dbar).loss, 15.0);
    }

    #[test]
    fn zero_scores_never_lose() {
        let (_, dbar) = toy();
        let scores = vec![0.0; 3];
        let ctx = RecourseContext::new(&scores, &dbar, 1.0);
        let path = Path::new(vec![2, 1], 3).unwrap();
        assert_eq!(ctx.step_executor(&path, &dbar).loss, 0.0);
        assert_eq!(ctx.sequential(&path, &dbar).loss, 0.0);
        assert_eq!(ctx.concurrent(&path, &dbar).loss, 0.0);
    }

    #[test]
    fn optimistic_weights_on_robust_path_lose_nothing() {
        let (scores, dbar) = toy();
        let ctx = RecourseContext::new(&scores, &dbar, 24.0);
        let path = Path::new(vec![1, 2], 3).unwrap();
        // worst case 1.2 * 20 = 24 fits, so every prefix fits at 0.8 * dbar
        let low = dbar.map(|d| 0.8 * d);
        assert_eq!(ctx.sequential(&path, &low).loss, 0.0);
        assert_eq!(ctx.concurrent(&path, &low).loss, 0.0);
    }

    #[test]
    fn path_validation() {
        assert!(Path::new(vec![0], 3).is_err());
        assert!(Path::new(vec![1, 1], 3).is_err());
        assert!(Path::new(vec![3], 3).is_err());
        let p = Path::new(vec![2, 1], 3).unwrap();
        assert_eq!(p.arcs(), vec![(0, 2), (2, 1), (1, 0)]);
        assert_eq!(p.to_string(), "0-2-1-0");
        assert!(Path::empty().arcs().is_empty());
    }
}
