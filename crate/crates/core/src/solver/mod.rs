//! Exact desk-scale solvers.
//!
//! [`branch_and_bound`] searches first-stage paths directly and scores each
//! with [`evaluate_objective`]. The two-stage objective is the recourse value
//! at `dbar + theta * dhat`: both recourse scans lose more as weights grow, so
//! the minimum over the box sits at its maximum. The static models have the
//! same optimal value and are scored the same way here; [`MilpEnumerator`]
//! solves their MILPs independently for cross-checks.

mod milp;
mod search;

use std::fmt;
use std::str::FromStr;

pub use milp::{enumerate_milp, MilpEnumerator, MilpOutcome, DEFAULT_MAX_BINARIES};
pub use search::{branch_and_bound, exhaustive_search, for_each_path, SearchLimits, DEFAULT_NODE_LIMIT};

use crate::error::{Error, Result};
use crate::instance::{Instance, WeightModel};
use crate::matrix::SquareMatrix;
use crate::models::ModelKind;
use crate::recourse::{Path, Policy, RecourseContext};
use crate::uncertainty::{optimistic_weights, worst_case_weights, BoxUncertainty};

/// Which first-stage length row a kind imposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FirstStage {
    /// `dbar`
    Expected,
    /// `dbar + theta * dhat`
    Robust,
    /// `dbar - dhat`
    Optimistic,
}

impl FirstStage {
    pub fn for_kind(kind: ModelKind) -> Result<Self> {
        match kind {
            ModelKind::Dop => Ok(FirstStage::Expected),
            ModelKind::OneStageRo { .. } => Ok(FirstStage::Robust),
            ModelKind::StaticSequential { .. }
            | ModelKind::StaticConcurrent { .. }
            | ModelKind::TwoStageSequential { .. }
            | ModelKind::TwoStageConcurrent { .. } => Ok(FirstStage::Optimistic),
            ModelKind::RecourseSequential | ModelKind::RecourseConcurrent => {
                Err(Error::Unsupported(format!("`{}` has no first stage", kind.tag())))
            }
        }
    }

    fn row_name(self) -> &'static str {
        match self {
            FirstStage::Expected | FirstStage::Robust => "length",
            FirstStage::Optimistic => "optimistic_length",
        }
    }
}

/// The recourse a kind prices into its objective, if any.
pub fn recourse_policy(kind: ModelKind) -> Option<Policy> {
    match kind {
        ModelKind::StaticSequential { .. } | ModelKind::TwoStageSequential { .. } => Some(Policy::Sequential),
        ModelKind::StaticConcurrent { .. } | ModelKind::TwoStageConcurrent { .. } => Some(Policy::Concurrent),
        _ => None,
    }
}

/// Precomputed weights for scoring many paths of one `(instance, kind)`.
#[derive(Debug, Clone)]
pub struct Evaluator<'a> {
    inst: &'a Instance,
    w: &'a WeightModel,
    kind: ModelKind,
    stage: FirstStage,
    first_stage: SquareMatrix,
    worst_case: Option<SquareMatrix>,
    scores: Vec<f64>,
}

impl<'a> Evaluator<'a> {
    pub fn new(inst: &'a Instance, w: &'a WeightModel, kind: ModelKind) -> Result<Self> {
        if w.dim() != inst.len() {
            return Err(Error::Domain(format!("weights are {0}x{0} for {1} nodes", w.dim(), inst.len())));
        }
        let stage = FirstStage::for_kind(kind)?;
        let worst_case = match kind.theta() {
            Some(theta) => Some(worst_case_weights(&BoxUncertainty::new(w, theta)?).d),
            None => None,
        };
        let first_stage = match stage {
            FirstStage::Expected => w.dbar().clone(),
            FirstStage::Robust => worst_case.clone().expect("robust kinds carry theta"),
            FirstStage::Optimistic => optimistic_weights(w).d,
        };
        Ok(Self { inst, w, kind, stage, first_stage, worst_case, scores: inst.scores() })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    /// Weights of the first-stage length row.
    pub fn first_stage_weights(&self) -> &SquareMatrix {
        &self.first_stage
    }

    /// `dbar + theta * dhat` for robust kinds.
    pub fn worst_case(&self) -> Option<&SquareMatrix> {
        self.worst_case.as_ref()
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn is_feasible(&self, path: &Path) -> bool {
        path.closed_length(&self.first_stage) <= self.inst.length_limit()
    }

    /// Objective of a first-stage feasible path.
    pub fn evaluate(&self, path: &Path) -> Result<f64> {
        let length = path.closed_length(&self.first_stage);
        if length > self.inst.length_limit() {
            return Err(Error::Feasibility(format!(
                "{path} has length {length} > {} in row `{}`",
                self.inst.length_limit(),
                self.stage.row_name()
            )));
        }
        Ok(self.evaluate_unchecked(path))
    }

    pub(crate) fn evaluate_unchecked(&self, path: &Path) -> f64 {
        let score = path.score(&self.scores);
        match recourse_policy(self.kind) {
            Some(policy) => {
                let ctx = RecourseContext::new(&self.scores, self.w.dbar(), self.inst.length_limit());
                let realized = self.worst_case.as_ref().expect("recourse kinds carry theta");
                score - ctx.evaluate(policy, path, realized).loss
            }
            None => score,
        }
    }
}

/// Objective of `path` under `kind`; fails if the path breaks the kind's
/// first-stage length row.
pub fn evaluate_objective(inst: &Instance, w: &WeightModel, path: &Path, kind: ModelKind) -> Result<f64> {
    Evaluator::new(inst, w, kind)?.evaluate(path)
}

/// Outcome of a path search.
#[derive(Debug, Clone, PartialEq)]
pub struct RobustSolution {
    pub path: Path,
    pub kind: ModelKind,
    pub objective: f64,
    pub optimal: bool,
    pub nodes_explored: u64,
}

impl RobustSolution {
    /// `key = value` lines, one per field.
    pub fn to_record(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for RobustSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "kind = {}", self.kind.tag())?;
        match self.kind.theta() {
            Some(theta) => writeln!(f, "theta = {theta}")?,
            None => writeln!(f, "theta = none")?,
        }
        if let ModelKind::StaticSequential { relaxed: true, .. } = self.kind {
            writeln!(f, "relaxed = true")?;
        }
        writeln!(f, "objective = {}", self.objective)?;
        writeln!(f, "optimal = {}", self.optimal)?;
        writeln!(f, "nodes_explored = {}", self.nodes_explored)?;
        writeln!(f, "path = {}", self.path)
    }
}

impl FromStr for RobustSolution {
    type Err = Error;

    /// Reads a record written by [`RobustSolution::to_record`]. Unknown keys are ignored.
    fn from_str(text: &str) -> Result<Self> {
        let mut fields = std::collections::HashMap::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse { line: k + 1, message: format!("expected `key = value`, found {line:?}") })?;
            fields.insert(key.trim().to_string(), value.trim().to_string());
        }
        let get = |key: &str| fields.get(key).ok_or_else(|| Error::Format(format!("solution record lacks `{key}`")));
        let bad = |key: &str| Error::Format(format!("bad `{key}` in solution record"));
        let theta = match get("theta")?.as_str() {
            "none" => None,
            t => Some(t.parse().map_err(|_| bad("theta"))?),
        };
        let relaxed = fields.get("relaxed").is_some_and(|r| r == "true");
        let kind = ModelKind::from_tag(get("kind")?, theta, relaxed)?;
        Ok(RobustSolution {
            path: parse_path(get("path")?)?,
            kind,
            objective: get("objective")?.parse().map_err(|_| bad("objective"))?,
            optimal: get("optimal")?.parse().map_err(|_| bad("optimal"))?,
            nodes_explored: get("nodes_explored")?.parse().map_err(|_| bad("nodes_explored"))?,
        })
    }
}

/// Parses `0-3-1-0` (or `0-0` for the empty path). Node ids are not checked
/// against an instance.
pub fn parse_path(text: &str) -> Result<Path> {
    let ids: Vec<usize> = text
        .split('-')
        .map(|t| t.trim().parse().map_err(|_| Error::Format(format!("bad node id {t:?} in path {text:?}"))))
        .collect::<Result<_>>()?;
    match ids.as_slice() {
        [0, inner @ .., 0] if ids.len() >= 2 => {
            let count = inner.iter().max().map_or(1, |&m| m + 1);
            Path::new(inner.to_vec(), count)
        }
        _ => Err(Error::Format(format!("path {text:?} must start and end at the depot"))),
    }
}

/// Rebuilds a path from its arc set, which must be empty or a single cycle
/// through the depot.
pub fn path_from_arcs(arcs: &[(usize, usize)], node_count: usize) -> Result<Path> {
    if arcs.is_empty() {
        return Ok(Path::empty());
    }
    let mut next = vec![None; node_count];
    let mut indegree = vec![0usize; node_count];
    for &(i, j) in arcs {
        if i >= node_count || j >= node_count {
            return Err(Error::Domain(format!("arc ({i},{j}) leaves the {node_count}-node instance")));
        }
        if i == j {
            return Err(Error::Domain(format!("self-loop at node {i}")));
        }
        if next[i].replace(j).is_some() {
            return Err(Error::Domain(format!("node {i} has more than one outgoing arc")));
        }
        indegree[j] += 1;
        if indegree[j] > 1 {
            return Err(Error::Domain(format!("node {j} has more than one incoming arc")));
        }
    }
    let mut nodes = Vec::new();
    let mut at = next[crate::instance::DEPOT].ok_or_else(|| Error::Domain("no arc leaves the depot".into()))?;
    while at != crate::instance::DEPOT {
        nodes.push(at);
        if nodes.len() > arcs.len() {
            return Err(Error::Domain("arcs loop without returning to the depot".into()));
        }
        at = next[at].ok_or_else(|| Error::Domain(format!("the path stops at node {at}")))?;
    }
    if nodes.len() + 1 != arcs.len() {
        let on_path: std::collections::HashSet<usize> = nodes.iter().copied().collect();
        let stray: Vec<String> = arcs
            .iter()
            .filter(|(i, _)| *i != crate::instance::DEPOT && !on_path.contains(i))
            .map(|(i, j)| format!("({i},{j})"))
            .collect();
        return Err(Error::Domain(format!("arcs {} are disconnected from the depot cycle", stray.join(" "))));
    }
    Path::new(nodes, node_count)
}

/// Arcs `x_i_j` set to one in a solver's output.
///
/// Accepts `name value` or `name = value` lines and XML-style
/// `<variable name="x_0_3" ... value="1"/>` entries; other variables,
/// comments (`#`, `\`) and unrecognized lines are ignored. Values above 0.5
/// count as one.
pub fn read_arc_assignment(text: &str) -> Result<Vec<(usize, usize)>> {
    fn attribute<'t>(line: &'t str, key: &str) -> Option<&'t str> {
        let start = line.find(&format!("{key}=\""))? + key.len() + 2;
        line[start..].split('"').next()
    }
    let mut arcs = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('\\') {
            continue;
        }
        let (name, value) = if line.starts_with('<') {
            match (attribute(line, "name"), attribute(line, "value")) {
                (Some(n), Some(v)) => (n, v),
                _ => continue,
            }
        } else {
            let mut parts = line.split(|c: char| c.is_whitespace() || c == '=').filter(|t| !t.is_empty());
            match (parts.next(), parts.next()) {
                (Some(n), Some(v)) => (n, v),
                _ => continue,
            }
        };
        let Some(rest) = name.strip_prefix("x_") else { continue };
        let bad = || Error::Parse { line: k + 1, message: format!("bad arc variable {name:?}") };
        let (i, j) = rest.split_once('_').ok_or_else(bad)?;
        let (i, j): (usize, usize) = (i.parse().map_err(|_| bad())?, j.parse().map_err(|_| bad())?);
        let value: f64 = value
            .parse()
            .map_err(|_| Error::Parse { line: k + 1, message: format!("bad value {value:?} for {name}") })?;
        if value > 0.5 {
            arcs.push((i, j));
        }
    }
    Ok(arcs)
}
