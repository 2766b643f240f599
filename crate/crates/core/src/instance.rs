//! Orienteering instances and the expected/deviation weight model built on top of them.
//!
//! Plain-text instances use the Tsiligirides layout: whitespace separated
//! `x y score` triples, one node per line. The first line is the start point
//! (kept as the depot), the second the end point (dropped), and the rest are
//! the scoring nodes in file order. `#` comments and blank lines are skipped,
//! and a leading two-field `budget paths` header, as found in the circulated
//! benchmark files, is ignored.
//!
//! Instances can also be stored as JSON:
//!
//! ```json
//! {
//!   "length_limit": 20.0,
//!   "nodes": [ { "x": 0.0, "y": 0.0, "score": 0.0 }, { "x": 10.0, "y": 0.0, "score": 10.0 } ],
//!   "dbar": [[0.0, 10.0], [10.0, 0.0]],
//!   "dhat": [[0.0, 2.0], [2.0, 0.0]]
//! }
//! ```
//!
//! `dbar` and `dhat` are optional; when `dbar` is absent Euclidean distances are
//! used and when `dhat` is absent deviations are zero.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;

/// Node id of the depot.
pub const DEPOT: usize = 0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub x: f64,
    pub y: f64,
    pub score: f64,
}

/// A deterministic orienteering instance. Node 0 is the depot.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    nodes: Vec<Node>,
    length_limit: f64,
    warnings: Vec<String>,
}

impl Instance {
    /// Builds an instance, forcing the depot score to zero (with a warning).
    pub fn new(mut nodes: Vec<Node>, length_limit: f64) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::Domain("an instance needs at least the depot node".into()));
        }
        if !(length_limit > 0.0 && length_limit.is_finite()) {
            return Err(Error::Domain(format!("length limit must be positive and finite, got {length_limit}")));
        }
        for (i, node) in nodes.iter().enumerate() {
            if !(node.x.is_finite() && node.y.is_finite()) {
                return Err(Error::Domain(format!("node {i} has non-finite coordinates")));
            }
            if !(node.score >= 0.0 && node.score.is_finite()) {
                return Err(Error::Domain(format!("node {i} has invalid score {}", node.score)));
            }
        }
        let mut warnings = Vec::new();
        if nodes[DEPOT].score != 0.0 {
            warnings.push(format!("depot score {} replaced by 0", nodes[DEPOT].score));
            nodes[DEPOT].score = 0.0;
        }
        Ok(Self { nodes, length_limit, warnings })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Number of nodes including the depot.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// True when only the depot is present.
    pub fn is_empty(&self) -> bool {
        self.nodes.len() <= 1
    }

    /// Number of scoring (non-depot) nodes.
    pub fn customer_count(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn length_limit(&self) -> f64 {
        self.length_limit
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn scores(&self) -> Vec<f64> {
        self.nodes.iter().map(|n| n.score).collect()
    }

    pub fn total_score(&self) -> f64 {
        self.nodes.iter().map(|n| n.score).sum()
    }

    pub fn with_length_limit(&self, length_limit: f64) -> Result<Self> {
        Self::new(self.nodes.clone(), length_limit)
    }

    /// The depot plus the first `count - 1` scoring nodes.
    pub fn truncated(&self, count: usize) -> Result<Self> {
        if count == 0 || count > self.nodes.len() {
            return Err(Error::Domain(format!("cannot keep {count} of {} nodes", self.nodes.len())));
        }
        Self::new(self.nodes[..count].to_vec(), self.length_limit)
    }

    /// Short stable fingerprint of nodes and length limit.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.length_limit.to_le_bytes());
        for node in &self.nodes {
            hasher.update(node.x.to_le_bytes());
            hasher.update(node.y.to_le_bytes());
            hasher.update(node.score.to_le_bytes());
        }
        hasher.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

/// Parses a Tsiligirides-style instance file.
pub fn parse_tsiligirides(text: &str, length_limit: f64) -> Result<Instance> {
    let mut points = Vec::new();
    let mut seen_data = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().map_err(|_| Error::Parse { line: line_no, message: format!("not a number: {tok:?}") })
            })
            .collect::<Result<Vec<_>>>()?;
        match fields.len() {
            2 if !seen_data => {}
            3 => points.push(Node { x: fields[0], y: fields[1], score: fields[2] }),
            n => {
                return Err(Error::Parse { line: line_no, message: format!("expected `x y score`, found {n} fields") })
            }
        }
        seen_data = true;
    }
    if points.len() < 2 {
        return Err(Error::Format(format!(
            "need a start and an end point, found {} node line(s)",
            points.len()
        )));
    }
    points.remove(1);
    Instance::new(points, length_limit)
}

/// Expected weights `dbar` and maximum deviations `dhat` over all arcs.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightModel {
    dbar: SquareMatrix,
    dhat: SquareMatrix,
    alpha: Option<f64>,
}

impl WeightModel {
    pub fn new(dbar: SquareMatrix, dhat: SquareMatrix) -> Result<Self> {
        if dbar.dim() != dhat.dim() {
            return Err(Error::Domain(format!("dbar is {0}x{0} but dhat is {1}x{1}", dbar.dim(), dhat.dim())));
        }
        for i in 0..dbar.dim() {
            if dbar.get(i, i) != 0.0 || dhat.get(i, i) != 0.0 {
                return Err(Error::Domain(format!("non-zero diagonal weight at node {i}")));
            }
            for j in 0..dbar.dim() {
                let (mean, dev) = (dbar.get(i, j), dhat.get(i, j));
                if !(dev >= 0.0 && dev <= mean && mean.is_finite()) {
                    return Err(Error::Domain(format!("arc ({i},{j}): need 0 <= dhat ({dev}) <= dbar ({mean})")));
                }
            }
        }
        Ok(Self { dbar, dhat, alpha: None })
    }

    pub fn dbar(&self) -> &SquareMatrix {
        &self.dbar
    }

    pub fn dhat(&self) -> &SquareMatrix {
        &self.dhat
    }

    /// Deviation fraction when the deviations were produced by [`apply_deviation`].
    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    pub fn dim(&self) -> usize {
        self.dbar.dim()
    }
}

pub fn euclidean_weights(inst: &Instance) -> WeightModel {
    let nodes = inst.nodes();
    let dbar = SquareMatrix::from_fn(nodes.len(), |i, j| {
        if i == j {
            0.0
        } else {
            (nodes[i].x - nodes[j].x).hypot(nodes[i].y - nodes[j].y)
        }
    });
    let n = dbar.dim();
    WeightModel { dbar, dhat: SquareMatrix::zeros(n), alpha: Some(0.0) }
}

/// Sets `dhat = alpha * dbar`.
pub fn apply_deviation(model: &WeightModel, alpha: f64) -> Result<WeightModel> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Domain(format!("deviation fraction must lie in [0, 1], got {alpha}")));
    }
    Ok(WeightModel { dbar: model.dbar.clone(), dhat: model.dbar.map(|d| alpha * d), alpha: Some(alpha) })
}

#[derive(Debug, Serialize, Deserialize)]
struct InstanceFile {
    length_limit: f64,
    nodes: Vec<Node>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dbar: Option<SquareMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dhat: Option<SquareMatrix>,
}

/// Writes the canonical JSON form. Matrices are included only when given.
pub fn instance_to_json(inst: &Instance, weights: Option<&WeightModel>) -> Result<String> {
    let file = InstanceFile {
        length_limit: inst.length_limit,
        nodes: inst.nodes.clone(),
        dbar: weights.map(|w| w.dbar.clone()),
        dhat: weights.map(|w| w.dhat.clone()),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

/// Reads the canonical JSON form, filling in Euclidean expectations and zero
/// deviations for missing matrices.
pub fn instance_from_json(text: &str) -> Result<(Instance, WeightModel)> {
    let file: InstanceFile = serde_json::from_str(text)?;
    let inst = Instance::new(file.nodes, file.length_limit)?;
    let euclid = euclidean_weights(&inst);
    let dbar = file.dbar.unwrap_or_else(|| euclid.dbar.clone());
    if dbar.dim() != inst.len() {
        return Err(Error::Format(format!("dbar is {0}x{0} for {1} nodes", dbar.dim(), inst.len())));
    }
    let dhat = file.dhat.unwrap_or_else(|| SquareMatrix::zeros(inst.len()));
    Ok((inst, WeightModel::new(dbar, dhat)?))
}
