//! Generic linear models and the orienteering formulations built with them.
//!
//! Variable names follow a fixed scheme so exported LP files stay stable:
//!
//! | name          | meaning                                              |
//! |---------------|------------------------------------------------------|
//! | `x_i_j`       | arc `(i, j)` is on the first-stage path              |
//! | `u_i`         | position of node `i` (ordering constraints)          |
//! | `xk_i_j_k`    | arc `(i, j)` is the `k`-th arc of the path           |
//! | `y_i`         | node `i` is planned but not reached                  |
//! | `z_k`         | the `k`-th node of the path is not reached           |
//! | `yij_i_j`     | arc `(i, j)` is cancelled by the recourse            |
//!
//! `u_*`, `xk_*` and `y_*` are *auxiliary*: every row raises them through a
//! lower bound and the objective never rewards larger values, so their least
//! feasible values are optimal once the decision variables are fixed.

mod build;
mod lp;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

pub use build::{
    big_m, build_dop, build_one_stage_ro, build_recourse_concurrent, build_recourse_sequential,
    build_static_concurrent, build_static_sequential, build_static_sequential_with, StaticSequentialOptions,
};
pub use lp::{export_lp, parse_lp};

use crate::error::{Error, Result};
use crate::uncertainty::check_theta;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    Continuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarRole {
    Decision,
    Auxiliary,
}

impl VarRole {
    /// Role implied by the naming scheme.
    pub fn for_name(name: &str) -> Self {
        if name.starts_with("u_") || name.starts_with("xk_") || name.starts_with("y_") {
            VarRole::Auxiliary
        } else {
            VarRole::Decision
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub lower: f64,
    pub upper: f64,
    pub role: VarRole,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        }
    }
}

/// `sum(coef * var) sense rhs`, terms indexing [`MilpModel::variables`].
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Constraint {
    pub fn activity(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|&(v, c)| c * values[v]).sum()
    }

    pub fn is_satisfied(&self, values: &[f64]) -> bool {
        let lhs = self.activity(values);
        match self.sense {
            Sense::Le => lhs <= self.rhs,
            Sense::Eq => lhs == self.rhs,
            Sense::Ge => lhs >= self.rhs,
        }
    }
}

/// Which formulation a model (or a solver run) refers to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelKind {
    Dop,
    OneStageRo { theta: f64 },
    StaticSequential { theta: f64, relaxed: bool },
    StaticConcurrent { theta: f64 },
    TwoStageSequential { theta: f64 },
    TwoStageConcurrent { theta: f64 },
    RecourseSequential,
    RecourseConcurrent,
}

impl ModelKind {
    pub fn theta(&self) -> Option<f64> {
        match *self {
            ModelKind::OneStageRo { theta }
            | ModelKind::StaticSequential { theta, .. }
            | ModelKind::StaticConcurrent { theta }
            | ModelKind::TwoStageSequential { theta }
            | ModelKind::TwoStageConcurrent { theta } => Some(theta),
            ModelKind::Dop | ModelKind::RecourseSequential | ModelKind::RecourseConcurrent => None,
        }
    }

    pub fn is_robust(&self) -> bool {
        self.theta().is_some()
    }

    /// Short name used on the command line and in file headers.
    pub fn tag(&self) -> &'static str {
        match self {
            ModelKind::Dop => "dop",
            ModelKind::OneStageRo { .. } => "one-stage",
            ModelKind::StaticSequential { .. } => "static-seq",
            ModelKind::StaticConcurrent { .. } => "static-conc",
            ModelKind::TwoStageSequential { .. } => "two-stage-seq",
            ModelKind::TwoStageConcurrent { .. } => "two-stage-conc",
            ModelKind::RecourseSequential => "recourse-seq",
            ModelKind::RecourseConcurrent => "recourse-conc",
        }
    }

    /// Builds a kind from its tag; `theta` is required exactly for robust kinds.
    pub fn from_tag(tag: &str, theta: Option<f64>, relaxed: bool) -> Result<Self> {
        let need = |theta: Option<f64>| -> Result<f64> {
            let t = theta.ok_or_else(|| Error::Domain(format!("model `{tag}` needs theta")))?;
            check_theta(t)?;
            Ok(t)
        };
        let kind = match tag {
            "dop" => ModelKind::Dop,
            "one-stage" => ModelKind::OneStageRo { theta: need(theta)? },
            "static-seq" => ModelKind::StaticSequential { theta: need(theta)?, relaxed },
            "static-conc" => ModelKind::StaticConcurrent { theta: need(theta)? },
            "two-stage-seq" => ModelKind::TwoStageSequential { theta: need(theta)? },
            "two-stage-conc" => ModelKind::TwoStageConcurrent { theta: need(theta)? },
            "recourse-seq" => ModelKind::RecourseSequential,
            "recourse-conc" => ModelKind::RecourseConcurrent,
            other => return Err(Error::Domain(format!("unknown model kind `{other}`"))),
        };
        if theta.is_some() && !kind.is_robust() {
            return Err(Error::Domain(format!("model `{tag}` takes no theta")));
        }
        Ok(kind)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())?;
        if let Some(theta) = self.theta() {
            write!(f, "(theta={theta})")?;
        }
        if let ModelKind::StaticSequential { relaxed: true, .. } = self {
            f.write_str("[relaxed]")?;
        }
        Ok(())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    /// Accepts the tag alone for non-robust kinds.
    fn from_str(s: &str) -> Result<Self> {
        Self::from_tag(s, None, false)
    }
}

/// Provenance written into exported files.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelMeta {
    pub kind: ModelKind,
    pub alpha: Option<f64>,
    pub length_limit: f64,
    pub instance: String,
}

/// A maximization MILP.
#[derive(Debug, Clone, PartialEq)]
pub struct MilpModel {
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    pub objective: Vec<(usize, f64)>,
    pub meta: ModelMeta,
}

impl MilpModel {
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    pub fn name_index(&self) -> HashMap<&str, usize> {
        self.variables.iter().enumerate().map(|(i, v)| (v.name.as_str(), i)).collect()
    }

    pub fn binary_count(&self) -> usize {
        self.variables.iter().filter(|v| v.kind == VarKind::Binary).count()
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective.iter().map(|&(v, c)| c * values[v]).sum()
    }

    /// Every constraint and bound holds, and binaries are 0/1.
    pub fn is_feasible(&self, values: &[f64]) -> bool {
        values.len() == self.variables.len()
            && self.variables.iter().zip(values).all(|(var, &x)| {
                x >= var.lower && x <= var.upper && (var.kind == VarKind::Continuous || x == 0.0 || x == 1.0)
            })
            && self.constraints.iter().all(|c| c.is_satisfied(values))
    }
}
