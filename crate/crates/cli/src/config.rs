//! Optional TOML defaults and resolution of the shared flags.

use std::path::{Path as FsPath, PathBuf};

use opsw_core::experiments::default_theta_grid;
use opsw_core::instance::{apply_deviation, euclidean_weights, instance_from_json, parse_tsiligirides};
use opsw_core::{Instance, WeightModel};
use serde::Deserialize;

use crate::{CliError, Common, ModelArg, StdArg, ThetaArgs};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GridValue {
    List(Vec<f64>),
    Text(String),
}

/// Keys mirror the long flags with `-` replaced by `_`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub instance: Option<PathBuf>,
    #[serde(rename = "L")]
    pub length_limit: Option<f64>,
    pub alpha: Option<f64>,
    pub nodes: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub theta: Option<f64>,
    pub theta_grid: Option<GridValue>,
    pub model: Option<ModelArg>,
    pub relax: Option<bool>,
    pub limit_nodes: Option<u64>,
    pub scenarios: Option<usize>,
    pub std: Option<StdArg>,
    pub solutions: Option<PathBuf>,
    pub cap: Option<usize>,
    pub big_m: Option<f64>,
    pub path: Option<String>,
}

impl FileConfig {
    pub fn load(path: &FsPath) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Run(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }
}

/// Instance, weights and the settings every command echoes.
pub struct Setup {
    pub instance: Instance,
    pub weights: WeightModel,
    pub seed: u64,
    pub out: PathBuf,
}

fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}

pub fn check_unit(name: &str, value: f64) -> Result<f64, CliError> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(usage(format!("--{name} must lie in [0, 1], got {value}")))
    }
}

pub fn setup(c: &Common, f: &FileConfig) -> Result<Setup, CliError> {
    let path = c.instance.clone().or_else(|| f.instance.clone()).ok_or_else(|| usage("--instance is required"))?;
    let length_limit = c.length_limit.or(f.length_limit);
    if let Some(l) = length_limit {
        if !(l.is_finite() && l > 0.0) {
            return Err(usage(format!("--L must be positive, got {l}")));
        }
    }
    let alpha = c.alpha.or(f.alpha).map(|a| check_unit("alpha", a)).transpose()?;
    let nodes = c.nodes.or(f.nodes);
    if nodes == Some(0) {
        return Err(usage("--nodes must be at least 1"));
    }

    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::Run(format!("cannot read instance {}: {e}", path.display())))?;
    let is_json = path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
    let (mut instance, mut weights) = if is_json {
        let (inst, w) = instance_from_json(&text)?;
        let inst = match length_limit {
            Some(l) => inst.with_length_limit(l)?,
            None => inst,
        };
        (inst, w)
    } else {
        let l = length_limit.ok_or_else(|| usage("--L is required for text instances"))?;
        let inst = parse_tsiligirides(&text, l)?;
        let w = euclidean_weights(&inst);
        (inst, w)
    };
    if let Some(count) = nodes {
        if count < instance.len() {
            instance = instance.truncated(count)?;
            let keep = |m: &opsw_core::SquareMatrix| opsw_core::SquareMatrix::from_fn(count, |i, j| m.get(i, j));
            weights = WeightModel::new(keep(weights.dbar()), keep(weights.dhat()))?;
        }
    }
    if let Some(a) = alpha {
        weights = apply_deviation(&weights, a)?;
    }
    for warning in instance.warnings() {
        eprintln!("warning: {warning}");
    }
    Ok(Setup {
        instance,
        weights,
        seed: c.seed.or(f.seed).unwrap_or(DEFAULT_SEED),
        out: c.out.clone().or_else(|| f.out.clone()).unwrap_or_else(|| PathBuf::from(".")),
    })
}

fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    if text.trim() == "default" {
        return Ok(default_theta_grid());
    }
    text.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| usage(format!("bad theta {t:?} in --theta-grid"))))
        .collect()
}

/// The requested thetas, `fallback` when none were given.
pub fn thetas(t: &ThetaArgs, f: &FileConfig, fallback: Option<Vec<f64>>) -> Result<Vec<f64>, CliError> {
    let grid = if let Some(theta) = t.theta {
        vec![theta]
    } else if let Some(text) = &t.theta_grid {
        parse_grid(text)?
    } else if let Some(theta) = f.theta {
        vec![theta]
    } else if let Some(grid) = &f.theta_grid {
        match grid {
            GridValue::List(values) => values.clone(),
            GridValue::Text(text) => parse_grid(text)?,
        }
    } else {
        fallback.ok_or_else(|| usage("--theta or --theta-grid is required"))?
    };
    if grid.is_empty() {
        return Err(usage("the theta grid is empty"));
    }
    grid.into_iter().map(|theta| check_unit("theta", theta)).collect()
}
