//! Monte-Carlo evaluation, theta-sweep tables and model equivalence checks.
//!
//! Every simulation in a table runs against one shared scenario pool. Per
//! scenario objectives are kept in index order and reduced by pairwise
//! summation, so summaries do not depend on the thread count.

use std::fmt;
use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instance::{Instance, Node, WeightModel};
use crate::models::{
    build_static_concurrent, build_static_sequential_with, MilpModel, ModelKind, StaticSequentialOptions,
};
use crate::recourse::{Path, Policy, RecourseContext};
use crate::solver::{
    branch_and_bound, for_each_path, Evaluator, MilpEnumerator, MilpOutcome, RobustSolution, SearchLimits,
};
use crate::uncertainty::{scenario_pool, Scenario};

/// The theta grid `0.0, 0.1, ..., 1.0`.
pub fn default_theta_grid() -> Vec<f64> {
    (0..=10).map(|k| k as f64 / 10.0).collect()
}

/// Sum with a fixed pairwise tree, independent of how values were produced.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n if n <= 8 => values.iter().fold(0.0, |acc, v| acc + v),
        n => pairwise_sum(&values[..n / 2]) + pairwise_sum(&values[n / 2..]),
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum StdFormula {
    /// Divide by `n`.
    #[default]
    Population,
    /// Divide by `n - 1`.
    Sample,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationSummary {
    pub n_scenarios: usize,
    pub mean: f64,
    pub std: f64,
    pub per_scenario: Vec<f64>,
}

impl SimulationSummary {
    pub fn from_objectives(per_scenario: Vec<f64>, formula: StdFormula) -> Self {
        let n = per_scenario.len();
        let mean = pairwise_sum(&per_scenario) / n as f64;
        let squares: Vec<f64> = per_scenario.iter().map(|x| (x - mean) * (x - mean)).collect();
        let divisor = match formula {
            StdFormula::Population => n as f64,
            StdFormula::Sample => n.saturating_sub(1).max(1) as f64,
        };
        // all-equal samples give exactly zero rather than rounding noise
        let std = if per_scenario.iter().all(|&x| x == per_scenario[0]) {
            0.0
        } else {
            (pairwise_sum(&squares) / divisor).sqrt()
        };
        Self { n_scenarios: n, mean, std, per_scenario }
    }
}

/// Objective `score - loss` of `path` in each scenario of `pool`.
pub fn simulate_pool(
    inst: &Instance,
    w: &WeightModel,
    path: &Path,
    pool: &[Scenario],
    policy: Policy,
    formula: StdFormula,
) -> Result<SimulationSummary> {
    if pool.is_empty() {
        return Err(Error::Domain("simulation needs at least one scenario".into()));
    }
    let scores = inst.scores();
    let ctx = RecourseContext::new(&scores, w.dbar(), inst.length_limit());
    let score = path.score(&scores);
    let objectives: Vec<f64> = pool.par_iter().map(|s| score - ctx.evaluate(policy, path, &s.d).loss).collect();
    Ok(SimulationSummary::from_objectives(objectives, formula))
}

/// Simulates `path` on scenarios `0..n` of the pool seeded by `base_seed`.
pub fn simulate(
    inst: &Instance,
    w: &WeightModel,
    path: &Path,
    n: usize,
    base_seed: u64,
    policy: Policy,
) -> Result<SimulationSummary> {
    if n == 0 {
        return Err(Error::Domain("simulation needs at least one scenario".into()));
    }
    simulate_pool(inst, w, path, &scenario_pool(w, base_seed, n), policy, StdFormula::Population)
}

/// Simulated statistics of one robust solution.
#[derive(Debug, Clone, PartialEq)]
pub struct TableCell {
    pub obj: f64,
    pub seq_mean: f64,
    pub seq_std: f64,
    pub conc_mean: f64,
    pub conc_std: f64,
    pub path: Path,
    pub optimal: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub theta: f64,
    pub one_stage: TableCell,
    pub two_stage: TableCell,
}

impl TableRow {
    /// Notes for cells whose solution is not proven optimal.
    pub fn flags(&self) -> Vec<&'static str> {
        let mut flags = Vec::new();
        if !self.one_stage.optimal {
            flags.push("one-stage-not-optimal");
        }
        if !self.two_stage.optimal {
            flags.push("two-stage-not-optimal");
        }
        flags
    }
}

/// Where table solutions come from.
#[derive(Debug, Clone)]
pub enum SolutionSource {
    BuiltIn(SearchLimits),
    /// Records for every `(one-stage, theta)` and `(static-conc, theta)` pair.
    Imported(Vec<RobustSolution>),
}

#[derive(Debug, Clone)]
pub struct TableConfig {
    pub theta_grid: Vec<f64>,
    pub n_scenarios: usize,
    pub base_seed: u64,
    pub std: StdFormula,
    pub source: SolutionSource,
}

impl Default for TableConfig {
    fn default() -> Self {
        Self {
            theta_grid: default_theta_grid(),
            n_scenarios: 1000,
            base_seed: 42,
            std: StdFormula::Population,
            source: SolutionSource::BuiltIn(SearchLimits::default()),
        }
    }
}

fn same_kind(a: ModelKind, b: ModelKind) -> bool {
    a.tag() == b.tag() && a.theta() == b.theta()
}

fn obtain(inst: &Instance, w: &WeightModel, kind: ModelKind, source: &SolutionSource) -> Result<RobustSolution> {
    match source {
        SolutionSource::BuiltIn(limits) => branch_and_bound(inst, w, kind, *limits),
        SolutionSource::Imported(records) => {
            let record = records
                .iter()
                .find(|r| same_kind(r.kind, kind))
                .ok_or_else(|| Error::Format(format!("no imported solution for {kind}")))?;
            let path = Path::new(record.path.nodes().to_vec(), inst.len())?;
            let objective = Evaluator::new(inst, w, kind)?.evaluate(&path)?;
            Ok(RobustSolution { path, kind, objective, optimal: record.optimal, nodes_explored: record.nodes_explored })
        }
    }
}

/// One row per theta: the one-stage and static-concurrent solutions, each
/// simulated under both policies against the same scenario pool.
pub fn run_table(inst: &Instance, w: &WeightModel, cfg: &TableConfig) -> Result<Vec<TableRow>> {
    if cfg.n_scenarios == 0 {
        return Err(Error::Domain("tables need at least one scenario".into()));
    }
    let pool = scenario_pool(w, cfg.base_seed, cfg.n_scenarios);
    let cell = |kind: ModelKind| -> Result<TableCell> {
        let sol = obtain(inst, w, kind, &cfg.source)?;
        let seq = simulate_pool(inst, w, &sol.path, &pool, Policy::Sequential, cfg.std)?;
        let conc = simulate_pool(inst, w, &sol.path, &pool, Policy::Concurrent, cfg.std)?;
        Ok(TableCell {
            obj: sol.objective,
            seq_mean: seq.mean,
            seq_std: seq.std,
            conc_mean: conc.mean,
            conc_std: conc.std,
            path: sol.path,
            optimal: sol.optimal,
        })
    };
    cfg.theta_grid
        .iter()
        .map(|&theta| {
            Ok(TableRow {
                theta,
                one_stage: cell(ModelKind::OneStageRo { theta })?,
                two_stage: cell(ModelKind::StaticConcurrent { theta })?,
            })
        })
        .collect()
}

pub const TABLE_HEADER: [&str; 14] = [
    "theta",
    "one_stage_obj",
    "one_stage_seq_mean",
    "one_stage_seq_std",
    "one_stage_conc_mean",
    "one_stage_conc_std",
    "two_stage_obj",
    "two_stage_seq_mean",
    "two_stage_seq_std",
    "two_stage_conc_mean",
    "two_stage_conc_std",
    "one_stage_path",
    "two_stage_path",
    "flags",
];

fn cell_fields(c: &TableCell) -> [f64; 5] {
    [c.obj, c.seq_mean, c.seq_std, c.conc_mean, c.conc_std]
}

/// Table layout, two decimals, one line per row.
pub fn emit_csv<W: Write>(rows: &[TableRow], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(TABLE_HEADER)?;
    for row in rows {
        let mut record = vec![format!("{:.2}", row.theta)];
        for cell in [&row.one_stage, &row.two_stage] {
            record.extend(cell_fields(cell).iter().map(|v| format!("{v:.2}")));
        }
        record.push(row.one_stage.path.to_string());
        record.push(row.two_stage.path.to_string());
        record.push(row.flags().join(";"));
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

/// `theta,model,policy,stat,value` with full precision.
pub fn emit_long_csv<W: Write>(rows: &[TableRow], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["theta", "model", "policy", "stat", "value"])?;
    for row in rows {
        for (model, cell) in [("one-stage", &row.one_stage), ("two-stage", &row.two_stage)] {
            let entries = [
                ("none", "obj", cell.obj),
                ("sequential", "mean", cell.seq_mean),
                ("sequential", "std", cell.seq_std),
                ("concurrent", "mean", cell.conc_mean),
                ("concurrent", "std", cell.conc_std),
            ];
            for (policy, stat, value) in entries {
                writer.write_record([row.theta.to_string(), model.into(), policy.into(), stat.into(), value.to_string()])?;
            }
        }
    }
    writer.flush()?;
    Ok(())
}

/// Reads a file written by [`emit_csv`]. Values carry the file's precision.
pub fn parse_table_csv<R: Read>(input: R) -> Result<Vec<TableRow>> {
    let mut reader = csv::Reader::from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header != TABLE_HEADER {
        return Err(Error::Format(format!("unexpected table header {header:?}")));
    }
    let mut rows = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let record = record?;
        let line = k + 2;
        let num = |i: usize| -> Result<f64> {
            let text = record.get(i).unwrap_or("");
            text.parse().map_err(|_| Error::Parse { line, message: format!("bad number {text:?}") })
        };
        let path = |i: usize| -> Result<Path> {
            crate::solver::parse_path(record.get(i).unwrap_or(""))
                .map_err(|e| Error::Parse { line, message: e.to_string() })
        };
        let flags = record.get(13).unwrap_or("");
        let cell = |offset: usize, tag: &str, p: Path| -> Result<TableCell> {
            Ok(TableCell {
                obj: num(offset)?,
                seq_mean: num(offset + 1)?,
                seq_std: num(offset + 2)?,
                conc_mean: num(offset + 3)?,
                conc_std: num(offset + 4)?,
                path: p,
                optimal: !flags.split(';').any(|f| f == format!("{tag}-not-optimal")),
            })
        };
        rows.push(TableRow {
            theta: num(0)?,
            one_stage: cell(1, "one-stage", path(11)?)?,
            two_stage: cell(6, "two-stage", path(12)?)?,
        });
    }
    Ok(rows)
}

/// Euclidean instance with coordinates in `[0, 20)` and integer scores `1..=9`,
/// fully determined by `seed`.
pub fn random_instance(seed: u64, nodes: usize, length_limit: f64) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..nodes)
        .map(|i| {
            let x = rng.random_range(0.0..20.0);
            let y = rng.random_range(0.0..20.0);
            let score: u32 = rng.random_range(1..=9);
            Node { x, y, score: if i == 0 { 0.0 } else { f64::from(score) } }
        })
        .collect();
    Instance::new(points, length_limit)
}

/// Columns of an equivalence check, in report order.
pub const EQUIVALENCE_COLUMNS: [&str; 5] =
    ["static-seq", "static-seq-relaxed", "static-conc", "two-stage-seq", "two-stage-conc"];

/// One path on which the formulations disagree (`None` = infeasible).
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub path: Path,
    pub values: [Option<f64>; 5],
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaCheck {
    pub theta: f64,
    pub optima: [f64; 5],
    pub paths_checked: usize,
    pub witnesses: Vec<Witness>,
}

impl ThetaCheck {
    pub fn max_discrepancy(&self) -> f64 {
        let hi = self.optima.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = self.optima.iter().copied().fold(f64::INFINITY, f64::min);
        hi - lo
    }

    pub fn passed(&self) -> bool {
        self.witnesses.is_empty() && self.max_discrepancy() == 0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub instance: String,
    pub checks: Vec<ThetaCheck>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(ThetaCheck::passed)
    }
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "instance {}", self.instance)?;
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            write!(f, "{status} theta={} paths={} optima:", c.theta, c.paths_checked)?;
            for (name, value) in EQUIVALENCE_COLUMNS.iter().zip(c.optima) {
                write!(f, " {name}={value}")?;
            }
            writeln!(f, " max_discrepancy={}", c.max_discrepancy())?;
            for w in c.witnesses.iter().take(3) {
                write!(f, "  witness {}:", w.path)?;
                for (name, value) in EQUIVALENCE_COLUMNS.iter().zip(w.values) {
                    match value {
                        Some(v) => write!(f, " {name}={v}")?,
                        None => write!(f, " {name}=infeasible")?,
                    }
                }
                writeln!(f)?;
            }
        }
        writeln!(f, "{}", if self.passed() { "all equivalences hold" } else { "equivalence check failed" })
    }
}

/// Knobs for [`verify_equivalences_with`].
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Largest instance accepted, depot included.
    pub size_cap: usize,
    /// Static-sequential big-M override, for fault-injection self-tests.
    pub big_m: Option<f64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { size_cap: 8, big_m: None }
    }
}

/// Path-by-path comparison of the static MILPs (solved by enumeration with
/// the arcs fixed) against the two-stage recourse evaluation.
pub fn verify_equivalences(inst: &Instance, w: &WeightModel, theta_grid: &[f64], size_cap: usize) -> Result<EquivalenceReport> {
    verify_equivalences_with(inst, w, theta_grid, VerifyOptions { size_cap, big_m: None })
}

pub fn verify_equivalences_with(
    inst: &Instance,
    w: &WeightModel,
    theta_grid: &[f64],
    opts: VerifyOptions,
) -> Result<EquivalenceReport> {
    if inst.len() > opts.size_cap {
        return Err(Error::Capacity { found: inst.len(), limit: opts.size_cap });
    }
    let checks = theta_grid
        .par_iter()
        .map(|&theta| check_theta(inst, w, theta, opts.big_m))
        .collect::<Result<Vec<_>>>()?;
    Ok(EquivalenceReport { instance: inst.fingerprint(), checks })
}

/// `x_i_j` indices of `model`, row-major.
fn arc_indices(model: &MilpModel, n: usize) -> Result<Vec<Option<usize>>> {
    let names = model.name_index();
    let mut idx = vec![None; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let name = format!("x_{i}_{j}");
                idx[i * n + j] = Some(
                    *names.get(name.as_str()).ok_or_else(|| Error::Format(format!("model lacks {name}")))?,
                );
            }
        }
    }
    Ok(idx)
}

fn check_theta(inst: &Instance, w: &WeightModel, theta: f64, big_m: Option<f64>) -> Result<ThetaCheck> {
    let n = inst.len();
    let seq = build_static_sequential_with(inst, w, theta, StaticSequentialOptions { relaxed: false, big_m })?;
    let relaxed = build_static_sequential_with(inst, w, theta, StaticSequentialOptions { relaxed: true, big_m })?;
    let conc = build_static_concurrent(inst, w, theta)?;
    let models = [&seq, &relaxed, &conc];
    let two_seq = Evaluator::new(inst, w, ModelKind::TwoStageSequential { theta })?;
    let two_conc = Evaluator::new(inst, w, ModelKind::TwoStageConcurrent { theta })?;

    let mut optima = [f64::NEG_INFINITY; 5];
    let mut witnesses = Vec::new();
    let mut paths_checked = 0;
    if n < 2 {
        // only the empty path exists and every model is empty
        return Ok(ThetaCheck { theta, optima: [0.0; 5], paths_checked: 1, witnesses });
    }
    let enumerators = models
        .iter()
        .map(|m| Ok((MilpEnumerator::new(m, crate::solver::DEFAULT_MAX_BINARIES)?, arc_indices(m, n)?)))
        .collect::<Result<Vec<_>>>()?;

    let mut failure = None;
    for_each_path(n, |path| {
        if failure.is_some() {
            return;
        }
        paths_checked += 1;
        let arcs = path.arcs();
        let mut values = [None; 5];
        for (k, (enumerator, idx)) in enumerators.iter().enumerate() {
            let fixings: Vec<(usize, f64)> = idx
                .iter()
                .enumerate()
                .filter_map(|(a, v)| v.map(|v| (v, if arcs.contains(&(a / n, a % n)) { 1.0 } else { 0.0 })))
                .collect();
            match enumerator.solve_with_fixings(&fixings) {
                Ok(MilpOutcome::Optimal { objective, .. }) => values[k] = Some(objective),
                Ok(MilpOutcome::Infeasible) => {}
                Err(e) => {
                    failure = Some(e);
                    return;
                }
            }
        }
        values[3] = two_seq.evaluate(path).ok();
        values[4] = two_conc.evaluate(path).ok();
        for (best, value) in optima.iter_mut().zip(values) {
            if let Some(v) = value {
                *best = best.max(v);
            }
        }
        if values.iter().any(|v| *v != values[0]) {
            witnesses.push(Witness { path: path.clone(), values });
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(ThetaCheck { theta, optima, paths_checked, witnesses })
}
