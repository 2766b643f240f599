//! Builders for every formulation.
//!
//! Constraints quantified over a box set are emitted once, at the box
//! maximum `dbar + theta * dhat`. This is exact whenever every uncertain
//! coefficient multiplies a nonnegative expression, which holds for each
//! robust row below:
//!
//! * one-stage length: `sum d_ij x_ij`, with `x >= 0`;
//! * static-sequential prefixes: `sum d_ij xk_ijk`, with `xk >= 0`;
//! * static-concurrent length: `sum d_ij (x_ij - yij_ij)`, with `yij <= x`
//!   enforced by the `cancel_*` rows.
//!
//! The depot rows allow the empty path (`sum x_0j = sum x_j0 <= 1`) so that
//! staying home is always feasible, matching the path search.

use crate::error::{Error, Result};
use crate::instance::{Instance, WeightModel, DEPOT};
use crate::matrix::SquareMatrix;
use crate::recourse::Path;
use crate::uncertainty::{optimistic_weights, worst_case_weights, BoxUncertainty};

use super::{Constraint, MilpModel, ModelKind, ModelMeta, Sense, VarKind, VarRole, Variable};

#[derive(Default)]
struct Builder {
    vars: Vec<Variable>,
    rows: Vec<Constraint>,
    objective: Vec<(usize, f64)>,
}

impl Builder {
    fn var(&mut self, name: String, kind: VarKind, lower: f64, upper: f64) -> usize {
        let role = VarRole::for_name(&name);
        self.vars.push(Variable { name, kind, lower, upper, role });
        self.vars.len() - 1
    }

    fn binary(&mut self, name: String, relaxed: bool) -> usize {
        let kind = if relaxed { VarKind::Continuous } else { VarKind::Binary };
        self.var(name, kind, 0.0, 1.0)
    }

    fn row(&mut self, name: String, terms: impl IntoIterator<Item = (usize, f64)>, sense: Sense, rhs: f64) {
        let terms = merge_terms(terms);
        self.rows.push(Constraint { name, terms, sense, rhs });
    }

    fn objective(&mut self, terms: impl IntoIterator<Item = (usize, f64)>) {
        let mut all = std::mem::take(&mut self.objective);
        all.extend(terms);
        self.objective = merge_terms(all);
    }

    fn finish(self, meta: ModelMeta) -> MilpModel {
        MilpModel { variables: self.vars, constraints: self.rows, objective: self.objective, meta }
    }
}

/// Sums duplicate variables in first-appearance order and drops zero coefficients.
fn merge_terms(terms: impl IntoIterator<Item = (usize, f64)>) -> Vec<(usize, f64)> {
    let mut merged: Vec<(usize, f64)> = Vec::new();
    for (v, c) in terms {
        match merged.iter_mut().find(|(w, _)| *w == v) {
            Some(slot) => slot.1 += c,
            None => merged.push((v, c)),
        }
    }
    merged.retain(|&(_, c)| c != 0.0);
    merged
}

/// Variable index per arc, `None` on the diagonal.
struct ArcVars {
    n: usize,
    idx: Vec<Option<usize>>,
}

impl ArcVars {
    fn get(&self, i: usize, j: usize) -> usize {
        self.idx[i * self.n + j].expect("no variable on a diagonal arc")
    }

    fn arcs(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| (0..self.n).filter(move |&j| j != i).map(move |j| (i, j, self.get(i, j))))
    }

    fn into_node(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&i| i != j).map(move |i| self.get(i, j))
    }

    fn out_of_node(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| j != i).map(move |j| self.get(i, j))
    }
}

fn arc_vars(b: &mut Builder, n: usize, mut make: impl FnMut(&mut Builder, usize, usize) -> usize) -> ArcVars {
    let mut idx = vec![None; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                idx[i * n + j] = Some(make(b, i, j));
            }
        }
    }
    ArcVars { n, idx }
}

fn customers(n: usize) -> std::ops::Range<usize> {
    1..n
}

fn meta(inst: &Instance, kind: ModelKind, alpha: Option<f64>) -> ModelMeta {
    ModelMeta { kind, alpha, length_limit: inst.length_limit(), instance: inst.fingerprint() }
}

/// Routing structure shared by every first-stage model: arc and position
/// variables, depot and flow rows, ordering rows, and the score objective.
fn first_stage(b: &mut Builder, inst: &Instance) -> ArcVars {
    let n = inst.len();
    let big_n = inst.customer_count() as f64;
    let x = arc_vars(b, n, |b, i, j| b.var(format!("x_{i}_{j}"), VarKind::Binary, 0.0, 1.0));
    let u: Vec<usize> = customers(n).map(|i| b.var(format!("u_{i}"), VarKind::Continuous, 1.0, big_n)).collect();

    b.row(
        "depot_balance".into(),
        x.out_of_node(DEPOT).map(|v| (v, 1.0)).chain(x.into_node(DEPOT).map(|v| (v, -1.0))),
        Sense::Eq,
        0.0,
    );
    b.row("depot_once".into(), x.out_of_node(DEPOT).map(|v| (v, 1.0)), Sense::Le, 1.0);
    for j in customers(n) {
        b.row(
            format!("flow_{j}"),
            x.into_node(j).map(|v| (v, 1.0)).chain(x.out_of_node(j).map(|v| (v, -1.0))),
            Sense::Eq,
            0.0,
        );
        b.row(format!("visit_{j}"), x.into_node(j).map(|v| (v, 1.0)), Sense::Le, 1.0);
    }
    for i in customers(n) {
        for j in customers(n) {
            if i != j {
                // u_i - u_j + 1 <= (1 - x_ij) |N|
                b.row(
                    format!("mtz_{i}_{j}"),
                    [(u[i - 1], 1.0), (u[j - 1], -1.0), (x.get(i, j), big_n)],
                    Sense::Le,
                    big_n - 1.0,
                );
            }
        }
    }
    let scores = inst.scores();
    b.objective(x.arcs().filter(|&(i, _, _)| i != DEPOT).map(|(i, _, v)| (v, scores[i])));
    x
}

fn length_row(b: &mut Builder, name: &str, x: &ArcVars, weights: &SquareMatrix, limit: f64) {
    b.row(name.into(), x.arcs().map(|(i, j, v)| (v, weights.get(i, j))), Sense::Le, limit);
}

fn empty_model(inst: &Instance, kind: ModelKind, alpha: Option<f64>) -> MilpModel {
    Builder::default().finish(meta(inst, kind, alpha))
}

/// Deterministic orienteering model under the given arc weights.
pub fn build_dop(inst: &Instance, weights: &SquareMatrix) -> MilpModel {
    if inst.is_empty() {
        return empty_model(inst, ModelKind::Dop, None);
    }
    let mut b = Builder::default();
    let x = first_stage(&mut b, inst);
    length_row(&mut b, "length", &x, weights, inst.length_limit());
    b.finish(meta(inst, ModelKind::Dop, None))
}

/// One-stage robust model: the length row at `dbar + theta * dhat`.
pub fn build_one_stage_ro(inst: &Instance, w: &WeightModel, theta: f64) -> Result<MilpModel> {
    let kind = ModelKind::OneStageRo { theta };
    let u = BoxUncertainty::new(w, theta)?;
    check_dims(inst, w)?;
    if inst.is_empty() {
        return Ok(empty_model(inst, kind, w.alpha()));
    }
    let mut b = Builder::default();
    let x = first_stage(&mut b, inst);
    length_row(&mut b, "length", &x, &worst_case_weights(&u).d, inst.length_limit());
    Ok(b.finish(meta(inst, kind, w.alpha())))
}

/// Big-M for the prefix rows: bounds any prefix length plus a return leg.
pub fn big_m(w: &WeightModel) -> f64 {
    let n = w.dim();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                total += w.dbar().get(i, j) + w.dhat().get(i, j);
            }
        }
    }
    total + (1..n).map(|j| w.dbar().get(j, DEPOT)).fold(0.0, f64::max)
}

/// Position-indexed recourse (`xk`, `y`, `z`) and its rows; prefixes are
/// costed with `prefix_weights`, return legs with `dbar`.
#[allow(clippy::too_many_arguments)]
fn sequential_recourse(
    b: &mut Builder,
    inst: &Instance,
    x: &ArcVars,
    prefix_weights: &SquareMatrix,
    dbar: &SquareMatrix,
    big_m: f64,
    relaxed: bool,
) {
    let n = inst.len();
    let positions = inst.customer_count();
    let xk: Vec<ArcVars> =
        (1..=positions).map(|k| arc_vars(b, n, |b, i, j| b.binary(format!("xk_{i}_{j}_{k}"), relaxed))).collect();
    let y: Vec<usize> = customers(n).map(|i| b.binary(format!("y_{i}"), relaxed)).collect();
    let z: Vec<usize> = (1..=positions).map(|k| b.var(format!("z_{k}"), VarKind::Binary, 0.0, 1.0)).collect();

    for j in customers(n) {
        b.row(format!("first_arc_{j}"), [(xk[0].get(DEPOT, j), 1.0), (x.get(DEPOT, j), -1.0)], Sense::Ge, 0.0);
    }
    // k = 1 is covered by first_arc_*
    for k in 2..=positions {
        for i in customers(n) {
            for j in customers(n) {
                if i == j {
                    continue;
                }
                let prev = xk[k - 2].into_node(i).map(|v| (v, -1.0));
                b.row(
                    format!("arc_order_{i}_{j}_{k}"),
                    [(xk[k - 1].get(i, j), 1.0), (x.get(i, j), -1.0)].into_iter().chain(prev),
                    Sense::Ge,
                    -1.0,
                );
            }
        }
    }
    for cap in 1..=positions {
        let prefix =
            xk[..cap].iter().flat_map(|layer| layer.arcs().map(|(i, j, v)| (v, prefix_weights.get(i, j))));
        let ret = xk[cap - 1].arcs().map(|(_, j, v)| (v, dbar.get(j, DEPOT)));
        b.row(
            format!("prefix_{cap}"),
            prefix.chain(ret).chain([(z[cap - 1], -big_m)]),
            Sense::Le,
            inst.length_limit(),
        );
    }
    for k in 2..=positions {
        b.row(format!("z_order_{k}"), [(z[k - 1], 1.0), (z[k - 2], -1.0)], Sense::Ge, 0.0);
    }
    for j in customers(n) {
        for k in 1..=positions {
            let arriving = xk[k - 1].into_node(j).map(|v| (v, -1.0));
            b.row(
                format!("unreached_{j}_{k}"),
                [(y[j - 1], 1.0)].into_iter().chain(arriving).chain([(z[k - 1], -1.0)]),
                Sense::Ge,
                -1.0,
            );
        }
    }
    let scores = inst.scores();
    b.objective(customers(n).map(|i| (y[i - 1], -scores[i])));
}

/// Arc-cancellation recourse (`yij`) and its rows. Kept arcs are costed with
/// `arc_weights`, the return from the cut point with `dbar`.
fn concurrent_recourse(
    b: &mut Builder,
    inst: &Instance,
    x: &ArcVars,
    arc_weights: &SquareMatrix,
    dbar: &SquareMatrix,
    row_name: &str,
) {
    let n = inst.len();
    let y = arc_vars(b, n, |b, i, j| b.var(format!("yij_{i}_{j}"), VarKind::Binary, 0.0, 1.0));
    for (i, j, v) in y.arcs() {
        b.row(format!("cancel_{i}_{j}"), [(v, 1.0), (x.get(i, j), -1.0)], Sense::Le, 0.0);
    }
    for j in customers(n) {
        b.row(
            format!("cancel_chain_{j}"),
            y.into_node(j).map(|v| (v, 1.0)).chain(y.out_of_node(j).map(|v| (v, -1.0))),
            Sense::Le,
            0.0,
        );
    }
    // sum d x - sum d y + sum_j (out_j(y) - in_j(y)) dbar_j0
    let mut terms: Vec<(usize, f64)> = x.arcs().map(|(i, j, v)| (v, arc_weights.get(i, j))).collect();
    for (i, j, v) in y.arcs() {
        let mut coef = -arc_weights.get(i, j);
        if i != DEPOT {
            coef += dbar.get(i, DEPOT);
        }
        if j != DEPOT {
            coef -= dbar.get(j, DEPOT);
        }
        terms.push((v, coef));
    }
    b.row(row_name.into(), terms, Sense::Le, inst.length_limit());
    let scores = inst.scores();
    b.objective(y.arcs().filter(|&(_, j, _)| j != DEPOT).map(|(_, j, v)| (v, -scores[j])));
}

/// Static robust model with arc-cancellation recourse.
pub fn build_static_concurrent(inst: &Instance, w: &WeightModel, theta: f64) -> Result<MilpModel> {
    let kind = ModelKind::StaticConcurrent { theta };
    let u = BoxUncertainty::new(w, theta)?;
    check_dims(inst, w)?;
    if inst.is_empty() {
        return Ok(empty_model(inst, kind, w.alpha()));
    }
    let mut b = Builder::default();
    let x = first_stage(&mut b, inst);
    length_row(&mut b, "optimistic_length", &x, &optimistic_weights(w).d, inst.length_limit());
    concurrent_recourse(&mut b, inst, &x, &worst_case_weights(&u).d, w.dbar(), "robust_length");
    Ok(b.finish(meta(inst, kind, w.alpha())))
}

/// Knobs for [`build_static_sequential_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct StaticSequentialOptions {
    /// Continuous `xk` and `y` in `[0, 1]`.
    pub relaxed: bool,
    /// Replaces [`big_m`]; only fault-injection tests should set this.
    pub big_m: Option<f64>,
}

/// Static robust model with position-indexed recourse.
pub fn build_static_sequential(inst: &Instance, w: &WeightModel, theta: f64, relax: bool) -> Result<MilpModel> {
    build_static_sequential_with(inst, w, theta, StaticSequentialOptions { relaxed: relax, big_m: None })
}

pub fn build_static_sequential_with(
    inst: &Instance,
    w: &WeightModel,
    theta: f64,
    opts: StaticSequentialOptions,
) -> Result<MilpModel> {
    let kind = ModelKind::StaticSequential { theta, relaxed: opts.relaxed };
    let u = BoxUncertainty::new(w, theta)?;
    check_dims(inst, w)?;
    if inst.is_empty() {
        return Ok(empty_model(inst, kind, w.alpha()));
    }
    let mut b = Builder::default();
    let x = first_stage(&mut b, inst);
    length_row(&mut b, "optimistic_length", &x, &optimistic_weights(w).d, inst.length_limit());
    let m = opts.big_m.unwrap_or_else(|| big_m(w));
    sequential_recourse(&mut b, inst, &x, &worst_case_weights(&u).d, w.dbar(), m, opts.relaxed);
    Ok(b.finish(meta(inst, kind, w.alpha())))
}

/// `x` fixed to the path through its bounds.
fn fixed_path_vars(b: &mut Builder, n: usize, path: &Path) -> ArcVars {
    let arcs = path.arcs();
    arc_vars(b, n, |b, i, j| {
        let on = if arcs.contains(&(i, j)) { 1.0 } else { 0.0 };
        b.var(format!("x_{i}_{j}"), VarKind::Binary, on, on)
    })
}

fn check_recourse_inputs(inst: &Instance, dbar: &SquareMatrix, path: &Path, realized: &SquareMatrix) -> Result<()> {
    if path.is_empty() {
        return Err(Error::Domain("recourse models need a nonempty path".into()));
    }
    if dbar.dim() != inst.len() || realized.dim() != inst.len() {
        return Err(Error::Domain("weight matrices do not match the instance".into()));
    }
    Path::new(path.nodes().to_vec(), inst.len()).map(|_| ())
}

fn check_dims(inst: &Instance, w: &WeightModel) -> Result<()> {
    if w.dim() == inst.len() {
        Ok(())
    } else {
        Err(Error::Domain(format!("weights are {0}x{0} for {1} nodes", w.dim(), inst.len())))
    }
}

/// Sequential recourse for a fixed path under realized weights.
///
/// Big-M is the sum of all realized weights plus the longest expected
/// return, which bounds every prefix row for any realization.
pub fn build_recourse_sequential(
    inst: &Instance,
    dbar: &SquareMatrix,
    path: &Path,
    realized: &SquareMatrix,
) -> Result<MilpModel> {
    check_recourse_inputs(inst, dbar, path, realized)?;
    let n = inst.len();
    let mut b = Builder::default();
    let x = fixed_path_vars(&mut b, n, path);
    let mut m = 0.0;
    for (i, j, _) in x.arcs() {
        m += realized.get(i, j).abs();
    }
    m += (1..n).map(|j| dbar.get(j, DEPOT)).fold(0.0, f64::max);
    sequential_recourse(&mut b, inst, &x, realized, dbar, m, false);
    Ok(b.finish(meta(inst, ModelKind::RecourseSequential, None)))
}

/// Concurrent recourse for a fixed path under realized weights. Arcs into
/// the depot are costed at their expected weight, like every return leg.
pub fn build_recourse_concurrent(
    inst: &Instance,
    dbar: &SquareMatrix,
    path: &Path,
    realized: &SquareMatrix,
) -> Result<MilpModel> {
    check_recourse_inputs(inst, dbar, path, realized)?;
    let n = inst.len();
    let mut b = Builder::default();
    let x = fixed_path_vars(&mut b, n, path);
    let kept = SquareMatrix::from_fn(n, |i, j| if j == DEPOT { dbar.get(i, j) } else { realized.get(i, j) });
    concurrent_recourse(&mut b, inst, &x, &kept, dbar, "recourse_length");
    Ok(b.finish(meta(inst, ModelKind::RecourseConcurrent, None)))
}
