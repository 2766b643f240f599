//! Exhaustive 0/1 enumeration for small MILPs.
//!
//! Decision binaries are enumerated depth-first. Auxiliary variables are not
//! branched on: every row is brought to `sum >= rhs` form, each row may raise
//! at most one auxiliary (its only positive auxiliary coefficient), and the
//! objective never rewards larger auxiliaries. Under those conditions the
//! least values meeting every defining row lower-bound all feasible values,
//! so they are optimal once the decisions are fixed. They are found by a
//! worklist fixpoint starting from the lower bounds.
//!
//! Continuous decision variables are accepted only when fixed, either by
//! their bounds or by singleton rows during presolve.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::models::{MilpModel, Sense, VarKind, VarRole};

pub const DEFAULT_MAX_BINARIES: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub enum MilpOutcome {
    Optimal { objective: f64, values: Vec<f64> },
    Infeasible,
}

impl MilpOutcome {
    pub fn objective(&self) -> Option<f64> {
        match self {
            MilpOutcome::Optimal { objective, .. } => Some(*objective),
            MilpOutcome::Infeasible => None,
        }
    }
}

/// A row in `sum(terms) >= rhs` form (`==` for equality rows).
#[derive(Debug)]
struct Row {
    terms: Vec<(usize, f64)>,
    equality: bool,
    rhs: f64,
    /// The auxiliary this row raises, with its coefficient.
    defines: Option<(usize, f64)>,
    has_aux: bool,
}

impl Row {
    fn activity(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|&(v, c)| c * values[v]).sum()
    }

    fn holds(&self, values: &[f64]) -> bool {
        let lhs = self.activity(values);
        if self.equality {
            lhs == self.rhs
        } else {
            lhs >= self.rhs
        }
    }
}

/// Preprocessed model, reusable across fixings.
#[derive(Debug)]
pub struct MilpEnumerator<'m> {
    model: &'m MilpModel,
    rows: Vec<Row>,
    aux: Vec<bool>,
    objective: Vec<f64>,
    /// Defining rows that an auxiliary pushes up when it grows.
    dependents: Vec<Vec<usize>>,
    defining_rows: Vec<usize>,
    aux_rows: Vec<usize>,
    max_binaries: usize,
}

impl<'m> MilpEnumerator<'m> {
    pub fn new(model: &'m MilpModel, max_binaries: usize) -> Result<Self> {
        let nvars = model.variables.len();
        let aux: Vec<bool> = model.variables.iter().map(|v| v.role == VarRole::Auxiliary).collect();
        let mut objective = vec![0.0; nvars];
        for &(v, c) in &model.objective {
            objective[v] += c;
        }
        for (v, var) in model.variables.iter().enumerate() {
            if aux[v] && objective[v] > 0.0 {
                return Err(Error::Unsupported(format!("auxiliary {} has a positive objective coefficient", var.name)));
            }
            if var.lower > var.upper {
                return Err(Error::Domain(format!("{} has empty bounds", var.name)));
            }
            if aux[v] && !var.lower.is_finite() {
                return Err(Error::Unsupported(format!("auxiliary {} has no finite lower bound", var.name)));
            }
        }

        let mut rows = Vec::with_capacity(model.constraints.len());
        for c in &model.constraints {
            let flip = if c.sense == Sense::Le { -1.0 } else { 1.0 };
            let terms: Vec<(usize, f64)> = c.terms.iter().map(|&(v, k)| (v, flip * k)).collect();
            let has_aux = terms.iter().any(|&(v, _)| aux[v]);
            let raised: Vec<(usize, f64)> = terms.iter().copied().filter(|&(v, k)| aux[v] && k > 0.0).collect();
            if c.sense == Sense::Eq && has_aux {
                return Err(Error::Unsupported(format!("auxiliary in equality row {}", c.name)));
            }
            if raised.len() > 1 {
                return Err(Error::Unsupported(format!("row {} raises several auxiliaries", c.name)));
            }
            rows.push(Row {
                terms,
                equality: c.sense == Sense::Eq,
                rhs: flip * c.rhs,
                defines: raised.first().copied(),
                has_aux,
            });
        }

        let mut dependents = vec![Vec::new(); nvars];
        for (r, row) in rows.iter().enumerate() {
            if row.defines.is_some() {
                for &(v, k) in &row.terms {
                    if aux[v] && k < 0.0 {
                        dependents[v].push(r);
                    }
                }
            }
        }
        let defining_rows = (0..rows.len()).filter(|&r| rows[r].defines.is_some()).collect();
        let aux_rows = (0..rows.len()).filter(|&r| rows[r].has_aux).collect();
        Ok(Self { model, rows, aux, objective, dependents, defining_rows, aux_rows, max_binaries })
    }

    pub fn model(&self) -> &'m MilpModel {
        self.model
    }

    pub fn solve(&self) -> Result<MilpOutcome> {
        self.solve_with_fixings(&[])
    }

    /// Solves with extra `var = value` fixings on decision variables.
    pub fn solve_with_fixings(&self, fixings: &[(usize, f64)]) -> Result<MilpOutcome> {
        let vars = &self.model.variables;
        let mut lo: Vec<f64> = vars.iter().map(|v| v.lower).collect();
        let mut hi: Vec<f64> = vars.iter().map(|v| v.upper).collect();
        for &(v, value) in fixings {
            let var = vars.get(v).ok_or_else(|| Error::Domain(format!("no variable {v}")))?;
            if self.aux[v] {
                return Err(Error::Domain(format!("cannot fix auxiliary {}", var.name)));
            }
            if value < lo[v] || value > hi[v] {
                return Ok(MilpOutcome::Infeasible);
            }
            lo[v] = value;
            hi[v] = value;
        }
        if !self.presolve(&mut lo, &mut hi) {
            return Ok(MilpOutcome::Infeasible);
        }

        let free: Vec<usize> = (0..vars.len()).filter(|&v| !self.aux[v] && lo[v] < hi[v]).collect();
        if let Some(&v) = free.iter().find(|&&v| vars[v].kind == VarKind::Continuous) {
            return Err(Error::Unsupported(format!("continuous decision {} is not fixed", vars[v].name)));
        }
        if free.len() > self.max_binaries {
            return Err(Error::Capacity { found: free.len(), limit: self.max_binaries });
        }

        // aux-free rows still open after presolve, checked once their last free variable is set
        let mut position = vec![usize::MAX; vars.len()];
        for (depth, &v) in free.iter().enumerate() {
            position[v] = depth;
        }
        let mut check_at: Vec<Vec<usize>> = vec![Vec::new(); free.len()];
        for (r, row) in self.rows.iter().enumerate() {
            if row.has_aux {
                continue;
            }
            if let Some(last) = row.terms.iter().map(|&(v, _)| position[v]).filter(|&p| p != usize::MAX).max() {
                check_at[last].push(r);
            }
        }

        let mut values: Vec<f64> = lo.clone();
        let mut search = Search {
            e: self,
            free: &free,
            check_at: &check_at,
            lo: &lo,
            hi: &hi,
            best: None,
            queued: vec![false; self.rows.len()],
        };
        let fixed_part: f64 = (0..vars.len())
            .filter(|&v| position[v] == usize::MAX)
            .map(|v| self.objective[v] * if self.aux[v] { lo[v] } else { values[v] })
            .sum();
        let optimistic_free: f64 = free.iter().map(|&v| self.objective[v].max(0.0)).sum();
        search.dfs(0, &mut values, fixed_part + optimistic_free)?;
        Ok(match search.best {
            Some((objective, values)) => MilpOutcome::Optimal { objective, values },
            None => MilpOutcome::Infeasible,
        })
    }

    /// Singleton-row bound tightening on decisions; false if infeasible.
    fn presolve(&self, lo: &mut [f64], hi: &mut [f64]) -> bool {
        let vars = &self.model.variables;
        let mut done = vec![false; self.rows.len()];
        let mut changed = true;
        while changed {
            changed = false;
            for (r, row) in self.rows.iter().enumerate() {
                if done[r] || row.has_aux {
                    continue;
                }
                let mut rest = 0.0;
                let mut open = None;
                let mut open_count = 0;
                for &(v, c) in &row.terms {
                    if lo[v] == hi[v] {
                        rest += c * lo[v];
                    } else {
                        open_count += 1;
                        open = Some((v, c));
                    }
                }
                match (open_count, open) {
                    (0, _) => {
                        let ok = if row.equality { rest == row.rhs } else { rest >= row.rhs };
                        if !ok {
                            return false;
                        }
                        done[r] = true;
                    }
                    (1, Some((v, c))) => {
                        let bound = (row.rhs - rest) / c;
                        let (mut new_lo, mut new_hi) = (lo[v], hi[v]);
                        if row.equality {
                            new_lo = new_lo.max(bound);
                            new_hi = new_hi.min(bound);
                        } else if c > 0.0 {
                            new_lo = new_lo.max(bound);
                        } else {
                            new_hi = new_hi.min(bound);
                        }
                        if vars[v].kind == VarKind::Binary {
                            new_lo = new_lo.ceil();
                            new_hi = new_hi.floor();
                        }
                        if new_lo > new_hi {
                            return false;
                        }
                        if new_lo != lo[v] || new_hi != hi[v] {
                            lo[v] = new_lo;
                            hi[v] = new_hi;
                            changed = true;
                        }
                        if lo[v] == hi[v] {
                            // the row is re-checked as fully fixed on the next sweep
                            changed = true;
                        } else {
                            done[r] = true;
                        }
                    }
                    _ => {}
                }
            }
        }
        true
    }
}

struct Search<'s, 'm> {
    e: &'s MilpEnumerator<'m>,
    free: &'s [usize],
    check_at: &'s [Vec<usize>],
    lo: &'s [f64],
    hi: &'s [f64],
    best: Option<(f64, Vec<f64>)>,
    queued: Vec<bool>,
}

impl Search<'_, '_> {
    fn dfs(&mut self, depth: usize, values: &mut Vec<f64>, bound: f64) -> Result<()> {
        if let Some((best, _)) = &self.best {
            let tol = 1e-9 * best.abs().max(1.0);
            if bound < best - tol {
                return Ok(());
            }
        }
        if depth == self.free.len() {
            return self.leaf(values);
        }
        let v = self.free[depth];
        let c = self.e.objective[v];
        for value in [self.lo[v], self.hi[v]] {
            values[v] = value;
            if self.check_at[depth].iter().all(|&r| self.e.rows[r].holds(values)) {
                let child = bound - c.max(0.0) + c * value;
                self.dfs(depth + 1, values, child)?;
            }
        }
        values[v] = self.lo[v];
        Ok(())
    }

    fn leaf(&mut self, values: &mut Vec<f64>) -> Result<()> {
        let e = self.e;
        let vars = &e.model.variables;
        for (v, &is_aux) in e.aux.iter().enumerate() {
            if is_aux {
                values[v] = self.lo[v];
            }
        }
        let mut queue: VecDeque<usize> = e.defining_rows.iter().copied().collect();
        for &r in &queue {
            self.queued[r] = true;
        }
        let budget = 64 * (e.rows.len() + 1) * (vars.len() + 1);
        let mut pops = 0usize;
        let mut feasible = true;
        while let Some(r) = queue.pop_front() {
            self.queued[r] = false;
            pops += 1;
            if pops > budget {
                return Err(Error::Unsupported("auxiliary values did not settle".into()));
            }
            if !feasible {
                continue;
            }
            let row = &e.rows[r];
            let (a, ca) = row.defines.expect("queued rows define an auxiliary");
            let rest: f64 = row.terms.iter().filter(|&&(v, _)| v != a).map(|&(v, c)| c * values[v]).sum();
            let mut need = (row.rhs - rest) / ca;
            if vars[a].kind == VarKind::Binary {
                need = need.ceil();
            }
            if need > values[a] {
                if need > self.hi[a] {
                    feasible = false;
                    continue;
                }
                values[a] = need;
                for &dep in &e.dependents[a] {
                    if !self.queued[dep] {
                        self.queued[dep] = true;
                        queue.push_back(dep);
                    }
                }
            }
        }
        if !feasible || !e.aux_rows.iter().all(|&r| e.rows[r].holds(values)) {
            return Ok(());
        }
        let objective = e.model.objective_value(values);
        let better = match &self.best {
            Some((best, _)) => objective > *best,
            None => true,
        };
        if better {
            self.best = Some((objective, values.clone()));
        }
        Ok(())
    }
}

/// Solves `model` by enumeration, refusing more than `max_binaries` free
/// decision binaries.
pub fn enumerate_milp(model: &MilpModel, max_binaries: usize) -> Result<MilpOutcome> {
    MilpEnumerator::new(model, max_binaries)?.solve()
}
