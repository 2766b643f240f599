//! Box uncertainty sets and scenario sampling.
//!
//! A box set of size `theta` holds every weight matrix `d` with
//! `|d_ij - dbar_ij| <= theta * dhat_ij`. Its elementwise maximum
//! `dbar + theta * dhat` is the only point the robust models need.
//!
//! Scenarios are sampled on the full deviation interval
//! `[dbar - dhat, dbar + dhat]`, independent of `theta`. Each scenario draws
//! from its own ChaCha8 stream selected by `(base_seed, index)`, so a pool can
//! be generated in any order or in parallel with identical results.

use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::WeightModel;
use crate::matrix::SquareMatrix;

#[derive(Debug, Clone, Copy)]
pub struct BoxUncertainty<'a> {
    model: &'a WeightModel,
    theta: f64,
}

impl<'a> BoxUncertainty<'a> {
    pub fn new(model: &'a WeightModel, theta: f64) -> Result<Self> {
        check_theta(theta)?;
        Ok(Self { model, theta })
    }

    pub fn model(&self) -> &'a WeightModel {
        self.model
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&theta) {
        Ok(())
    } else {
        Err(Error::Domain(format!("theta must lie in [0, 1], got {theta}")))
    }
}

/// One realized weight matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub d: SquareMatrix,
    pub seed_tag: u64,
}

/// `dbar + theta * dhat`, the elementwise maximum of the box.
pub fn worst_case_weights(u: &BoxUncertainty<'_>) -> Scenario {
    let theta = u.theta;
    Scenario { d: u.model.dbar().zip_with(u.model.dhat(), |mean, dev| mean + theta * dev), seed_tag: 0 }
}

/// `dbar - dhat` with the full deviation.
pub fn optimistic_weights(model: &WeightModel) -> Scenario {
    Scenario { d: model.dbar().zip_with(model.dhat(), |mean, dev| mean - dev), seed_tag: 0 }
}

/// Deterministic scenario `index` of the pool seeded by `base_seed`.
///
/// Arcs `i < j` are drawn in row-major order and mirrored to `(j, i)`.
pub fn sample_scenario(model: &WeightModel, base_seed: u64, index: u64) -> Scenario {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    rng.set_stream(index);
    let (dbar, dhat) = (model.dbar(), model.dhat());
    let n = model.dim();
    let mut d = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            let lo = dbar.get(i, j) - dhat.get(i, j);
            let hi = dbar.get(i, j) + dhat.get(i, j);
            let u: f64 = rng.random();
            let value = (lo + u * (hi - lo)).clamp(lo, hi);
            d.set(i, j, value);
            d.set(j, i, value);
        }
    }
    Scenario { d, seed_tag: index }
}

/// Scenarios `0..count` of a pool.
pub fn scenario_pool(model: &WeightModel, base_seed: u64, count: usize) -> Vec<Scenario> {
    use rayon::prelude::*;
    (0..count as u64).into_par_iter().map(|i| sample_scenario(model, base_seed, i)).collect()
}

/// Membership test. Bounds are formed exactly as in [`worst_case_weights`] so
/// extreme points test as members.
pub fn contains(u: &BoxUncertainty<'_>, s: &Scenario) -> Result<bool> {
    let (dbar, dhat) = (u.model.dbar(), u.model.dhat());
    if s.d.dim() != dbar.dim() {
        return Err(Error::Domain(format!("scenario is {0}x{0}, model is {1}x{1}", s.d.dim(), dbar.dim())));
    }
    let n = dbar.dim();
    for i in 0..n {
        for j in 0..n {
            let band = u.theta * dhat.get(i, j);
            let d = s.d.get(i, j);
            if d < dbar.get(i, j) - band || d > dbar.get(i, j) + band {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Writes one `i,j,d` row per off-diagonal arc.
pub fn write_scenario_csv<W: Write>(s: &Scenario, out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["i", "j", "d"])?;
    let n = s.d.dim();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                writer.write_record([i.to_string(), j.to_string(), s.d.get(i, j).to_string()])?;
            }
        }
    }
    writer.flush()?;
    Ok(())
}

/// Reads a scenario written by [`write_scenario_csv`]; missing arcs stay zero.
pub fn read_scenario_csv<R: Read>(input: R, n: usize, seed_tag: u64) -> Result<Scenario> {
    let mut reader = csv::Reader::from_reader(input);
    let mut d = SquareMatrix::zeros(n);
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        let field = |k: usize| record.get(k).unwrap_or("").trim();
        let parse_err = |message: String| Error::Parse { line: row + 2, message };
        let i: usize = field(0).parse().map_err(|_| parse_err(format!("bad node id {:?}", field(0))))?;
        let j: usize = field(1).parse().map_err(|_| parse_err(format!("bad node id {:?}", field(1))))?;
        let w: f64 = field(2).parse().map_err(|_| parse_err(format!("bad weight {:?}", field(2))))?;
        if i >= n || j >= n || i == j {
            return Err(parse_err(format!("arc ({i},{j}) outside a {n}-node instance")));
        }
        d.set(i, j, w);
    }
    Ok(Scenario { d, seed_tag })
}
