//! Seeded fixtures shared by the benchmarks.

use opsw_core::experiments::random_instance;
use opsw_core::instance::{apply_deviation, euclidean_weights};
use opsw_core::uncertainty::sample_scenario;
use opsw_core::{Instance, Path, SquareMatrix, WeightModel};

/// Random Euclidean instance with `dhat = alpha * dbar`.
pub fn fixture(seed: u64, nodes: usize, length_limit: f64, alpha: f64) -> (Instance, WeightModel) {
    let inst = random_instance(seed, nodes, length_limit).expect("valid fixture");
    let w = apply_deviation(&euclidean_weights(&inst), alpha).expect("alpha in range");
    (inst, w)
}

/// The path visiting every customer in id order.
pub fn full_path(inst: &Instance) -> Path {
    Path::new((1..inst.len()).collect(), inst.len()).expect("distinct customers")
}

/// `count` scenarios of the pool seeded by `seed`.
pub fn realizations(w: &WeightModel, seed: u64, count: u64) -> Vec<SquareMatrix> {
    (0..count).map(|i| sample_scenario(w, seed, i).d).collect()
}
