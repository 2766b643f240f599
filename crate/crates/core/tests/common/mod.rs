#![allow(dead_code)]

use opsw_core::instance::{apply_deviation, euclidean_weights};
use opsw_core::{Instance, Node, Path, SquareMatrix, WeightModel};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn instance(rng: &mut ChaCha8Rng, nodes: usize, length_limit: f64) -> Instance {
    let points = (0..nodes)
        .map(|i| Node {
            x: rng.random_range(0.0..20.0),
            y: rng.random_range(0.0..20.0),
            score: if i == 0 { 0.0 } else { f64::from(rng.random_range(1..=9u32)) },
        })
        .collect();
    Instance::new(points, length_limit).unwrap()
}

pub fn weights(inst: &Instance, alpha: f64) -> WeightModel {
    apply_deviation(&euclidean_weights(inst), alpha).unwrap()
}

pub fn path(rng: &mut ChaCha8Rng, nodes: usize, max_len: usize) -> Path {
    let mut ids: Vec<usize> = (1..nodes).collect();
    ids.shuffle(rng);
    let len = rng.random_range(0..=max_len.min(ids.len()));
    ids.truncate(len);
    Path::new(ids, nodes).unwrap()
}

/// Symmetric matrix with every entry drawn from `[dbar - dhat, dbar + dhat]`.
pub fn realization(rng: &mut ChaCha8Rng, w: &WeightModel) -> SquareMatrix {
    let n = w.dim();
    let mut d = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            let (m, h) = (w.dbar().get(i, j), w.dhat().get(i, j));
            let v = if h > 0.0 { rng.random_range(m - h..=m + h) } else { m };
            d.set(i, j, v);
            d.set(j, i, v);
        }
    }
    d
}
