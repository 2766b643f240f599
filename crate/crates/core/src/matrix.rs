use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense row-major `n x n` matrix of arc weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Format(format!("matrix row {i} has {} entries, expected {n}", row.len())));
            }
            data.extend(row);
        }
        Ok(Self { n, data })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n.max(1)).take(self.n).map(<[f64]>::to_vec).collect()
    }

    /// Elementwise combination of two equally sized matrices.
    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.n, other.n, "matrix dimension mismatch");
        Self { n: self.n, data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect() }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|&a| f(a)).collect() }
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// `w[i][k] <= w[i][j] + w[j][k] + tol` for every triple.
    pub fn satisfies_triangle_inequality(&self, tol: f64) -> bool {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let ij = self.get(i, j);
                for k in 0..n {
                    if self.get(i, k) > ij + self.get(j, k) + tol {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Sum of `w[v0 -> v1] + ... + w[v(m-1) -> vm]` over a node walk.
    pub fn walk_length(&self, walk: impl IntoIterator<Item = usize>) -> f64 {
        let mut iter = walk.into_iter();
        let Some(mut prev) = iter.next() else { return 0.0 };
        let mut total = 0.0;
        for next in iter {
            total += self.get(prev, next);
            prev = next;
        }
        total
    }
}

impl TryFrom<Vec<Vec<f64>>> for SquareMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_rows(rows)
    }
}

impl From<SquareMatrix> for Vec<Vec<f64>> {
    fn from(m: SquareMatrix) -> Self {
        m.rows()
    }
}
