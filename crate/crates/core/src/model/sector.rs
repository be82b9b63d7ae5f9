use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::operator::{parity_sign, ManyBodyOperator};
use crate::error::{Error, Result};

/// Eigenvalue of the fermion parity `prod_j (1 - 2 n_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> i8 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }

    pub fn of_state(state: usize) -> Parity {
        if state.count_ones() % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn from_sign(sign: f64) -> Parity {
        if sign < 0.0 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// Cross-sector elements above this magnitude reject a projection.
const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// An operator restricted to one parity sector, stored as CSR.
#[derive(Debug, Clone)]
pub struct SectorOperator {
    n_sites: usize,
    parity: Parity,
    /// Sector index -> full basis index, ascending.
    states: Vec<usize>,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
}

/// Restricts `op` to the `2^(N-1)` basis states of the given parity.
///
/// Fails with [`Error::SymmetryViolation`] when `op` couples the two sectors.
pub fn sector_project(op: &ManyBodyOperator, parity: Parity) -> Result<SectorOperator> {
    let n = op.n_sites();
    let dim = op.dimension();
    let states: Vec<usize> = (0..dim).filter(|&b| Parity::of_state(b) == parity).collect();
    let mut index_of = vec![u32::MAX; dim];
    for (k, &b) in states.iter().enumerate() {
        index_of[b] = k as u32;
    }

    let mut row_ptr = Vec::with_capacity(states.len() + 1);
    let mut cols = Vec::new();
    let mut vals = Vec::new();
    let mut scratch: Vec<(u32, f64)> = Vec::new();
    let mut worst_leak = 0.0f64;
    row_ptr.push(0);
    // Real symmetric operators: column `b` of O equals row `b`.
    for &b in &states {
        scratch.clear();
        for (out, v) in op.column(b) {
            let k = index_of[out];
            if k == u32::MAX {
                worst_leak = worst_leak.max(v.abs());
                continue;
            }
            scratch.push((k, v));
        }
        scratch.sort_unstable_by_key(|&(k, _)| k);
        let mut last: Option<u32> = None;
        for &(k, v) in &scratch {
            if last == Some(k) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(k);
                vals.push(v);
                last = Some(k);
            }
        }
        row_ptr.push(cols.len());
    }
    // Leaks may cancel between terms; check the merged action instead.
    if worst_leak > SYMMETRY_TOLERANCE {
        let magnitude = cross_sector_magnitude(op, &states, &index_of);
        if magnitude > SYMMETRY_TOLERANCE {
            return Err(Error::SymmetryViolation { magnitude });
        }
    }
    Ok(SectorOperator {
        n_sites: n,
        parity,
        states,
        row_ptr,
        cols,
        vals,
    })
}

fn cross_sector_magnitude(op: &ManyBodyOperator, states: &[usize], index_of: &[u32]) -> f64 {
    let mut worst = 0.0f64;
    let mut acc = std::collections::HashMap::new();
    for &b in states {
        acc.clear();
        for (out, v) in op.column(b) {
            if index_of[out] == u32::MAX {
                *acc.entry(out).or_insert(0.0) += v;
            }
        }
        for v in acc.values() {
            worst = worst.max(f64::abs(*v));
        }
    }
    worst
}

impl SectorOperator {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn dimension(&self) -> usize {
        self.states.len()
    }

    /// Full-basis index of each sector basis state.
    pub fn basis(&self) -> &[usize] {
        &self.states
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dimension());
        for (row, out) in y.iter_mut().enumerate() {
            let (lo, hi) = (self.row_ptr[row], self.row_ptr[row + 1]);
            let mut acc = 0.0;
            for k in lo..hi {
                acc += self.vals[k] * x[self.cols[k] as usize];
            }
            *out = acc;
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dimension()];
        self.apply_into(x, &mut y);
        y
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let dim = self.dimension();
        let mut m = DMatrix::zeros(dim, dim);
        for row in 0..dim {
            for k in self.row_ptr[row]..self.row_ptr[row + 1] {
                m[(row, self.cols[k] as usize)] += self.vals[k];
            }
        }
        m
    }

    /// Lifts a sector vector into the full `2^N` basis.
    pub fn embed(&self, sector_vector: &[f64]) -> Vec<f64> {
        let mut full = vec![0.0; 1 << self.n_sites];
        for (&b, &v) in self.states.iter().zip(sector_vector) {
            full[b] = v;
        }
        full
    }

    /// Sign of the parity operator on every sector basis state.
    pub fn parity_signs(&self) -> impl Iterator<Item = f64> + '_ {
        self.states.iter().map(|&b| parity_sign(b))
    }
}
