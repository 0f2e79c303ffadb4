//! Sparse vectors over node ids.

use std::collections::BTreeMap;

/// A map from node id to value with implicit zeros elsewhere.
///
/// Entries may hold an exact zero between mutations; [`SparseVector::canonicalize`]
/// drops them, after which [`SparseVector::nnz`] counts the true support.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseVector {
    entries: BTreeMap<usize, f64>,
}

impl SparseVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// The indicator vector `e_i`.
    pub fn unit(i: usize) -> Self {
        let mut v = Self::new();
        v.set(i, 1.0);
        v
    }

    /// Collects the nonzero entries of a dense slice.
    pub fn from_dense(x: &[f64]) -> Self {
        x.iter()
            .enumerate()
            .filter(|(_, &v)| v != 0.0)
            .map(|(i, &v)| (i, v))
            .collect()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.entries.get(&i).copied().unwrap_or(0.0)
    }

    pub fn set(&mut self, i: usize, value: f64) {
        self.entries.insert(i, value);
    }

    pub fn add(&mut self, i: usize, value: f64) {
        *self.entries.entry(i).or_insert(0.0) += value;
    }

    pub fn canonicalize(&mut self) {
        self.entries.retain(|_, v| *v != 0.0);
    }

    /// Number of stored entries that are nonzero.
    pub fn nnz(&self) -> usize {
        self.entries.values().filter(|v| **v != 0.0).count()
    }

    /// Iterates stored entries in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries.iter().map(|(&i, &v)| (i, v))
    }

    pub fn norm1(&self) -> f64 {
        self.entries.values().map(|v| v.abs()).sum()
    }

    pub fn min_value(&self) -> Option<f64> {
        self.entries.values().copied().reduce(f64::min)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    pub fn to_dense(&self, n: usize) -> Vec<f64> {
        let mut x = vec![0.0; n];
        for (i, v) in self.iter() {
            x[i] = v;
        }
        x
    }
}

impl FromIterator<(usize, f64)> for SparseVector {
    /// Duplicate indices are summed.
    fn from_iter<I: IntoIterator<Item = (usize, f64)>>(iter: I) -> Self {
        let mut v = Self::new();
        for (i, x) in iter {
            v.add(i, x);
        }
        v
    }
}
