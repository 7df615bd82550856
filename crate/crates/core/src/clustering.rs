//! Hard partitions of `n` vertices into `K` labelled groups.
//!
//! A [`Clustering`] is the label-vector view of an `n x K` clustering matrix:
//! row `i` has a single one, in column `labels[i]`. Group sizes are always
//! derived from the labels, so the capacity vector can never disagree with
//! the assignment it describes.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clustering {
    labels: Vec<u32>,
    capacities: Vec<usize>,
}

impl Clustering {
    /// Builds a clustering from labels in `0..k`.
    pub fn from_labels(labels: Vec<u32>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::param("group count must be positive"));
        }
        let mut capacities = vec![0usize; k];
        for (i, &l) in labels.iter().enumerate() {
            let slot = capacities.get_mut(l as usize).ok_or_else(|| {
                Error::Input(format!("label {l} of vertex {i} is outside 0..{k}"))
            })?;
            *slot += 1;
        }
        Ok(Clustering { labels, capacities })
    }

    /// Builds a clustering and checks that its group sizes equal `capacities`.
    pub fn with_capacities(labels: Vec<u32>, capacities: &[usize]) -> Result<Self> {
        let c = Self::from_labels(labels, capacities.len())?;
        if c.capacities != capacities {
            return Err(Error::Structural(format!(
                "group sizes {:?} do not match capacities {:?}",
                c.capacities, capacities
            )));
        }
        Ok(c)
    }

    /// Contiguous block layout: group sizes follow `capacities` in order.
    pub fn blocks(capacities: &[usize]) -> Result<Self> {
        let labels = capacities
            .iter()
            .enumerate()
            .flat_map(|(k, &size)| std::iter::repeat_n(k as u32, size))
            .collect();
        Self::from_labels(labels, capacities.len())
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn k(&self) -> usize {
        self.capacities.len()
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i] as usize
    }

    /// Group sizes `pi`.
    pub fn capacities(&self) -> &[usize] {
        &self.capacities
    }

    pub fn is_balanced(&self) -> bool {
        let n = self.n();
        let k = self.k();
        n.is_multiple_of(k) && self.capacities.iter().all(|&c| c == n / k)
    }

    /// Members of each group, in increasing vertex order.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        let mut groups: Vec<Vec<usize>> = self
            .capacities
            .iter()
            .map(|&c| Vec::with_capacity(c))
            .collect();
        for (i, &l) in self.labels.iter().enumerate() {
            groups[l as usize].push(i);
        }
        groups
    }

    /// Applies a label relabelling `new = perm[old]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.k() {
            return Err(Error::dim(format!(
                "permutation of length {} for {} groups",
                perm.len(),
                self.k()
            )));
        }
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::param("relabelling is not a permutation"));
            }
        }
        let labels = self
            .labels
            .iter()
            .map(|&l| perm[l as usize] as u32)
            .collect();
        Self::from_labels(labels, self.k())
    }

    /// Reorders vertices: vertex `i` of the result is vertex `order[i]` of `self`.
    pub fn permute_vertices(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.n() {
            return Err(Error::dim("vertex order length differs from n"));
        }
        let labels = order.iter().map(|&i| self.labels[i]).collect();
        Self::from_labels(labels, self.k())
    }

    /// Dense row-major 0/1 matrix.
    pub fn to_matrix(&self) -> Vec<f64> {
        let k = self.k();
        let mut m = vec![0.0; self.n() * k];
        for (i, &l) in self.labels.iter().enumerate() {
            m[i * k + l as usize] = 1.0;
        }
        m
    }

    /// Squared Frobenius distance between the two 0/1 matrices: twice the
    /// number of rows whose labels differ.
    pub fn frobenius_sq(&self, other: &Clustering) -> usize {
        2 * self
            .labels
            .iter()
            .zip(&other.labels)
            .filter(|(a, b)| a != b)
            .count()
    }

    /// Checks the clustering-matrix structure against `capacities`: one label
    /// per row in range, column sums equal to `capacities`.
    pub fn check_structure(&self, capacities: &[usize]) -> Result<()> {
        if capacities.len() != self.k() {
            return Err(Error::dim("capacity vector length differs from K"));
        }
        let mut counts = vec![0usize; self.k()];
        for &l in &self.labels {
            let slot = counts
                .get_mut(l as usize)
                .ok_or_else(|| Error::Structural(format!("label {l} out of range")))?;
            *slot += 1;
        }
        if counts != capacities {
            return Err(Error::Structural(format!(
                "column sums {counts:?} differ from capacities {capacities:?}"
            )));
        }
        Ok(())
    }
}

/// `(n/K, ..., n/K)`.
pub fn balanced_capacities(n: usize, k: usize) -> Result<Vec<usize>> {
    if k < 2 {
        return Err(Error::param(format!("need K >= 2, got {k}")));
    }
    if !n.is_multiple_of(k) {
        return Err(Error::param(format!("K={k} does not divide n={n}")));
    }
    Ok(vec![n / k; k])
}

pub(crate) fn check_capacities(n: usize, capacities: &[usize]) -> Result<()> {
    if capacities.is_empty() {
        return Err(Error::param("capacity vector is empty"));
    }
    let total: usize = capacities.iter().sum();
    if total != n {
        return Err(Error::param(format!(
            "capacities sum to {total}, expected n={n}"
        )));
    }
    Ok(())
}
