//! Exact projection onto clustering matrices with prescribed group sizes.
//!
//! Projecting a score matrix `C` onto the clusterings with column sums `pi`
//! (in Frobenius norm) is the same as maximizing the linear objective
//! `<C, H>` over them, which is a transportation problem with `n` unit
//! sources and `K` sinks of capacity `pi_k`. [`project`] solves it exactly
//! and returns a dual potential that certifies optimality;
//! [`verify_certificate`] checks that certificate independently of the
//! solver.

mod brute;
mod certificate;
mod k2;
mod ssp;

pub use brute::{brute_force_project, multinomial, BruteForceResult, BRUTE_FORCE_LIMIT};
pub use certificate::{
    gain_graph, potentials_satisfy, verify_certificate, verify_with_capacities, Certificate,
};
pub use k2::project_k2;
pub use ssp::project;

use crate::clustering::Clustering;
use crate::error::{Error, Result};

/// Dense row-major `n x K` score matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    n: usize,
    k: usize,
    values: Vec<f64>,
}

impl ScoreMatrix {
    pub fn new(n: usize, k: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::param("score matrix dimensions must be positive"));
        }
        if values.len() != n * k {
            return Err(Error::dim(format!(
                "{} values for a {n}x{k} matrix",
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Input(format!(
                "non-finite score at row {}, column {}",
                pos / k,
                pos % k
            )));
        }
        Ok(ScoreMatrix { n, k, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let k = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::dim("ragged score matrix rows"));
        }
        Self::new(rows.len(), k, rows.concat())
    }

    pub fn zeros(n: usize, k: usize) -> Self {
        ScoreMatrix {
            n,
            k,
            values: vec![0.0; n * k],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.values[i * self.k + k]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.k..(i + 1) * self.k]
    }

    /// `<C, H>`, summed in row order.
    pub fn objective(&self, clustering: &Clustering) -> f64 {
        clustering
            .labels()
            .iter()
            .enumerate()
            .map(|(i, &l)| self.get(i, l as usize))
            .sum()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// True when every entry is an integer small enough that sums of up to
    /// `n` of them stay exact in `f64`.
    pub fn is_integral(&self) -> bool {
        let bound = 2f64.powi(52) / (self.n as f64 + 1.0);
        self.values
            .iter()
            .all(|v| v.fract() == 0.0 && v.abs() < bound)
    }

    /// Columns permuted: column `j` of the result is column `perm[j]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> Self {
        let mut values = Vec::with_capacity(self.values.len());
        for i in 0..self.n {
            let row = self.row(i);
            values.extend(perm.iter().map(|&c| row[c]));
        }
        ScoreMatrix {
            n: self.n,
            k: self.k,
            values,
        }
    }

    pub fn scaled(&self, t: f64) -> Self {
        ScoreMatrix {
            n: self.n,
            k: self.k,
            values: self.values.iter().map(|v| v * t).collect(),
        }
    }

    /// Frobenius distance to another matrix of the same shape.
    pub fn frobenius_distance(&self, other: &ScoreMatrix) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

impl From<&Clustering> for ScoreMatrix {
    fn from(h: &Clustering) -> Self {
        ScoreMatrix {
            n: h.n(),
            k: h.k(),
            values: h.to_matrix(),
        }
    }
}

/// Column potentials `w` certifying an assignment; normalized so the first
/// non-empty group has potential zero.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPotential {
    pub w: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionResult {
    pub clustering: Clustering,
    pub dual: DualPotential,
    /// `<C, H>` of the returned clustering.
    pub objective: f64,
}

/// Validates `(C, pi)` for any projection routine.
pub(crate) fn check_instance(c: &ScoreMatrix, capacities: &[usize]) -> Result<()> {
    if capacities.len() != c.k() {
        return Err(Error::dim(format!(
            "{} capacities for {} columns",
            capacities.len(),
            c.k()
        )));
    }
    crate::clustering::check_capacities(c.n(), capacities)
}

/// Uses the selection fast path when `K = 2` and the general solver otherwise.
pub fn project_auto(c: &ScoreMatrix, capacities: &[usize]) -> Result<ProjectionResult> {
    if c.k() == 2 {
        project_k2(
            c,
            (
                capacities.first().copied().unwrap_or(0),
                capacities.get(1).copied().unwrap_or(0),
            ),
        )
    } else {
        project(c, capacities)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite() {
        assert!(ScoreMatrix::new(1, 2, vec![0.0, f64::NAN]).is_err());
        assert!(ScoreMatrix::new(1, 2, vec![0.0]).is_err());
    }

    #[test]
    fn column_permutation() {
        let c = ScoreMatrix::from_rows(&[vec![1.0, 2.0, 3.0]]).unwrap();
        assert_eq!(c.permute_columns(&[2, 0, 1]).values(), &[3.0, 1.0, 2.0]);
    }

    #[test]
    fn integrality() {
        assert!(ScoreMatrix::from_rows(&[vec![1.0, -4.0]])
            .unwrap()
            .is_integral());
        assert!(!ScoreMatrix::from_rows(&[vec![1.5, 0.0]])
            .unwrap()
            .is_integral());
    }
}
