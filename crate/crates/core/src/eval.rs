//! Recovery metrics up to a relabelling of communities.

use crate::clustering::Clustering;
use crate::error::{Error, Result};

/// Best label matching between an estimate and the ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct Alignment {
    /// `permutation[k]` is the truth label matched to estimated label `k`.
    pub permutation: Vec<usize>,
    /// Misclassified vertices under the best matching.
    pub mismatches: usize,
    /// `min_Q ||H - H* Q||_F = sqrt(2 * mismatches)`.
    pub frobenius: f64,
}

/// `N[k][l] = |I_k(h) ∩ I_l(truth)|`.
pub fn confusion(h: &Clustering, truth: &Clustering) -> Result<Vec<Vec<u64>>> {
    if h.n() != truth.n() || h.k() != truth.k() {
        return Err(Error::dim(format!(
            "estimate has n={}, K={}; truth has n={}, K={}",
            h.n(),
            h.k(),
            truth.n(),
            truth.k()
        )));
    }
    let k = h.k();
    let mut n = vec![vec![0u64; k]; k];
    for (&a, &b) in h.labels().iter().zip(truth.labels()) {
        n[a as usize][b as usize] += 1;
    }
    Ok(n)
}

pub fn align(h: &Clustering, truth: &Clustering) -> Result<Alignment> {
    let n = confusion(h, truth)?;
    let (permutation, agreement) = max_weight_matching(&n);
    let mismatches = h.n() - agreement as usize;
    Ok(Alignment {
        permutation,
        mismatches,
        frobenius: ((2 * mismatches) as f64).sqrt(),
    })
}

pub fn exact_recovery(h: &Clustering, truth: &Clustering) -> Result<bool> {
    Ok(align(h, truth)?.mismatches == 0)
}

pub fn misclassified(h: &Clustering, truth: &Clustering) -> Result<usize> {
    Ok(align(h, truth)?.mismatches)
}

/// Hungarian algorithm (shortest augmenting paths with potentials) on a
/// square weight matrix, maximizing total weight. Returns the column
/// assigned to each row and the optimal total.
pub fn max_weight_matching(weights: &[Vec<u64>]) -> (Vec<usize>, u64) {
    let k = weights.len();
    if k == 0 {
        return (Vec::new(), 0);
    }
    let top = weights.iter().flatten().copied().max().unwrap_or(0) as i64;
    // Minimize top - w, 1-based with a dummy row/column 0.
    let cost = |i: usize, j: usize| top - weights[i - 1][j - 1] as i64;
    let mut u = vec![0i64; k + 1];
    let mut v = vec![0i64; k + 1];
    let mut row_of = vec![0usize; k + 1];
    let mut way = vec![0usize; k + 1];

    for i in 1..=k {
        row_of[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![i64::MAX; k + 1];
        let mut used = vec![false; k + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = i64::MAX;
            let mut j1 = 0usize;
            for j in 1..=k {
                if used[j] {
                    continue;
                }
                let cur = cost(i0, j) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=k {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0usize; k];
    for j in 1..=k {
        assignment[row_of[j] - 1] = j - 1;
    }
    let total = assignment
        .iter()
        .enumerate()
        .map(|(i, &j)| weights[i][j])
        .sum();
    (assignment, total)
}
