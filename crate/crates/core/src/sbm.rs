//! The symmetric stochastic block model in the logarithmic degree regime.

use rand::seq::SliceRandom;
use rand::Rng as _;
use rand_distr::{Distribution, Geometric};

use crate::adjacency::SparseAdjacency;
use crate::clustering::{balanced_capacities, Clustering};
use crate::error::{Error, Result};
use crate::rng::{rng_from_seed, Rng};

/// Model dimensions and edge probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SbmParams {
    pub n: usize,
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    /// Within-community edge probability.
    pub p: f64,
    /// Across-community edge probability.
    pub q: f64,
    /// Whether diagonal entries are drawn (as Bernoulli(p)) or forced to zero.
    pub self_loops: bool,
}

impl SbmParams {
    /// Balanced model with `p = alpha ln n / n`, `q = beta ln n / n`.
    pub fn new(n: usize, k: usize, alpha: f64, beta: f64) -> Result<Self> {
        balanced_capacities(n, k)?;
        let (p, q) = logarithmic_rates(alpha, beta, n)?;
        Ok(SbmParams {
            n,
            k,
            alpha,
            beta,
            p,
            q,
            self_loops: true,
        })
    }

    /// Like [`SbmParams::new`] but accepts `alpha = 0` or `beta = 0`, which the
    /// phase grid needs at its lower edge.
    pub fn with_nonnegative_rates(n: usize, k: usize, alpha: f64, beta: f64) -> Result<Self> {
        balanced_capacities(n, k)?;
        if !(alpha >= 0.0 && beta >= 0.0 && alpha.is_finite() && beta.is_finite()) || n < 2 {
            return Err(Error::param(format!(
                "rates must be finite and non-negative (alpha={alpha}, beta={beta}, n={n})"
            )));
        }
        let scale = (n as f64).ln() / n as f64;
        Ok(SbmParams {
            n,
            k,
            alpha,
            beta,
            p: (alpha * scale).min(1.0),
            q: (beta * scale).min(1.0),
            self_loops: true,
        })
    }

    /// Model given directly by its probabilities; `alpha`/`beta` are back-filled.
    pub fn from_probabilities(n: usize, k: usize, p: f64, q: f64) -> Result<Self> {
        balanced_capacities(n, k)?;
        if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&q) {
            return Err(Error::param(format!(
                "probabilities out of [0,1]: p={p}, q={q}"
            )));
        }
        let scale = if n >= 2 {
            n as f64 / (n as f64).ln()
        } else {
            f64::NAN
        };
        Ok(SbmParams {
            n,
            k,
            alpha: p * scale,
            beta: q * scale,
            p,
            q,
            self_loops: true,
        })
    }

    pub fn without_self_loops(mut self) -> Self {
        self.self_loops = false;
        self
    }

    /// Community size `m = n / K`.
    pub fn m(&self) -> usize {
        self.n / self.k
    }

    /// `sqrt(alpha) - sqrt(beta) - sqrt(K)`; positive above the exact-recovery
    /// threshold.
    pub fn threshold_margin(&self) -> f64 {
        threshold_margin(self.alpha, self.beta, self.k)
    }

    /// Expected number of stored nonzeros, counting both orientations of an
    /// edge and diagonal entries once.
    pub fn expected_nnz(&self) -> f64 {
        let n = self.n as f64;
        let m = self.m() as f64;
        let diag = if self.self_loops { n * self.p } else { 0.0 };
        n * (m - 1.0) * self.p + n * (n - m) * self.q + diag
    }
}

pub fn threshold_margin(alpha: f64, beta: f64, k: usize) -> f64 {
    alpha.sqrt() - beta.sqrt() - (k as f64).sqrt()
}

/// `(p, q) = (min(1, alpha ln n / n), min(1, beta ln n / n))`, natural log.
pub fn logarithmic_rates(alpha: f64, beta: f64, n: usize) -> Result<(f64, f64)> {
    if !(alpha > 0.0 && alpha.is_finite()) || !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::param(format!(
            "alpha and beta must be positive and finite (alpha={alpha}, beta={beta})"
        )));
    }
    if n < 2 {
        return Err(Error::param(format!("need n >= 2, got {n}")));
    }
    let scale = (n as f64).ln() / n as f64;
    Ok(((alpha * scale).min(1.0), (beta * scale).min(1.0)))
}

/// Contiguous balanced partition `(0,..,0,1,..,1,..)`.
pub fn block_truth(n: usize, k: usize) -> Result<Clustering> {
    Clustering::blocks(&balanced_capacities(n, k)?)
}

/// Balanced planted partition: the block layout under a seeded random vertex
/// permutation.
pub fn planted_truth(n: usize, k: usize, seed: u64) -> Result<Clustering> {
    let blocks = block_truth(n, k)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng_from_seed(seed));
    blocks.permute_vertices(&order)
}

/// Draws a symmetric adjacency matrix: for every pair `i <= j` the entry is
/// Bernoulli(p) when `i` and `j` share a community and Bernoulli(q)
/// otherwise, mirrored to `(j, i)`.
///
/// Pairs are visited group by group with geometric skips between successes,
/// so the cost is proportional to the number of edges rather than `n^2`.
pub fn sample_graph(params: &SbmParams, truth: &Clustering, seed: u64) -> Result<SparseAdjacency> {
    if truth.n() != params.n || truth.k() != params.k {
        return Err(Error::dim(format!(
            "truth has n={}, K={}; model has n={}, K={}",
            truth.n(),
            truth.k(),
            params.n,
            params.k
        )));
    }
    let mut rng = rng_from_seed(seed);
    let groups = truth.groups();
    let mut entries: Vec<(u32, u32)> = Vec::new();

    for (g, members) in groups.iter().enumerate() {
        let diag = params.self_loops;
        sample_triangle(&mut rng, members, params.p, diag, &mut entries);
        for other in &groups[g + 1..] {
            sample_rectangle(&mut rng, members, other, params.q, &mut entries);
        }
    }

    let mut sym = Vec::with_capacity(entries.len() * 2);
    for &(i, j) in &entries {
        sym.push((i, j));
        if i != j {
            sym.push((j, i));
        }
    }
    sym.sort_unstable();
    Ok(SparseAdjacency::from_sorted_entries(params.n, &sym))
}

/// Number of failures before the next success, or `None` when `p = 0`.
fn skipper(p: f64) -> Option<Geometric> {
    if p <= 0.0 {
        None
    } else {
        Some(Geometric::new(p.min(1.0)).expect("probability in (0, 1]"))
    }
}

/// Pairs `(a, b)` with `a < b` (or `a <= b` with the diagonal) inside one group.
fn sample_triangle(
    rng: &mut Rng,
    members: &[usize],
    p: f64,
    diag: bool,
    out: &mut Vec<(u32, u32)>,
) {
    let Some(geo) = skipper(p) else { return };
    let s = members.len() as u64;
    // Row `a` covers columns `a + offset .. s`.
    let offset = if diag { 0 } else { 1 };
    let mut a = 0u64;
    let mut b = offset;
    loop {
        let mut skip = geo.sample(rng);
        // Walk the skip across row boundaries.
        while a < s {
            let remaining = s.saturating_sub(b);
            if skip < remaining {
                b += skip;
                break;
            }
            skip -= remaining;
            a += 1;
            b = a + offset;
        }
        if a >= s || b >= s {
            return;
        }
        out.push((members[a as usize] as u32, members[b as usize] as u32));
        b += 1;
        if b >= s {
            a += 1;
            b = a + offset;
        }
    }
}

fn sample_rectangle(
    rng: &mut Rng,
    rows: &[usize],
    cols: &[usize],
    q: f64,
    out: &mut Vec<(u32, u32)>,
) {
    let Some(geo) = skipper(q) else { return };
    let total = rows.len() as u64 * cols.len() as u64;
    let width = cols.len() as u64;
    let mut pos = 0u64;
    loop {
        pos = pos.saturating_add(geo.sample(rng));
        if pos >= total {
            return;
        }
        let (r, c) = ((pos / width) as usize, (pos % width) as usize);
        let (i, j) = (rows[r], cols[c]);
        out.push((i.min(j) as u32, i.max(j) as u32));
        pos += 1;
    }
}

/// Uniformly random label vector, for tests that need arbitrary clusterings.
pub fn random_labels(n: usize, k: usize, rng: &mut Rng) -> Vec<u32> {
    (0..n).map(|_| rng.random_range(0..k as u32)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rates_examples() {
        let (p, q) = logarithmic_rates(18.0, 4.0, 6000).unwrap();
        assert!((p - 0.026_098_6).abs() < 1e-7, "{p}");
        assert!((q - 0.005_799_7).abs() < 1e-7, "{q}");

        let (p, q) = logarithmic_rates(1e6, 1.0, 10).unwrap();
        assert_eq!(p, 1.0);
        assert!((q - 0.230_258_5).abs() < 1e-7);

        let (p, _) = logarithmic_rates(30.0, 1.0, 100_000).unwrap();
        assert!(p < 1.0);
    }

    #[test]
    fn rates_reject_bad_input() {
        assert!(logarithmic_rates(0.0, 1.0, 10).is_err());
        assert!(logarithmic_rates(1.0, -1.0, 10).is_err());
        assert!(logarithmic_rates(1.0, 1.0, 1).is_err());
    }

    #[test]
    fn truth_layouts() {
        assert_eq!(block_truth(6, 3).unwrap().labels(), &[0, 0, 1, 1, 2, 2]);
        for seed in 0..10 {
            assert_eq!(planted_truth(6, 3, seed).unwrap().capacities(), &[2, 2, 2]);
        }
        assert_eq!(
            planted_truth(300, 3, 9).unwrap(),
            planted_truth(300, 3, 9).unwrap()
        );
        assert!(planted_truth(7, 3, 0).is_err());
    }

    #[test]
    fn degenerate_probabilities() {
        let truth = block_truth(4, 2).unwrap();
        let params = SbmParams::from_probabilities(4, 2, 1.0, 0.0).unwrap();
        let a = sample_graph(&params, &truth, 1).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(
                    a.contains(i, j),
                    truth.label(i) == truth.label(j),
                    "({i},{j})"
                );
            }
        }
        let empty = SbmParams::from_probabilities(4, 2, 0.0, 0.0).unwrap();
        assert_eq!(sample_graph(&empty, &truth, 1).unwrap().nnz(), 0);

        let no_loops = params.without_self_loops();
        let a = sample_graph(&no_loops, &truth, 1).unwrap();
        assert_eq!(a.self_loops(), 0);
        assert_eq!(a.nnz(), 4);
    }

    #[test]
    fn full_cross_blocks() {
        let truth = block_truth(6, 3).unwrap();
        let params = SbmParams::from_probabilities(6, 3, 0.0, 1.0).unwrap();
        let a = sample_graph(&params, &truth, 3).unwrap();
        assert_eq!(a.nnz(), 6 * 4);
        assert!(a.is_symmetric());
    }

    #[test]
    fn dimension_mismatch() {
        let truth = block_truth(6, 3).unwrap();
        let params = SbmParams::new(9, 3, 5.0, 1.0).unwrap();
        assert!(sample_graph(&params, &truth, 0).is_err());
    }
}
