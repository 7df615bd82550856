//! Adjacency spectral embedding followed by k-means and a capacity-respecting
//! rebalance.

use nalgebra::{DMatrix, SymmetricEigen};
use rand_distr::{Distribution, StandardNormal};

use super::kmeans::kmeans;
use super::random_init;
use crate::adjacency::SparseAdjacency;
use crate::assign::{project_auto, ScoreMatrix};
use crate::clustering::{check_capacities, Clustering};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng_from_seed};

pub const EIGEN_TOLERANCE: f64 = 1e-6;
pub const MAX_SWEEPS: usize = 500;
const KMEANS_RESTARTS: usize = 10;
/// Extra block columns carried beyond the `K` wanted eigenvectors.
const OVERSAMPLE: usize = 6;

/// Leading eigenpairs of a symmetric adjacency matrix.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    /// Descending.
    pub values: Vec<f64>,
    /// `n x K`, one eigenvector per column.
    pub vectors: DMatrix<f64>,
    /// `||A V - V diag(values)||_F / ||A||_F`.
    pub residual: f64,
    pub sweeps: usize,
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct SpectralInit {
    pub clustering: Clustering,
    /// Set when the eigensolver did not converge and the result came from
    /// [`random_init`] instead.
    pub fell_back: bool,
    pub eigen: EigenPairs,
}

fn sparse_times(a: &SparseAdjacency, v: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(v.nrows(), v.ncols());
    for c in 0..v.ncols() {
        let src = v.column(c);
        let mut dst = out.column_mut(c);
        for i in 0..a.n() {
            dst[i] = a.neighbors(i).iter().map(|&j| src[j as usize]).sum();
        }
    }
    out
}

fn orthonormalize(m: DMatrix<f64>) -> DMatrix<f64> {
    m.qr().q()
}

/// Top-`k` algebraic eigenpairs by block subspace iteration with
/// Rayleigh-Ritz extraction.
pub fn top_eigenvectors(a: &SparseAdjacency, k: usize, seed: u64) -> Result<EigenPairs> {
    let n = a.n();
    if k == 0 || k > n {
        return Err(Error::param(format!(
            "cannot extract {k} eigenvectors of an {n}x{n} matrix"
        )));
    }
    let block = (k + OVERSAMPLE).min(n);
    let norm = (a.nnz() as f64).sqrt();
    let mut rng = rng_from_seed(seed);
    let start = DMatrix::from_fn(n, block, |_, _| StandardNormal.sample(&mut rng));
    let mut v = orthonormalize(start);

    let mut last = None;
    for sweep in 1..=MAX_SWEEPS {
        let av = sparse_times(a, &v);
        let t = v.transpose() * &av;
        let t = (&t + t.transpose()) * 0.5;
        let eig = SymmetricEigen::new(t);
        let mut order: Vec<usize> = (0..block).collect();
        order.sort_by(|&x, &y| eig.eigenvalues[y].total_cmp(&eig.eigenvalues[x]));
        let rot = DMatrix::from_fn(block, block, |r, c| eig.eigenvectors[(r, order[c])]);
        let ritz_v = &v * &rot;
        let ritz_av = &av * &rot;
        let values: Vec<f64> = order.iter().map(|&o| eig.eigenvalues[o]).collect();

        let lead_v = ritz_v.columns(0, k).into_owned();
        let mut resid = ritz_av.columns(0, k).into_owned();
        for c in 0..k {
            resid.column_mut(c).axpy(-values[c], &lead_v.column(c), 1.0);
        }
        let residual = if norm > 0.0 { resid.norm() / norm } else { 0.0 };
        let converged = residual <= EIGEN_TOLERANCE;
        let pairs = EigenPairs {
            values: values[..k].to_vec(),
            vectors: lead_v,
            residual,
            sweeps: sweep,
            converged,
        };
        if converged {
            return Ok(pairs);
        }
        last = Some(pairs);
        v = orthonormalize(ritz_av);
    }
    Ok(last.expect("at least one sweep"))
}

/// Embeds vertices with the leading `K` adjacency eigenvectors, clusters the
/// embedding with k-means, and projects `-(squared distance to center)` onto
/// the clusterings with group sizes `capacities`.
pub fn spectral_init(
    a: &SparseAdjacency,
    k: usize,
    capacities: &[usize],
    seed: u64,
) -> Result<SpectralInit> {
    let n = a.n();
    if capacities.len() != k {
        return Err(Error::dim("capacity vector length differs from K"));
    }
    check_capacities(n, capacities)?;
    let eigen = top_eigenvectors(a, k, derive_seed(seed, &[0]))?;
    if !eigen.converged {
        let clustering = random_init(n, k, capacities, derive_seed(seed, &[2]))?;
        return Ok(SpectralInit {
            clustering,
            fell_back: true,
            eigen,
        });
    }

    let points: Vec<f64> = (0..n)
        .flat_map(|i| (0..k).map(move |c| (i, c)))
        .map(|(i, c)| eigen.vectors[(i, c)])
        .collect();
    let km = kmeans(&points, k, k, KMEANS_RESTARTS, derive_seed(seed, &[1]));

    let mut scores = Vec::with_capacity(n * k);
    for i in 0..n {
        let p = &points[i * k..(i + 1) * k];
        for c in 0..k {
            let center = &km.centers[c * k..(c + 1) * k];
            let d2: f64 = p.iter().zip(center).map(|(x, y)| (x - y) * (x - y)).sum();
            scores.push(-d2);
        }
    }
    let clustering = project_auto(&ScoreMatrix::new(n, k, scores)?, capacities)?.clustering;
    Ok(SpectralInit {
        clustering,
        fell_back: false,
        eigen,
    })
}
