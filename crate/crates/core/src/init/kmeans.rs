//! Lloyd's algorithm with k-means++ seeding.

use rand::Rng as _;

use crate::rng::{derive_seed, rng_from_seed, Rng};

const MAX_LLOYD_ITERATIONS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct KMeans {
    /// Row-major `k x dim` centers.
    pub centers: Vec<f64>,
    pub assignment: Vec<usize>,
    /// Within-cluster sum of squares.
    pub inertia: f64,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Clusters the rows of a row-major `n x dim` point matrix, keeping the best
/// of `restarts` seeded runs.
pub fn kmeans(points: &[f64], dim: usize, k: usize, restarts: usize, seed: u64) -> KMeans {
    (0..restarts.max(1))
        .map(|r| {
            let mut rng = rng_from_seed(derive_seed(seed, &[r as u64]));
            lloyd(points, dim, k, &mut rng)
        })
        .fold(None::<KMeans>, |best, run| match best {
            Some(b) if b.inertia <= run.inertia => Some(b),
            _ => Some(run),
        })
        .expect("at least one restart")
}

fn seed_centers(points: &[f64], dim: usize, k: usize, rng: &mut Rng) -> Vec<f64> {
    let n = points.len() / dim;
    let row = |i: usize| &points[i * dim..(i + 1) * dim];
    let mut centers = Vec::with_capacity(k * dim);
    centers.extend_from_slice(row(rng.random_range(0..n)));
    let mut d2: Vec<f64> = (0..n).map(|i| sq_dist(row(i), &centers[..dim])).collect();
    for _ in 1..k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut chosen = n - 1;
            for (i, &d) in d2.iter().enumerate() {
                if target < d {
                    chosen = i;
                    break;
                }
                target -= d;
            }
            chosen
        } else {
            rng.random_range(0..n)
        };
        let start = centers.len();
        centers.extend_from_slice(row(pick));
        for (i, d) in d2.iter_mut().enumerate() {
            *d = d.min(sq_dist(row(i), &centers[start..start + dim]));
        }
    }
    centers
}

fn lloyd(points: &[f64], dim: usize, k: usize, rng: &mut Rng) -> KMeans {
    let n = points.len() / dim;
    let row = |i: usize| &points[i * dim..(i + 1) * dim];
    let mut centers = seed_centers(points, dim, k, rng);
    let mut assignment = vec![usize::MAX; n];

    for _ in 0..MAX_LLOYD_ITERATIONS {
        let mut changed = false;
        for (i, slot) in assignment.iter_mut().enumerate() {
            let best = (0..k)
                .min_by(|&a, &b| {
                    sq_dist(row(i), &centers[a * dim..(a + 1) * dim])
                        .total_cmp(&sq_dist(row(i), &centers[b * dim..(b + 1) * dim]))
                })
                .expect("k >= 1");
            if *slot != best {
                *slot = best;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        let mut sums = vec![0.0; k * dim];
        let mut counts = vec![0usize; k];
        for (i, &c) in assignment.iter().enumerate() {
            counts[c] += 1;
            for (s, x) in sums[c * dim..(c + 1) * dim].iter_mut().zip(row(i)) {
                *s += x;
            }
        }
        for c in 0..k {
            // An emptied cluster keeps its previous center.
            if counts[c] > 0 {
                for d in 0..dim {
                    centers[c * dim + d] = sums[c * dim + d] / counts[c] as f64;
                }
            }
        }
    }

    let inertia = assignment
        .iter()
        .enumerate()
        .map(|(i, &c)| sq_dist(row(i), &centers[c * dim..(c + 1) * dim]))
        .sum();
    KMeans {
        centers,
        assignment,
        inertia,
    }
}
