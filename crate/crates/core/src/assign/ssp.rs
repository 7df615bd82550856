//! Successive shortest paths for the capacitated assignment problem.
//!
//! Rows are inserted one at a time. After each insertion the partial
//! assignment is optimal for the rows seen so far, so the residual network
//! has no negative cycle and the next row can be routed along a shortest
//! path. Because every row is a unit source, the residual network collapses
//! onto the `K` column nodes: the arc `k -> l` means "move the cheapest row
//! currently in `k` over to `l`", with cost `min_{j in k} (c_jk - c_jl)`.
//! Those minima are kept in one ordered set per column pair, and shortest
//! paths are computed by Bellman-Ford over `K` nodes.
//!
//! Ties are broken deterministically: among equally cheap moves the lowest
//! row index moves, and among equally short paths the lowest column index
//! wins.

use std::collections::BTreeSet;

use ordered_float::OrderedFloat;

use super::{check_instance, verify_certificate, ProjectionResult, ScoreMatrix};
use crate::clustering::Clustering;
use crate::error::{Error, Result};

const UNASSIGNED: u32 = u32::MAX;

type MoveKey = (OrderedFloat<f64>, u32);

struct Solver<'a> {
    c: &'a ScoreMatrix,
    k: usize,
    capacities: &'a [usize],
    labels: Vec<u32>,
    counts: Vec<usize>,
    /// `moves[a * k + b]` holds `(c_ja - c_jb, j)` for every row `j` in `a`.
    moves: Vec<BTreeSet<MoveKey>>,
    dist: Vec<f64>,
    pred: Vec<usize>,
    eps: f64,
}

impl<'a> Solver<'a> {
    fn new(c: &'a ScoreMatrix, capacities: &'a [usize]) -> Self {
        let k = c.k();
        let eps = if c.is_integral() {
            0.0
        } else {
            1e-12 * c.max_abs().max(1.0)
        };
        Solver {
            c,
            k,
            capacities,
            labels: vec![UNASSIGNED; c.n()],
            counts: vec![0; k],
            moves: (0..k * k).map(|_| BTreeSet::new()).collect(),
            dist: vec![f64::INFINITY; k],
            pred: vec![usize::MAX; k],
            eps,
        }
    }

    fn place(&mut self, row: usize, col: usize) {
        let r = self.c.row(row);
        for other in (0..self.k).filter(|&o| o != col && self.capacities[o] > 0) {
            self.moves[col * self.k + other].insert((OrderedFloat(r[col] - r[other]), row as u32));
        }
        self.labels[row] = col as u32;
        self.counts[col] += 1;
    }

    fn unplace(&mut self, row: usize) {
        let col = self.labels[row] as usize;
        let r = self.c.row(row);
        for other in (0..self.k).filter(|&o| o != col && self.capacities[o] > 0) {
            self.moves[col * self.k + other].remove(&(OrderedFloat(r[col] - r[other]), row as u32));
        }
        self.labels[row] = UNASSIGNED;
        self.counts[col] -= 1;
    }

    fn cheapest_move(&self, from: usize, to: usize) -> Option<MoveKey> {
        self.moves[from * self.k + to].first().copied()
    }

    /// Routes `row` into the assignment along a shortest augmenting path.
    fn insert(&mut self, row: usize) -> Result<()> {
        let k = self.k;
        let r = self.c.row(row);
        for col in 0..k {
            self.dist[col] = if self.capacities[col] > 0 {
                -r[col]
            } else {
                f64::INFINITY
            };
            self.pred[col] = usize::MAX;
        }

        for _ in 0..k {
            let mut changed = false;
            for a in 0..k {
                if !self.dist[a].is_finite() || self.counts[a] == 0 {
                    continue;
                }
                for b in 0..k {
                    if b == a || self.capacities[b] == 0 {
                        continue;
                    }
                    if let Some((cost, _)) = self.cheapest_move(a, b) {
                        let cand = self.dist[a] + cost.0;
                        if cand < self.dist[b] - self.eps {
                            self.dist[b] = cand;
                            self.pred[b] = a;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }

        let target = (0..k)
            .filter(|&col| self.counts[col] < self.capacities[col])
            .min_by(|&x, &y| self.dist[x].total_cmp(&self.dist[y]).then(x.cmp(&y)))
            .ok_or_else(|| Error::Structural("no column has spare capacity".into()))?;

        let mut path = vec![target];
        while let Some(&last) = path.last() {
            let p = self.pred[last];
            if p == usize::MAX {
                break;
            }
            if path.len() > k {
                return Err(Error::Structural(
                    "cycle in shortest-path tree (numerically degenerate scores)".into(),
                ));
            }
            path.push(p);
        }
        path.reverse();

        // Pick every moving row before touching the ordered sets.
        let movers: Vec<(usize, usize)> = path
            .windows(2)
            .map(|w| {
                let (_, j) = self
                    .cheapest_move(w[0], w[1])
                    .expect("arc on a shortest path exists");
                (j as usize, w[1])
            })
            .collect();
        for (j, to) in movers {
            self.unplace(j);
            self.place(j, to);
        }
        self.place(row, path[0]);
        Ok(())
    }
}

/// Maximizes `<C, H>` over clusterings with group sizes `capacities`.
///
/// Returns the assignment, its objective, and a dual potential proving it
/// optimal. Groups with capacity zero are allowed and stay empty.
pub fn project(c: &ScoreMatrix, capacities: &[usize]) -> Result<ProjectionResult> {
    check_instance(c, capacities)?;
    let mut solver = Solver::new(c, capacities);
    for row in 0..c.n() {
        solver.insert(row)?;
    }
    let clustering = Clustering::with_capacities(solver.labels, capacities)?;
    let cert = verify_certificate(c, &clustering)?;
    let dual = cert.dual.ok_or_else(|| {
        Error::Structural("solver output failed its optimality certificate".into())
    })?;
    Ok(ProjectionResult {
        objective: c.objective(&clustering),
        clustering,
        dual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scores(rows: &[&[f64]]) -> ScoreMatrix {
        ScoreMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn four_by_two_example() {
        let c = scores(&[&[5.0, 0.0], &[4.0, 0.0], &[0.0, 3.0], &[1.0, 0.0]]);
        let res = project(&c, &[2, 2]).unwrap();
        assert_eq!(res.clustering.labels(), &[0, 0, 1, 1]);
        assert_eq!(res.objective, 12.0);
    }

    #[test]
    fn identity_scores() {
        let c = scores(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        let res = project(&c, &[1, 1, 1]).unwrap();
        assert_eq!(res.clustering.labels(), &[0, 1, 2]);
        assert_eq!(res.objective, 3.0);
    }

    #[test]
    fn clustering_matrix_is_its_own_projection() {
        let h = Clustering::from_labels(vec![2, 0, 1, 1, 0, 2], 3).unwrap();
        let res = project(&ScoreMatrix::from(&h), &[2, 2, 2]).unwrap();
        assert_eq!(res.clustering, h);
        assert_eq!(res.objective, 6.0);
    }

    #[test]
    fn empty_groups_stay_empty() {
        let c = scores(&[&[0.0, 9.0, 1.0], &[0.0, 9.0, 2.0], &[3.0, 9.0, 0.0]]);
        let res = project(&c, &[1, 0, 2]).unwrap();
        assert_eq!(res.clustering.capacities(), &[1, 0, 2]);
        assert_eq!(res.clustering.labels(), &[2, 2, 0]);
    }

    #[test]
    fn unbalanced_capacities() {
        let c = scores(&[&[3.0, 0.0], &[2.0, 0.0], &[1.0, 0.0], &[0.0, 0.0]]);
        let res = project(&c, &[3, 1]).unwrap();
        assert_eq!(res.clustering.labels(), &[0, 0, 0, 1]);
    }

    #[test]
    fn bad_capacities() {
        let c = ScoreMatrix::zeros(3, 2);
        assert!(project(&c, &[1, 1]).is_err());
        assert!(project(&c, &[1, 1, 1]).is_err());
    }

    #[test]
    fn all_equal_scores_follow_tie_rule() {
        let c = ScoreMatrix::zeros(4, 2);
        let res = project(&c, &[2, 2]).unwrap();
        assert_eq!(res.objective, 0.0);
        assert_eq!(res.clustering.labels(), &[0, 0, 1, 1]);
        assert!(res.dual.w.iter().all(|&w| w == 0.0));
    }
}
