//! Optimality certificates for capacitated assignments.
//!
//! A clustering with groups `I_1..I_K` maximizes `<C, H>` among clusterings
//! with the same group sizes iff there are potentials `w` with
//! `c_ik - c_il >= w_k - w_l` for every `i in I_k` and every other group
//! `l`. Taking the tightest row per group pair, this is the difference
//! constraint system `w_k - w_l <= d_kl` with
//! `d_kl = min_{i in I_k} (c_ik - c_il)`, which is feasible iff the gain
//! graph on the non-empty groups has no negative cycle.

use super::{DualPotential, ScoreMatrix};
use crate::clustering::Clustering;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub feasible: bool,
    pub dual: Option<DualPotential>,
}

/// `d[k][l] = min_{i in I_k} (c_ik - c_il)`; `None` when `k = l` or either
/// group is empty.
pub fn gain_graph(c: &ScoreMatrix, clustering: &Clustering) -> Vec<Vec<Option<f64>>> {
    let k = c.k();
    let sizes = clustering.capacities();
    let mut d = vec![vec![None::<f64>; k]; k];
    for (i, &li) in clustering.labels().iter().enumerate() {
        let a = li as usize;
        let row = c.row(i);
        for b in (0..k).filter(|&b| b != a && sizes[b] > 0) {
            let gain = row[a] - row[b];
            let slot = &mut d[a][b];
            *slot = Some(slot.map_or(gain, |cur: f64| cur.min(gain)));
        }
    }
    d
}

/// Comparison slack: zero for integral scores, `1e-9 max(1, |C|_inf)` otherwise.
pub(crate) fn tolerance(c: &ScoreMatrix) -> f64 {
    if c.is_integral() {
        0.0
    } else {
        1e-9 * c.max_abs().max(1.0)
    }
}

/// Decides whether `clustering` maximizes `<C, H>` among clusterings with its
/// own group sizes, returning the certifying potentials when it does.
pub fn verify_certificate(c: &ScoreMatrix, clustering: &Clustering) -> Result<Certificate> {
    if c.n() != clustering.n() || c.k() != clustering.k() {
        return Err(Error::dim(format!(
            "scores are {}x{}, clustering is {}x{}",
            c.n(),
            c.k(),
            clustering.n(),
            clustering.k()
        )));
    }
    let k = c.k();
    let tol = tolerance(c);
    let d = gain_graph(c, clustering);
    let active: Vec<usize> = (0..k).filter(|&g| clustering.capacities()[g] > 0).collect();

    // Shortest distances from a virtual source joined to every node at cost 0.
    let mut dist = vec![0.0f64; k];
    for _ in 0..=active.len() {
        let mut changed = false;
        for &a in &active {
            for &b in &active {
                if let Some(w) = d[a][b] {
                    if dist[a] + w < dist[b] - tol {
                        dist[b] = dist[a] + w;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let violated = active.iter().any(|&a| {
        active
            .iter()
            .any(|&b| d[a][b].is_some_and(|w| dist[a] + w < dist[b] - tol))
    });
    if violated {
        return Ok(Certificate {
            feasible: false,
            dual: None,
        });
    }

    let shift = active.first().map_or(0.0, |&a| -dist[a]);
    let w = (0..k)
        .map(|g| {
            if clustering.capacities()[g] > 0 {
                -dist[g] - shift + 0.0
            } else {
                0.0
            }
        })
        .collect();
    Ok(Certificate {
        feasible: true,
        dual: Some(DualPotential { w }),
    })
}

/// Like [`verify_certificate`], after checking the clustering's group sizes
/// against `capacities`.
pub fn verify_with_capacities(
    c: &ScoreMatrix,
    clustering: &Clustering,
    capacities: &[usize],
) -> Result<Certificate> {
    clustering.check_structure(capacities)?;
    verify_certificate(c, clustering)
}

/// Checks `w_k - w_l <= d_kl` directly.
pub fn potentials_satisfy(c: &ScoreMatrix, clustering: &Clustering, dual: &DualPotential) -> bool {
    let tol = tolerance(c);
    let d = gain_graph(c, clustering);
    (0..c.k())
        .all(|a| (0..c.k()).all(|b| d[a][b].is_none_or(|gain| dual.w[a] - dual.w[b] <= gain + tol)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scores(rows: &[&[f64]]) -> ScoreMatrix {
        ScoreMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn optimal_assignment_is_certified() {
        let c = scores(&[&[5.0, 0.0], &[4.0, 0.0], &[0.0, 3.0], &[1.0, 0.0]]);
        let h = Clustering::from_labels(vec![0, 0, 1, 1], 2).unwrap();
        let cert = verify_certificate(&c, &h).unwrap();
        assert!(cert.feasible);
        let dual = cert.dual.unwrap();
        assert_eq!(dual.w[0], 0.0);
        assert!(potentials_satisfy(&c, &h, &dual));
    }

    #[test]
    fn swapped_rows_are_rejected() {
        let c = scores(&[&[5.0, 0.0], &[4.0, 0.0], &[0.0, 3.0], &[1.0, 0.0]]);
        let h = Clustering::from_labels(vec![0, 1, 0, 1], 2).unwrap();
        assert!(!verify_certificate(&c, &h).unwrap().feasible);
    }

    #[test]
    fn degenerate_scores_accept_everything() {
        let c = ScoreMatrix::zeros(6, 3);
        for labels in [vec![0, 0, 1, 1, 2, 2], vec![2, 1, 0, 2, 1, 0]] {
            let h = Clustering::from_labels(labels, 3).unwrap();
            let cert = verify_certificate(&c, &h).unwrap();
            assert!(cert.feasible);
            assert_eq!(cert.dual.unwrap().w, vec![0.0; 3]);
        }
    }

    #[test]
    fn empty_group_is_skipped() {
        let c = scores(&[&[1.0, 0.0, 5.0], &[0.0, 1.0, 5.0]]);
        let h = Clustering::from_labels(vec![0, 1], 3).unwrap();
        assert!(verify_certificate(&c, &h).unwrap().feasible);
    }

    #[test]
    fn capacity_mismatch_is_structural() {
        let c = ScoreMatrix::zeros(2, 2);
        let h = Clustering::from_labels(vec![0, 0], 2).unwrap();
        assert!(matches!(
            verify_with_capacities(&c, &h, &[1, 1]),
            Err(Error::Structural(_))
        ));
    }
}
