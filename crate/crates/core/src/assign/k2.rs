//! Two-group projection by selection.
//!
//! With `K = 2` the assignment is decided by `c_i1 - c_i2` alone: the `m1`
//! rows with the largest difference go to the first group. Ties at the
//! threshold are resolved lowest index first.

use std::cmp::Ordering;

use super::{check_instance, verify_certificate, ProjectionResult, ScoreMatrix};
use crate::clustering::Clustering;
use crate::error::{Error, Result};

pub fn project_k2(c: &ScoreMatrix, capacities: (usize, usize)) -> Result<ProjectionResult> {
    if c.k() != 2 {
        return Err(Error::param(format!(
            "two-group projection called with K={}",
            c.k()
        )));
    }
    let (m1, m2) = capacities;
    check_instance(c, &[m1, m2])?;

    let diff: Vec<f64> = (0..c.n()).map(|i| c.get(i, 0) - c.get(i, 1)).collect();
    let by_rank =
        |&a: &usize, &b: &usize| -> Ordering { diff[b].total_cmp(&diff[a]).then(a.cmp(&b)) };
    let mut order: Vec<usize> = (0..c.n()).collect();
    if m1 > 0 && m1 < order.len() {
        order.select_nth_unstable_by(m1 - 1, by_rank);
    }

    let mut labels = vec![1u32; c.n()];
    for &i in &order[..m1] {
        labels[i] = 0;
    }
    let clustering = Clustering::with_capacities(labels, &[m1, m2])?;
    let dual = verify_certificate(c, &clustering)?
        .dual
        .ok_or_else(|| Error::Structural("selection failed its optimality certificate".into()))?;
    Ok(ProjectionResult {
        objective: c.objective(&clustering),
        clustering,
        dual,
    })
}
