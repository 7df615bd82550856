//! Exhaustive search over capacity-respecting partitions. Test oracle only.

use super::{check_instance, ScoreMatrix};
use crate::clustering::Clustering;
use crate::error::{Error, Result};

/// Largest number of partitions [`brute_force_project`] will enumerate.
pub const BRUTE_FORCE_LIMIT: u128 = 1_000_000;

#[derive(Debug, Clone)]
pub struct BruteForceResult {
    pub objective: f64,
    /// Every maximizer, in lexicographic label order.
    pub optima: Vec<Clustering>,
    pub enumerated: u64,
}

/// `n! / (pi_1! ... pi_K!)`, saturating.
pub fn multinomial(capacities: &[usize]) -> u128 {
    let mut total = 0u128;
    let mut acc = 1u128;
    for &c in capacities {
        for j in 1..=c as u128 {
            total += 1;
            // acc * total / j stays integral: it is a running binomial product.
            acc = match acc.checked_mul(total) {
                Some(v) => v / j,
                None => return u128::MAX,
            };
        }
    }
    acc
}

pub fn brute_force_project(c: &ScoreMatrix, capacities: &[usize]) -> Result<BruteForceResult> {
    check_instance(c, capacities)?;
    let count = multinomial(capacities);
    if count > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge(format!(
            "{count} partitions exceed the limit of {BRUTE_FORCE_LIMIT}"
        )));
    }

    let mut search = Search {
        c,
        remaining: capacities.to_vec(),
        labels: vec![0; c.n()],
        best: f64::NEG_INFINITY,
        optima: Vec::new(),
        enumerated: 0,
    };
    search.descend(0);

    let optima = search
        .optima
        .into_iter()
        .map(|labels| Clustering::with_capacities(labels, capacities))
        .collect::<Result<Vec<_>>>()?;
    Ok(BruteForceResult {
        objective: search.best,
        optima,
        enumerated: search.enumerated,
    })
}

struct Search<'a> {
    c: &'a ScoreMatrix,
    remaining: Vec<usize>,
    labels: Vec<u32>,
    best: f64,
    optima: Vec<Vec<u32>>,
    enumerated: u64,
}

impl Search<'_> {
    fn descend(&mut self, row: usize) {
        if row == self.c.n() {
            self.enumerated += 1;
            // Summed in row order, exactly like ScoreMatrix::objective.
            let value: f64 = self
                .labels
                .iter()
                .enumerate()
                .map(|(i, &l)| self.c.get(i, l as usize))
                .sum();
            if value > self.best {
                self.best = value;
                self.optima.clear();
            }
            if value == self.best {
                self.optima.push(self.labels.clone());
            }
            return;
        }
        for k in 0..self.remaining.len() {
            if self.remaining[k] == 0 {
                continue;
            }
            self.remaining[k] -= 1;
            self.labels[row] = k as u32;
            self.descend(row + 1);
            self.remaining[k] += 1;
        }
    }
}
