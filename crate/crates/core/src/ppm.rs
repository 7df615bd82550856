//! The projected power method.
//!
//! Starting from any clustering `H0`, the method first projects `H0` onto the
//! clusterings with the target group sizes and then repeats
//! `H <- T(A H)`, where `T` is the exact projection of [`crate::assign`].

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::adjacency::SparseAdjacency;
use crate::assign::{project, project_auto, verify_certificate, ScoreMatrix};
use crate::clustering::{check_capacities, Clustering};
use crate::error::{Error, Result};
use crate::eval::align;

/// Rows per parallel chunk in [`score`].
const SCORE_CHUNK_ROWS: usize = 1024;

/// `C = A H`: `C[i][k]` counts the neighbours of `i` labelled `k`.
pub fn score(a: &SparseAdjacency, h: &Clustering) -> Result<ScoreMatrix> {
    if a.n() != h.n() {
        return Err(Error::dim(format!(
            "adjacency has n={}, clustering has n={}",
            a.n(),
            h.n()
        )));
    }
    let k = h.k();
    let labels = h.labels();
    let mut c = ScoreMatrix::zeros(a.n(), k);
    c.values_mut()
        .par_chunks_mut(SCORE_CHUNK_ROWS * k)
        .enumerate()
        .for_each(|(chunk, out)| {
            let first = chunk * SCORE_CHUNK_ROWS;
            for (r, row) in out.chunks_mut(k).enumerate() {
                for &j in a.neighbors(first + r) {
                    row[labels[j as usize] as usize] += 1.0;
                }
            }
        });
    Ok(c)
}

/// One projected power step `T(A H)`.
pub fn power_step(a: &SparseAdjacency, h: &Clustering, capacities: &[usize]) -> Result<Clustering> {
    let c = score(a, h)?;
    Ok(project_auto(&c, capacities)?.clustering)
}

/// `<A H, H>`, the likelihood objective.
pub fn objective(a: &SparseAdjacency, h: &Clustering) -> Result<f64> {
    Ok(score(a, h)?.objective(h))
}

/// `ceil(2 ln ln n) + ceil(2 ln n / ln ln n) + 2`.
pub fn theorem_budget(n: usize) -> Result<usize> {
    if n < 16 {
        return Err(Error::param(format!(
            "iteration budget needs n >= 16, got {n}; set max_iterations explicitly"
        )));
    }
    let ln = (n as f64).ln();
    let lnln = ln.ln();
    Ok((2.0 * lnln).ceil() as usize + (2.0 * ln / lnln).ceil() as usize + 2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stopping {
    /// Run exactly `max_iterations` steps.
    FixedBudget,
    /// Stop at iterate `H^k`, `k >= window + 1`, when some `H^l` with
    /// `k - window <= l < k` satisfies `||H^k - H^l||_F <= tol`.
    CycleDetect { window: usize, tol: f64 },
    /// Stop as soon as an iterate equals the supplied truth up to relabelling.
    TruthHit,
}

impl Stopping {
    pub fn cycle() -> Self {
        Stopping::CycleDetect {
            window: 5,
            tol: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Upper bound on power steps (the initial rebalancing is not counted).
    pub max_iterations: usize,
    pub stopping: Stopping,
    pub record_trajectory: bool,
    /// Re-check every projection with its optimality certificate.
    pub verify_certificates: bool,
}

impl RunConfig {
    /// `max(theorem_budget(n), 30)` steps (30 when `n < 16`) with cycle detection.
    pub fn for_n(n: usize) -> Self {
        RunConfig {
            max_iterations: theorem_budget(n).map_or(30, |b| b.max(30)),
            stopping: Stopping::cycle(),
            record_trajectory: false,
            verify_certificates: false,
        }
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    pub fn with_stopping(mut self, stopping: Stopping) -> Self {
        self.stopping = stopping;
        self
    }

    pub fn recording(mut self) -> Self {
        self.record_trajectory = true;
        self
    }

    pub fn verified(mut self) -> Self {
        self.verify_certificates = true;
        self
    }

    fn validate(&self) -> Result<()> {
        if let Stopping::CycleDetect { window, tol } = self.stopping {
            if window == 0 || tol.is_nan() || tol <= 0.0 {
                return Err(Error::param(
                    "cycle detection needs window >= 1 and tol > 0",
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Budget,
    Cycle,
    TruthHit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub final_clustering: Clustering,
    /// Power steps taken; the last iterate is `H^{iterations_used + 1}`.
    pub iterations_used: usize,
    /// Distance to the truth after each power step, when recorded.
    pub trajectory: Option<Vec<f64>>,
    /// Distance of the rebalanced start `H^1` to the truth, when known.
    pub initial_distance: Option<f64>,
    pub converged_reason: StopReason,
    /// `<A H, H>` of the returned clustering.
    pub objective: f64,
}

/// Runs the projected power method from `h0` with target group sizes
/// `capacities`.
///
/// With cycle detection, the returned clustering is the iterate with the
/// largest objective among the detected window.
pub fn run(
    a: &SparseAdjacency,
    h0: &Clustering,
    capacities: &[usize],
    config: &RunConfig,
    truth: Option<&Clustering>,
) -> Result<RunResult> {
    run_observed(a, h0, capacities, config, truth, |_, _| {})
}

/// [`run`], calling `observe(step, iterate)` on the rebalanced start
/// (step 0) and on every iterate after it.
pub fn run_observed<F>(
    a: &SparseAdjacency,
    h0: &Clustering,
    capacities: &[usize],
    config: &RunConfig,
    truth: Option<&Clustering>,
    mut observe: F,
) -> Result<RunResult>
where
    F: FnMut(usize, &Clustering),
{
    config.validate()?;
    if a.n() != h0.n() {
        return Err(Error::dim("initial clustering and adjacency differ in n"));
    }
    if capacities.len() != h0.k() {
        return Err(Error::dim("capacity vector length differs from K"));
    }
    check_capacities(a.n(), capacities)?;
    if let Some(t) = truth {
        if t.n() != a.n() || t.k() != h0.k() {
            return Err(Error::dim(
                "truth differs from the initial clustering in n or K",
            ));
        }
    }
    if config.stopping == Stopping::TruthHit && truth.is_none() {
        return Err(Error::param("truth-hit stopping requires a ground truth"));
    }

    let distance = |h: &Clustering| -> Result<Option<f64>> {
        truth
            .map(|t| align(h, t).map(|al| al.frobenius))
            .transpose()
    };

    let mut h = project(&ScoreMatrix::from(h0), capacities)?.clustering;
    observe(0, &h);
    let initial_distance = distance(&h)?;
    let mut trajectory = config.record_trajectory.then(Vec::new);

    if config.stopping == Stopping::TruthHit && initial_distance == Some(0.0) {
        let objective = objective(a, &h)?;
        return Ok(RunResult {
            final_clustering: h,
            iterations_used: 0,
            trajectory,
            initial_distance,
            converged_reason: StopReason::TruthHit,
            objective,
        });
    }

    let window = match config.stopping {
        Stopping::CycleDetect { window, .. } => window,
        _ => 0,
    };
    // Previous iterates with their objectives, oldest first.
    let mut history: VecDeque<(Clustering, f64)> = VecDeque::with_capacity(window + 1);

    for step in 1..=config.max_iterations {
        let c = score(a, &h)?;
        let current_objective = c.objective(&h);
        let projected = project_auto(&c, capacities)?;
        if config.verify_certificates {
            projected.clustering.check_structure(capacities)?;
            if !verify_certificate(&c, &projected.clustering)?.feasible {
                return Err(Error::Structural(format!(
                    "projection at step {step} failed its certificate"
                )));
            }
        }
        if window > 0 {
            if history.len() == window {
                history.pop_front();
            }
            history.push_back((h, current_objective));
        }
        h = projected.clustering;
        observe(step, &h);

        let dist = distance(&h)?;
        if let (Some(traj), Some(d)) = (trajectory.as_mut(), dist) {
            traj.push(d);
        }

        match config.stopping {
            Stopping::TruthHit if dist == Some(0.0) => {
                let objective = objective(a, &h)?;
                return Ok(RunResult {
                    final_clustering: h,
                    iterations_used: step,
                    trajectory,
                    initial_distance,
                    converged_reason: StopReason::TruthHit,
                    objective,
                });
            }
            Stopping::CycleDetect { tol, .. } => {
                // Current iterate is H^{step+1}.
                let repeats = step + 1 > window
                    && history
                        .iter()
                        .any(|(prev, _)| (h.frobenius_sq(prev) as f64).sqrt() <= tol);
                if repeats {
                    let latest = objective(a, &h)?;
                    let (best, best_objective) = history
                        .iter()
                        .map(|(c, o)| (c, *o))
                        .chain(std::iter::once((&h, latest)))
                        .fold(None::<(&Clustering, f64)>, |acc, (c, o)| match acc {
                            Some((_, bo)) if bo > o => acc,
                            _ => Some((c, o)),
                        })
                        .expect("window is non-empty");
                    return Ok(RunResult {
                        final_clustering: best.clone(),
                        iterations_used: step,
                        trajectory,
                        initial_distance,
                        converged_reason: StopReason::Cycle,
                        objective: best_objective,
                    });
                }
            }
            _ => {}
        }
    }

    let objective = objective(a, &h)?;
    Ok(RunResult {
        final_clustering: h,
        iterations_used: config.max_iterations,
        trajectory,
        initial_distance,
        converged_reason: StopReason::Budget,
        objective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sbm::{block_truth, sample_graph, SbmParams};

    #[test]
    fn budget_values() {
        assert_eq!(theorem_budget(300).unwrap(), 13);
        assert_eq!(theorem_budget(6000).unwrap(), 16);
        assert!(theorem_budget(15).is_err());
    }

    #[test]
    fn score_of_empty_graph_is_zero() {
        let h = block_truth(6, 3).unwrap();
        let c = score(&SparseAdjacency::empty(6), &h).unwrap();
        assert!(c.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn score_of_complete_blocks() {
        let truth = block_truth(6, 2).unwrap();
        let params = SbmParams::from_probabilities(6, 2, 1.0, 0.0).unwrap();
        let a = sample_graph(&params, &truth, 0).unwrap();
        let c = score(&a, &truth).unwrap();
        for i in 0..6 {
            for k in 0..2 {
                let expected = if truth.label(i) == k { 3.0 } else { 0.0 };
                assert_eq!(c.get(i, k), expected);
            }
        }
    }

    #[test]
    fn score_dimension_mismatch() {
        assert!(score(&SparseAdjacency::empty(4), &block_truth(6, 3).unwrap()).is_err());
    }

    #[test]
    fn truth_is_a_fixed_point_of_dense_blocks() {
        let truth = block_truth(12, 3).unwrap();
        let params = SbmParams::from_probabilities(12, 3, 1.0, 0.0).unwrap();
        let a = sample_graph(&params, &truth, 0).unwrap();
        assert_eq!(power_step(&a, &truth, &[4, 4, 4]).unwrap(), truth);
    }

    #[test]
    fn fixed_point_stops_after_window() {
        let truth = block_truth(12, 3).unwrap();
        let params = SbmParams::from_probabilities(12, 3, 1.0, 0.0).unwrap();
        let a = sample_graph(&params, &truth, 0).unwrap();
        let cfg = RunConfig::for_n(12).recording();
        let res = run(&a, &truth, &[4, 4, 4], &cfg, Some(&truth)).unwrap();
        assert_eq!(res.converged_reason, StopReason::Cycle);
        // Stops at H^6: five power steps after H^1.
        assert_eq!(res.iterations_used, 5);
        assert_eq!(res.final_clustering, truth);
        assert_eq!(res.trajectory.unwrap(), vec![0.0; 5]);
        assert_eq!(res.objective, 48.0);
    }

    #[test]
    fn two_cycle_is_detected_before_budget() {
        // Bipartite graph between two halves: A H swaps the two labels every step.
        let edges = (0..3).flat_map(|i| (3..6).map(move |j| (i, j)));
        let a = SparseAdjacency::from_edges(6, edges).unwrap();
        let h0 = Clustering::from_labels(vec![0, 0, 0, 1, 1, 1], 2).unwrap();
        let cfg = RunConfig::for_n(6).with_max_iterations(100);
        let res = run(&a, &h0, &[3, 3], &cfg, None).unwrap();
        assert_eq!(res.converged_reason, StopReason::Cycle);
        assert_eq!(res.iterations_used, 5);
    }

    #[test]
    fn fixed_budget_runs_to_the_end() {
        let truth = block_truth(12, 3).unwrap();
        let a = SparseAdjacency::empty(12);
        let cfg = RunConfig::for_n(12)
            .with_stopping(Stopping::FixedBudget)
            .with_max_iterations(7);
        let res = run(&a, &truth, &[4, 4, 4], &cfg, None).unwrap();
        assert_eq!(res.converged_reason, StopReason::Budget);
        assert_eq!(res.iterations_used, 7);
    }

    #[test]
    fn rebalances_an_unbalanced_start() {
        let a = SparseAdjacency::empty(6);
        let h0 = Clustering::from_labels(vec![0, 0, 0, 0, 1, 1], 3).unwrap();
        let cfg = RunConfig::for_n(6).with_max_iterations(1);
        let res = run(&a, &h0, &[2, 2, 2], &cfg, None).unwrap();
        assert_eq!(res.final_clustering.capacities(), &[2, 2, 2]);
    }

    #[test]
    fn truth_hit_requires_truth() {
        let a = SparseAdjacency::empty(6);
        let h0 = block_truth(6, 3).unwrap();
        let cfg = RunConfig::for_n(6).with_stopping(Stopping::TruthHit);
        assert!(run(&a, &h0, &[2, 2, 2], &cfg, None).is_err());
        let res = run(&a, &h0, &[2, 2, 2], &cfg, Some(&h0)).unwrap();
        assert_eq!(res.iterations_used, 0);
        assert_eq!(res.converged_reason, StopReason::TruthHit);
    }
}
