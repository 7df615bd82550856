//! Convergence traces: distance to the planted partition after every step,
//! for several random starts on one sampled graph.

use crate::clustering::balanced_capacities;
use crate::error::{Error, Result};
use crate::init::random_init;
use crate::ppm::{run, RunConfig, Stopping};
use crate::rng::derive_seed;
use crate::sbm::{planted_truth, sample_graph, SbmParams};

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceSpec {
    pub n: usize,
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub repeats: usize,
    pub seed: u64,
    pub max_iterations: Option<usize>,
    pub stopping: Stopping,
    pub self_loops: bool,
}

impl ConvergenceSpec {
    pub fn new(n: usize, k: usize, alpha: f64, beta: f64, repeats: usize, seed: u64) -> Self {
        ConvergenceSpec {
            n,
            k,
            alpha,
            beta,
            repeats,
            seed,
            max_iterations: None,
            stopping: Stopping::cycle(),
            self_loops: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRow {
    pub run_id: usize,
    /// 0 is the rebalanced start; `t` is the iterate after `t` power steps.
    pub iteration: usize,
    pub distance: f64,
}

/// One graph, `repeats` random starts; rows ordered by `(run_id, iteration)`.
pub fn run_convergence(spec: &ConvergenceSpec) -> Result<Vec<TrajectoryRow>> {
    if spec.repeats == 0 {
        return Err(Error::param("need at least one repeat"));
    }
    let mut params = SbmParams::new(spec.n, spec.k, spec.alpha, spec.beta)?;
    params.self_loops = spec.self_loops;
    let truth = planted_truth(spec.n, spec.k, derive_seed(spec.seed, &[0]))?;
    let a = sample_graph(&params, &truth, derive_seed(spec.seed, &[1]))?;
    let capacities = balanced_capacities(spec.n, spec.k)?;
    let mut config = RunConfig::for_n(spec.n)
        .with_stopping(spec.stopping)
        .recording();
    if let Some(m) = spec.max_iterations {
        config = config.with_max_iterations(m);
    }

    let mut rows = Vec::new();
    for run_id in 0..spec.repeats {
        let h0 = random_init(
            spec.n,
            spec.k,
            &capacities,
            derive_seed(spec.seed, &[2, run_id as u64]),
        )?;
        let res = run(&a, &h0, &capacities, &config, Some(&truth))?;
        let start = res.initial_distance.expect("truth supplied");
        let traj = res.trajectory.expect("trajectory recorded");
        rows.extend(
            std::iter::once(start)
                .chain(traj)
                .enumerate()
                .map(|(iteration, distance)| TrajectoryRow {
                    run_id,
                    iteration,
                    distance,
                }),
        );
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn converged_runs_end_at_zero() {
        let spec = ConvergenceSpec::new(300, 3, 30.0, 2.0, 3, 5);
        let rows = run_convergence(&spec).unwrap();
        for run_id in 0..3 {
            let last = rows.iter().rfind(|r| r.run_id == run_id).unwrap();
            assert_eq!(last.distance, 0.0);
        }
        assert_eq!(rows[0].iteration, 0);
    }

    #[test]
    fn rejects_zero_repeats() {
        assert!(run_convergence(&ConvergenceSpec::new(30, 3, 10.0, 1.0, 0, 0)).is_err());
    }
}
