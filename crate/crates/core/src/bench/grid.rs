//! Phase-transition grids: empirical exact-recovery rates over `(alpha, beta)`.

use std::time::Instant;

use rayon::prelude::*;

use super::io::ValueRange;
use crate::clustering::balanced_capacities;
use crate::error::{Error, Result};
use crate::eval::exact_recovery;
use crate::init::{random_init, spectral_init, InitMethod};
use crate::ppm::{run, RunConfig, Stopping};
use crate::rng::derive_seed;
use crate::sbm::{planted_truth, sample_graph, threshold_margin, SbmParams};

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub n: usize,
    pub k: usize,
    pub alpha: ValueRange,
    pub beta: ValueRange,
    pub trials: usize,
    pub seed: u64,
    pub init: InitMethod,
    /// Defaults to [`RunConfig::for_n`].
    pub max_iterations: Option<usize>,
    pub stopping: Stopping,
    pub self_loops: bool,
    /// Certify every projection of every run; a failure becomes an error row.
    pub verify: bool,
}

impl GridSpec {
    /// Coarse version of the `n = 300, K = 3` grid: alpha in `0..=30` step
    /// 2.5, beta in `0..=10` step 2, 20 trials per cell.
    pub fn desk_default() -> Self {
        GridSpec {
            n: 300,
            k: 3,
            alpha: ValueRange {
                min: 0.0,
                max: 30.0,
                step: 2.5,
            },
            beta: ValueRange {
                min: 0.0,
                max: 10.0,
                step: 2.0,
            },
            trials: 20,
            seed: 0,
            init: InitMethod::Spectral,
            max_iterations: None,
            stopping: Stopping::cycle(),
            self_loops: true,
            verify: false,
        }
    }

    /// Full-resolution grid: alpha step 0.5, beta step 0.4, 40 trials.
    pub fn full_n300() -> Self {
        GridSpec {
            alpha: ValueRange {
                min: 0.0,
                max: 30.0,
                step: 0.5,
            },
            beta: ValueRange {
                min: 0.0,
                max: 10.0,
                step: 0.4,
            },
            trials: 40,
            ..Self::desk_default()
        }
    }

    /// Full-resolution `n = 600, K = 6` grid.
    pub fn full_n600() -> Self {
        GridSpec {
            n: 600,
            k: 6,
            alpha: ValueRange {
                min: 0.0,
                max: 60.0,
                step: 1.0,
            },
            beta: ValueRange {
                min: 0.0,
                max: 20.0,
                step: 0.8,
            },
            trials: 40,
            ..Self::desk_default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        balanced_capacities(self.n, self.k)?;
        if self.trials == 0 {
            return Err(Error::param("need at least one trial per cell"));
        }
        ValueRange::new(self.alpha.min, self.alpha.max, self.alpha.step)?;
        ValueRange::new(self.beta.min, self.beta.max, self.beta.step)?;
        if self.alpha.min < 0.0 || self.beta.min < 0.0 {
            return Err(Error::param("rates must be non-negative"));
        }
        Ok(())
    }

    fn config(&self) -> RunConfig {
        let mut config = RunConfig::for_n(self.n).with_stopping(self.stopping);
        if let Some(m) = self.max_iterations {
            config = config.with_max_iterations(m);
        }
        if self.verify {
            config = config.verified();
        }
        config
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridCellRecord {
    pub alpha_index: usize,
    pub beta_index: usize,
    pub alpha: f64,
    pub beta: f64,
    pub success_count: usize,
    pub trials: usize,
    pub mean_iterations: f64,
    /// Seconds per trial, end to end.
    pub mean_wall_time: f64,
    /// `sqrt(alpha) - sqrt(beta) - sqrt(K)`.
    pub threshold: f64,
    pub error: Option<String>,
}

impl GridCellRecord {
    pub fn success_rate(&self) -> f64 {
        self.success_count as f64 / self.trials as f64
    }
}

/// Outcome of one trial of one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    pub recovered: bool,
    pub iterations: usize,
    pub wall_time: f64,
}

/// Plants a truth, samples a graph, initializes and runs the method. All
/// randomness is derived from `(seed, alpha_index, beta_index, trial)`.
pub fn run_trial(
    spec: &GridSpec,
    alpha_index: usize,
    beta_index: usize,
    trial: usize,
) -> Result<TrialOutcome> {
    let alphas = spec.alpha.values();
    let betas = spec.beta.values();
    let (alpha, beta) = (
        *alphas
            .get(alpha_index)
            .ok_or_else(|| Error::param("alpha index out of range"))?,
        *betas
            .get(beta_index)
            .ok_or_else(|| Error::param("beta index out of range"))?,
    );
    let base = [alpha_index as u64, beta_index as u64, trial as u64];
    let stream = |tag: u64| derive_seed(spec.seed, &[base[0], base[1], base[2], tag]);

    let start = Instant::now();
    let mut params = SbmParams::with_nonnegative_rates(spec.n, spec.k, alpha, beta)?;
    params.self_loops = spec.self_loops;
    let truth = planted_truth(spec.n, spec.k, stream(0))?;
    let a = sample_graph(&params, &truth, stream(1))?;
    let capacities = balanced_capacities(spec.n, spec.k)?;
    let h0 = match spec.init {
        InitMethod::Random => random_init(spec.n, spec.k, &capacities, stream(2))?,
        InitMethod::Spectral => spectral_init(&a, spec.k, &capacities, stream(2))?.clustering,
    };
    let res = run(&a, &h0, &capacities, &spec.config(), None)?;
    Ok(TrialOutcome {
        recovered: exact_recovery(&res.final_clustering, &truth)?,
        iterations: res.iterations_used,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Runs every trial of one cell. Errors become an error row.
pub fn run_cell(spec: &GridSpec, alpha_index: usize, beta_index: usize) -> GridCellRecord {
    let alpha = spec
        .alpha
        .values()
        .get(alpha_index)
        .copied()
        .unwrap_or(f64::NAN);
    let beta = spec
        .beta
        .values()
        .get(beta_index)
        .copied()
        .unwrap_or(f64::NAN);
    let mut record = GridCellRecord {
        alpha_index,
        beta_index,
        alpha,
        beta,
        success_count: 0,
        trials: spec.trials,
        mean_iterations: 0.0,
        mean_wall_time: 0.0,
        threshold: threshold_margin(alpha, beta, spec.k),
        error: None,
    };
    let outcomes: Result<Vec<TrialOutcome>> = (0..spec.trials)
        .map(|t| run_trial(spec, alpha_index, beta_index, t))
        .collect();
    match outcomes {
        Ok(outcomes) => {
            let trials = outcomes.len() as f64;
            record.success_count = outcomes.iter().filter(|o| o.recovered).count();
            record.mean_iterations =
                outcomes.iter().map(|o| o.iterations as f64).sum::<f64>() / trials;
            record.mean_wall_time = outcomes.iter().map(|o| o.wall_time).sum::<f64>() / trials;
        }
        Err(e) => record.error = Some(e.to_string()),
    }
    record
}

/// Runs the grid cell by cell in parallel, handing records to `sink` in
/// `(alpha, beta)` order as each alpha row completes.
pub fn run_phase_grid_with<F>(spec: &GridSpec, mut sink: F) -> Result<()>
where
    F: FnMut(&GridCellRecord) -> Result<()>,
{
    spec.validate()?;
    let n_beta = spec.beta.values().len();
    for ai in 0..spec.alpha.values().len() {
        let row: Vec<GridCellRecord> = (0..n_beta)
            .into_par_iter()
            .map(|bi| run_cell(spec, ai, bi))
            .collect();
        for record in &row {
            sink(record)?;
        }
    }
    Ok(())
}

pub fn run_phase_grid(spec: &GridSpec) -> Result<Vec<GridCellRecord>> {
    let mut out = Vec::new();
    run_phase_grid_with(spec, |r| {
        out.push(r.clone());
        Ok(())
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> GridSpec {
        GridSpec {
            n: 30,
            k: 3,
            alpha: "0:20:10".parse().unwrap(),
            beta: "0:1:1".parse().unwrap(),
            trials: 2,
            ..GridSpec::desk_default()
        }
    }

    #[test]
    fn record_count_and_bounds() {
        let spec = tiny();
        let recs = run_phase_grid(&spec).unwrap();
        assert_eq!(recs.len(), 3 * 2);
        for r in &recs {
            assert!(r.error.is_none(), "{:?}", r.error);
            assert!(r.success_count <= r.trials);
        }
        assert_eq!((recs[0].alpha, recs[0].beta), (0.0, 0.0));
        assert_eq!((recs[1].alpha, recs[1].beta), (0.0, 1.0));
    }

    #[test]
    fn empty_graph_cell_never_recovers() {
        let spec = GridSpec {
            trials: 5,
            ..tiny()
        };
        assert_eq!(run_cell(&spec, 0, 0).success_count, 0);
    }

    #[test]
    fn cells_are_reproducible() {
        let spec = tiny();
        let a = run_cell(&spec, 2, 1);
        let b = run_cell(&spec, 2, 1);
        assert_eq!(a.success_count, b.success_count);
        assert_eq!(a.mean_iterations, b.mean_iterations);
    }

    #[test]
    fn invalid_specs() {
        assert!(GridSpec {
            trials: 0,
            ..tiny()
        }
        .validate()
        .is_err());
        assert!(GridSpec { n: 31, ..tiny() }.validate().is_err());
    }
}
