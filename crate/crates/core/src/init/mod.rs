//! Initial clusterings for the projected power method.

mod kmeans;
mod spectral;

pub use kmeans::{kmeans, KMeans};
pub use spectral::{spectral_init, top_eigenvectors, EigenPairs, SpectralInit};

use rand_distr::{Distribution, StandardNormal};

use crate::assign::{project_auto, ScoreMatrix};
use crate::clustering::{check_capacities, Clustering};
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Projects an `n x K` matrix of i.i.d. standard normal draws onto the
/// clusterings with group sizes `capacities`.
pub fn random_init(n: usize, k: usize, capacities: &[usize], seed: u64) -> Result<Clustering> {
    if capacities.len() != k {
        return Err(Error::dim("capacity vector length differs from K"));
    }
    check_capacities(n, capacities)?;
    let mut rng = rng_from_seed(seed);
    let values: Vec<f64> = (0..n * k)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    let g = ScoreMatrix::new(n, k, values)?;
    Ok(project_auto(&g, capacities)?.clustering)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitMethod {
    Random,
    Spectral,
}

impl std::str::FromStr for InitMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(InitMethod::Random),
            "spectral" => Ok(InitMethod::Spectral),
            other => Err(Error::param(format!("unknown initializer '{other}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_init_respects_capacities() {
        for seed in 0..5 {
            let h = random_init(30, 3, &[10, 10, 10], seed).unwrap();
            assert_eq!(h.capacities(), &[10, 10, 10]);
            let h = random_init(30, 2, &[20, 10], seed).unwrap();
            assert_eq!(h.capacities(), &[20, 10]);
        }
    }

    #[test]
    fn random_init_is_seeded() {
        let a = random_init(300, 3, &[100; 3], 11).unwrap();
        assert_eq!(a, random_init(300, 3, &[100; 3], 11).unwrap());
        assert_ne!(a, random_init(300, 3, &[100; 3], 12).unwrap());
    }

    #[test]
    fn random_init_checks_capacities() {
        assert!(random_init(10, 2, &[5, 4], 0).is_err());
        assert!(random_init(10, 3, &[5, 5], 0).is_err());
    }
}
