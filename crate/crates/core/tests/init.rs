use nalgebra::{DMatrix, SymmetricEigen};

use sbm_ppm::eval::misclassified;
use sbm_ppm::init::{random_init, spectral_init, top_eigenvectors};
use sbm_ppm::rng::derive_seed;
use sbm_ppm::sbm::{planted_truth, sample_graph, SbmParams};

#[test]
fn eigenpairs_match_dense_solver() {
    for seed in 0..5u64 {
        let (n, k) = (240, 3);
        let params = SbmParams::new(n, k, 25.0, 2.0).unwrap();
        let truth = planted_truth(n, k, seed).unwrap();
        let a = sample_graph(&params, &truth, seed + 100).unwrap();
        let pairs = top_eigenvectors(&a, k, seed).unwrap();
        assert!(pairs.converged);

        let dense = DMatrix::from_row_slice(n, n, &a.to_dense());
        let eig = SymmetricEigen::new(dense.clone());
        let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        values.sort_by(|x, y| y.total_cmp(x));
        let norm = dense.norm();
        for c in 0..k {
            assert!(
                (values[c] - pairs.values[c]).abs() / norm <= 1e-5,
                "eigenvalue {c}: {} vs {}",
                pairs.values[c],
                values[c]
            );
            let v = pairs.vectors.column(c);
            let resid = (&dense * v - v * pairs.values[c]).norm() / norm;
            assert!(resid <= 1e-5, "residual {resid}");
        }
    }
}

#[test]
fn spectral_start_is_mostly_correct() {
    let (n, k) = (300, 3);
    let caps = vec![100; 3];
    let params = SbmParams::new(n, k, 25.0, 2.0).unwrap();
    let mut good = 0;
    for t in 0..50u64 {
        let truth = planted_truth(n, k, derive_seed(31, &[t, 0])).unwrap();
        let a = sample_graph(&params, &truth, derive_seed(31, &[t, 1])).unwrap();
        let init = spectral_init(&a, k, &caps, derive_seed(31, &[t, 2])).unwrap();
        assert!(init.clustering.check_structure(&caps).is_ok());
        if (misclassified(&init.clustering, &truth).unwrap() as f64) < 0.1 * n as f64 {
            good += 1;
        }
    }
    assert!(good >= 45, "{good}/50 spectral starts under 10% error");
}

#[test]
fn random_starts_differ_across_seeds() {
    for s in 0..20u64 {
        let a = random_init(300, 3, &[100, 100, 100], 2 * s).unwrap();
        let b = random_init(300, 3, &[100, 100, 100], 2 * s + 1).unwrap();
        assert_ne!(a, b);
        assert_eq!(a, random_init(300, 3, &[100, 100, 100], 2 * s).unwrap());
    }
}
