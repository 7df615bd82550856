use proptest::prelude::*;

use sbm_ppm::ppm::{run, score, theorem_budget, RunConfig, StopReason, Stopping};
use sbm_ppm::sbm::{planted_truth, sample_graph, SbmParams};
use sbm_ppm::{Clustering, SparseAdjacency};

#[test]
fn budget_values_and_monotonicity() {
    assert_eq!(theorem_budget(300).unwrap(), 13);
    assert_eq!(theorem_budget(6000).unwrap(), 16);
    let mut prev = 0;
    let mut n = 16usize;
    while n <= 1_000_000 {
        let b = theorem_budget(n).unwrap();
        assert!(b >= prev, "budget drops at n = {n}");
        prev = b;
        n += if n < 5000 { 1 } else { 97 };
    }
    assert!(theorem_budget(15).is_err());
}

fn graph_and_clustering() -> impl Strategy<Value = (SparseAdjacency, Clustering)> {
    (1usize..=50, 1usize..=5).prop_flat_map(|(n, k)| {
        (
            prop::collection::vec((0..n, 0..n), 0..=n * 3),
            prop::collection::vec(0..k as u32, n),
        )
            .prop_map(move |(edges, labels)| {
                (
                    SparseAdjacency::from_edges(n, edges).unwrap(),
                    Clustering::from_labels(labels, k).unwrap(),
                )
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn score_equals_dense_product((a, h) in graph_and_clustering()) {
        let (n, k) = (a.n(), h.k());
        let dense = a.to_dense();
        let hm = h.to_matrix();
        let s = score(&a, &h).unwrap();
        for i in 0..n {
            for c in 0..k {
                let expect: f64 = (0..n).map(|j| dense[i * n + j] * hm[j * k + c]).sum();
                prop_assert_eq!(s.get(i, c), expect);
            }
        }
    }
}

#[test]
fn strong_signal_run_ends_at_truth() {
    let (n, k) = (600, 3);
    let params = SbmParams::new(n, k, 25.0, 2.0).unwrap();
    let truth = planted_truth(n, k, 5).unwrap();
    let a = sample_graph(&params, &truth, 6).unwrap();
    let caps = vec![200; 3];
    let h0 = sbm_ppm::init::random_init(n, k, &caps, 7).unwrap();
    let config = RunConfig::for_n(n).recording().verified();
    assert!(matches!(config.stopping, Stopping::CycleDetect { .. }));
    let res = run(&a, &h0, &caps, &config, Some(&truth)).unwrap();
    assert!(res.final_clustering.check_structure(&caps).is_ok());
    assert_eq!(res.converged_reason, StopReason::Cycle);
    let traj = res.trajectory.as_ref().expect("recorded");
    assert_eq!(traj.len(), res.iterations_used);
    assert_eq!(traj.last(), Some(&0.0));
    assert!(res.initial_distance.unwrap() > 0.0);
}
