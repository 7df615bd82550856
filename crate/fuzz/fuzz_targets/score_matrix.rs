#![no_main]

use libfuzzer_sys::fuzz_target;
use sbm_ppm::assign::{project, verify_certificate};
use sbm_ppm::bench::io::parse_score_matrix;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(c) = parse_score_matrix(text) else {
        return;
    };
    assert!(c.values().iter().all(|v| v.is_finite()));
    // Parsed scores go straight into the solver; it must certify its own output.
    if c.n() <= 64 && c.k() <= 8 && c.max_abs() < 1e100 {
        let mut caps = vec![c.n() / c.k(); c.k()];
        caps[0] += c.n() % c.k();
        let res = project(&c, &caps).unwrap();
        assert!(verify_certificate(&c, &res.clustering).unwrap().feasible);
    }
});
