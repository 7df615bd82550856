#![no_main]

use libfuzzer_sys::fuzz_target;
use sbm_ppm::bench::io::parse_capacities;
use sbm_ppm::Clustering;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(caps) = parse_capacities(text) else {
        return;
    };
    assert!(!caps.is_empty());
    let total = caps.iter().try_fold(0usize, |a, &b| a.checked_add(b));
    if total.is_some_and(|t| t <= 1 << 12) {
        let _ = Clustering::blocks(&caps);
    }
});
