#![no_main]

use libfuzzer_sys::fuzz_target;
use sbm_ppm::bench::io::parse_labels;
use sbm_ppm::Clustering;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(parsed) = parse_labels(text) else {
        return;
    };
    assert!(parsed.labels.iter().all(|&l| (l as usize) < parsed.k));
    if !parsed.labels.is_empty() {
        let c = Clustering::from_labels(parsed.labels, parsed.k).unwrap();
        assert!(c.capacities().iter().all(|&s| s > 0));
    }
});
