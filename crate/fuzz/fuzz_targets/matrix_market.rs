#![no_main]

use libfuzzer_sys::fuzz_target;
use sbm_ppm::bench::io::parse_matrix_market;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(raw) = parse_matrix_market(text) else {
        return;
    };
    assert!(raw.edges.iter().all(|&(i, j)| i < raw.n && j < raw.n));
    if raw.n <= 1 << 16 {
        assert!(raw.to_adjacency(false).unwrap().is_symmetric());
    }
});
