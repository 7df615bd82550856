#![no_main]

use libfuzzer_sys::fuzz_target;
use sbm_ppm::bench::io::parse_edge_list;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(raw) = parse_edge_list(text) else {
        return;
    };
    assert!(raw.edges.iter().all(|&(i, j)| i < raw.n && j < raw.n));
    // Avoid giant CSR allocations from a single large index.
    if raw.n > 1 << 16 {
        return;
    }
    for keep in [false, true] {
        let a = raw.to_adjacency(keep).unwrap();
        assert!(a.is_symmetric());
        assert!(keep || a.self_loops() == 0);
    }
});
