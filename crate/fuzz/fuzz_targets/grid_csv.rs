#![no_main]

use libfuzzer_sys::fuzz_target;
use sbm_ppm::bench::{parse_grid_csv, write_grid_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(records) = parse_grid_csv(text) else {
        return;
    };
    assert!(records.iter().all(|r| r.success_count <= r.trials));
    let mut out = Vec::new();
    write_grid_csv(&mut out, &records).unwrap();
    let again = parse_grid_csv(std::str::from_utf8(&out).unwrap()).unwrap();
    assert_eq!(again.len(), records.len());
});
