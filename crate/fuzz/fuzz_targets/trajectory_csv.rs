#![no_main]

use libfuzzer_sys::fuzz_target;
use sbm_ppm::bench::{parse_trajectory_csv, write_trajectory_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(rows) = parse_trajectory_csv(text) else {
        return;
    };
    let mut out = Vec::new();
    write_trajectory_csv(&mut out, &rows).unwrap();
    assert_eq!(
        parse_trajectory_csv(std::str::from_utf8(&out).unwrap()).unwrap(),
        rows
    );
});
