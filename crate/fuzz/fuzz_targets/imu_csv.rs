#![no_main]

use libfuzzer_sys::fuzz_target;
use motion_novelty::ingest::{parse_imu_csv, write_imu_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(samples) = parse_imu_csv(data) else { return };
    let mut out = Vec::new();
    write_imu_csv(&mut out, &samples).unwrap();
    assert_eq!(parse_imu_csv(out.as_slice()).unwrap(), samples);
});
