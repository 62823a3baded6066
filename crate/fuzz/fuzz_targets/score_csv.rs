#![no_main]

use libfuzzer_sys::fuzz_target;
use motion_novelty::score::{parse_score_csv, write_score_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(scores) = parse_score_csv(data) else { return };
    let mut once = Vec::new();
    write_score_csv(&mut once, &scores).unwrap();
    let again = parse_score_csv(once.as_slice()).unwrap();
    let mut twice = Vec::new();
    write_score_csv(&mut twice, &again).unwrap();
    assert_eq!(once, twice);
});
