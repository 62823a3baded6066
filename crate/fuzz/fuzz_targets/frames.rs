#![no_main]

use libfuzzer_sys::fuzz_target;
use motion_novelty::ingest::{parse_frames_reader, write_frames};

fuzz_target!(|data: &[u8]| {
    let Ok(frames) = parse_frames_reader(data) else { return };
    let mut out = Vec::new();
    write_frames(&mut out, &frames).unwrap();
    assert_eq!(parse_frames_reader(out.as_slice()).unwrap(), frames);
});
