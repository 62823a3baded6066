#![no_main]

use libfuzzer_sys::fuzz_target;
use motion_novelty::ingest::{parse_frames_reader, parse_imu_csv, validate_mission};
use motion_novelty::windowing::chop;

// IMU CSV and frame clock separated by the first 0xff byte.
fuzz_target!(|data: &[u8]| {
    let split = data.iter().position(|b| *b == 0xff).unwrap_or(data.len());
    let (imu, rest) = data.split_at(split);
    let frames = rest.get(1..).unwrap_or_default();
    let (Ok(samples), Ok(frames)) = (parse_imu_csv(imu), parse_frames_reader(frames)) else { return };
    let Ok((mission, _)) = validate_mission("fuzz", samples, frames) else { return };
    if let Ok(windows) = chop(&mission, 3, 4) {
        assert_eq!(windows.len(), mission.frames.len().saturating_sub(3));
        for w in &windows {
            if let Some(samples) = w.samples() {
                assert!(samples.iter().all(|s| s.t >= w.t_start && s.t < w.t_end));
            }
        }
    }
});
