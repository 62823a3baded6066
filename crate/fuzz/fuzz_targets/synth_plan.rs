#![no_main]

use libfuzzer_sys::fuzz_target;
use novelty_cli::synth::parse_plan;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(plan) = parse_plan(text) else { return };
    if plan.normal + plan.abnormal <= 64 {
        let _ = plan.validate();
    }
});
