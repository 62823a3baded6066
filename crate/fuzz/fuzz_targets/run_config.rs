#![no_main]

use libfuzzer_sys::fuzz_target;
use novelty_cli::config::{FileConfig, RunConfig};
use novelty_cli::Overrides;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(file) = FileConfig::parse(text) else { return };
    let _ = RunConfig::merge(file, &Overrides::default());
});
