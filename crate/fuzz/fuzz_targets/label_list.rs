#![no_main]

use libfuzzer_sys::fuzz_target;
use novelty_cli::missions::parse_labeled;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    for line in text.lines() {
        if let Ok(lp) = parse_labeled(line) {
            assert!(!lp.path.as_os_str().is_empty());
        }
    }
});
