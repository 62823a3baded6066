#![no_main]

use libfuzzer_sys::fuzz_target;
use motion_novelty::LofModel;

fuzz_target!(|data: &[u8]| {
    let Ok(model) = LofModel::from_bytes(data) else { return };
    let bytes = model.to_bytes().unwrap();
    assert_eq!(LofModel::from_bytes(&bytes).unwrap(), model);
    let q = vec![0.0; model.dim()];
    let _ = model.abnormality(&q);
});
