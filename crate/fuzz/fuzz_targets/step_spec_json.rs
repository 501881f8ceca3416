#![no_main]

use libfuzzer_sys::fuzz_target;
use riordan::paths::{count_paths, StepSpec};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = StepSpec::from_json(text) {
        let _ = count_paths(&spec, 4);
        let _ = StepSpec::from_json(&spec.to_json()).expect("re-parse");
    }
});
