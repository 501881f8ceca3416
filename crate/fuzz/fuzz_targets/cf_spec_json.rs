#![no_main]

use libfuzzer_sys::fuzz_target;
use riordan::transforms::{cf_eval, CfSpec};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = CfSpec::from_json(text) {
        let _ = cf_eval(&spec, 6);
        let _ = CfSpec::from_json(&spec.to_json()).expect("re-parse");
    }
});
