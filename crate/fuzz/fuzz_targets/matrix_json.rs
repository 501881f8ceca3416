#![no_main]

use libfuzzer_sys::fuzz_target;
use riordan::IntMatrix;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = IntMatrix::from_json(text) {
        assert_eq!(IntMatrix::from_json(&m.to_json()).expect("re-parse"), m);
    }
});
