#![no_main]

use libfuzzer_sys::fuzz_target;
use riordan::rat::{format_rat, parse_rat};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(q) = parse_rat(text) {
        assert_eq!(parse_rat(&format_rat(&q)).expect("re-parse"), q);
    }
});
