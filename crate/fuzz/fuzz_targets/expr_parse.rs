#![no_main]

use libfuzzer_sys::fuzz_target;
use riordan::series::parse_expr;
use riordan::Series;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if parse_expr(text).is_ok() {
        let _ = Series::parse(text, 8);
    }
});
