#![no_main]

use libfuzzer_sys::fuzz_target;
use riordan::characterization::{solve_f_from_amatrix, AMatrixSpec};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = AMatrixSpec::from_json(text) {
        let _ = solve_f_from_amatrix(&spec, 6);
        let _ = AMatrixSpec::from_json(&spec.to_json()).expect("re-parse");
    }
});
