//! Replays the checked-in fuzz corpus through the same entry points as the
//! fuzz targets, so the seeds stay valid and never panic.

use std::fs;
use std::path::PathBuf;

use riordan::characterization::{solve_f_from_amatrix, AMatrixSpec};
use riordan::paths::{count_paths, StepSpec};
use riordan::rat::{format_rat, parse_rat};
use riordan::series::parse_expr;
use riordan::transforms::{cf_eval, CfSpec};
use riordan::{IntMatrix, Series};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| {
            let path = entry.unwrap().path();
            (path.display().to_string(), fs::read_to_string(&path).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn expression_seeds_parse_and_evaluate() {
    for (name, text) in seeds("expr_parse") {
        parse_expr(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        Series::parse(&text, 8).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn step_spec_seeds_round_trip() {
    for (name, text) in seeds("step_spec_json") {
        let spec = StepSpec::from_json(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(StepSpec::from_json(&spec.to_json()).unwrap(), spec, "{name}");
        let _ = count_paths(&spec, 4);
    }
}

#[test]
fn amatrix_seeds_round_trip() {
    for (name, text) in seeds("amatrix_spec_json") {
        let spec = AMatrixSpec::from_json(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(AMatrixSpec::from_json(&spec.to_json()).unwrap(), spec, "{name}");
        let _ = solve_f_from_amatrix(&spec, 6);
    }
}

#[test]
fn cf_seeds_round_trip() {
    for (name, text) in seeds("cf_spec_json") {
        let spec = CfSpec::from_json(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(CfSpec::from_json(&spec.to_json()).unwrap(), spec, "{name}");
        let _ = cf_eval(&spec, 6);
    }
}

#[test]
fn matrix_seeds_round_trip() {
    for (name, text) in seeds("matrix_json") {
        let m = IntMatrix::from_json(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(IntMatrix::from_json(&m.to_json()).unwrap(), m, "{name}");
    }
}

#[test]
fn rational_seeds_round_trip() {
    for (name, text) in seeds("rational_parse") {
        let Ok(q) = parse_rat(&text) else { continue };
        assert_eq!(parse_rat(&format_rat(&q)).unwrap(), q, "{name}");
    }
}
