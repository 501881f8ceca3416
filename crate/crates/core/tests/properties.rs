use num_bigint::BigInt;
use proptest::prelude::*;
use riordan::characterization::AMatrixSpec;
use riordan::paths::StepSpec;
use riordan::reproduce::somos_hankel;
use riordan::series::parse_expr;
use riordan::transforms::{somos4_check, somos_coefficients, CfSpec};
use riordan::{IntMatrix, RiordanArray, Series};

fn integer_array(g: &[i64], f: &[i64]) -> RiordanArray {
    let order = g.len().min(f.len() + 2);
    let mut fc = vec![0, 1];
    fc.extend_from_slice(f);
    RiordanArray::new(Series::from_ints(g, order), Series::from_ints(&fc, order)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parsers_never_panic(text in "\\PC{0,40}") {
        let _ = parse_expr(&text);
        let _ = Series::parse(&text, 8);
        let _ = StepSpec::from_json(&text);
        let _ = AMatrixSpec::from_json(&text);
        let _ = CfSpec::from_json(&text);
        let _ = IntMatrix::from_json(&text);
        let _ = riordan::rat::parse_rat(&text);
    }

    #[test]
    fn expression_parser_never_panics_on_grammar_tokens(text in "[x0-9+*/^()-]{0,24}|sqrt\\([x0-9+*/^-]{0,12}\\)") {
        let _ = Series::parse(&text, 8);
    }

    #[test]
    fn inverse_round_trip(
        g in proptest::collection::vec(-4i64..=4, 10).prop_map(|mut v| { v[0] = 1; v }),
        f in proptest::collection::vec(-4i64..=4, 8),
    ) {
        let a = integer_array(&g, &f);
        let product = a.multiply(&a.inverse().unwrap()).unwrap();
        prop_assert_eq!(product, RiordanArray::identity(a.order()));
    }

    #[test]
    fn matrix_of_product_is_product_of_matrices(
        g1 in proptest::collection::vec(-3i64..=3, 10).prop_map(|mut v| { v[0] = 1; v }),
        f1 in proptest::collection::vec(-3i64..=3, 8),
        g2 in proptest::collection::vec(-3i64..=3, 10).prop_map(|mut v| { v[0] = -1; v }),
        f2 in proptest::collection::vec(-3i64..=3, 8),
    ) {
        let a = integer_array(&g1, &f1);
        let b = integer_array(&g2, &f2);
        let lhs = a.matrix(8).unwrap().mul(&b.matrix(8).unwrap()).unwrap();
        prop_assert_eq!(lhs, a.multiply(&b).unwrap().matrix(8).unwrap());
    }

    #[test]
    fn reversion_composes_to_x(f in proptest::collection::vec(-5i64..=5, 10)) {
        let mut c = vec![0, 1];
        c.extend_from_slice(&f);
        let s = Series::from_ints(&c, 12);
        prop_assert_eq!(s.compose(&s.revert().unwrap()).unwrap(), Series::x(12));
    }

    #[test]
    fn matrix_json_round_trip(rows in proptest::collection::vec(proptest::collection::vec(any::<i64>(), 4), 1..5)) {
        let m = IntMatrix::from_i64_rows(&rows, riordan::Shape::General).unwrap();
        prop_assert_eq!(IntMatrix::from_json(&m.to_json()).unwrap(), m);
    }
}

#[test]
fn somos_claim_fails_for_gamma_two() {
    let (a, b) = somos_coefficients(1, 1, 2);
    assert_eq!((a.clone(), b.clone()), (BigInt::from(361), BigInt::from(-845)));
    let h = somos_hankel(1, 1, 2, 10).unwrap();
    assert!(!somos4_check(&h, &a, &b).unwrap());
}

#[test]
fn somos_claim_holds_for_pure_catalan() {
    let (a, b) = somos_coefficients(0, 0, 1);
    let h = somos_hankel(0, 0, 1, 10).unwrap();
    assert!(somos4_check(&h, &a, &b).unwrap());
}
