//! Built-in reproduction suite: every displayed matrix and listed sequence
//! is rebuilt from its definition and compared exactly.
//!
//! Each criterion is a [`Check`] made of labelled sub-checks; a criterion
//! passes only if all of its sub-checks do.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::characterization::{
    a_sequence, solve_f_from_amatrix, verify_amatrix, verify_rogers, AMatrixSpec, ProductionMatrix,
};
use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, Shape};
use crate::paths::{count_paths, left_factors, verify_factorization, Region, Step, StepSpec};
use crate::rat::{as_integer, rat};
use crate::riordan::{
    binomial_conjugate, is_identity, reverse, AlmostRiordan, Direction, NamedMatrix, RiordanArray, SumKind,
};
use crate::series::{Definitions, Series};
use crate::transforms::{cf_eval, hankel, jfraction_extract, somos4_check, somos_coefficients, CfKind, CfSpec};

const GOLDEN: &str = include_str!("golden/matrices.txt");
const ORDER: usize = 40;

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug)]
pub struct Check {
    pub id: usize,
    pub title: &'static str,
    pub total: usize,
    pub failures: Vec<String>,
}

impl Check {
    fn new(id: usize, title: &'static str) -> Self {
        Check { id, title, total: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.total > 0
    }

    fn expect(&mut self, label: impl Into<String>, outcome: Result<bool>) {
        self.total += 1;
        match outcome {
            Ok(true) => {}
            Ok(false) => self.failures.push(label.into()),
            Err(e) => self.failures.push(format!("{}: {e}", label.into())),
        }
    }

    fn expect_eq<T: PartialEq + std::fmt::Debug>(&mut self, label: impl Into<String>, got: Result<T>, want: &T) {
        let label = label.into();
        match got {
            Ok(g) if &g == want => self.expect(label, Ok(true)),
            Ok(g) => self.expect(format!("{label}: got {g:?}"), Ok(false)),
            Err(e) => self.expect(label, Err(e)),
        }
    }
}

/// The displayed matrices, by name.
pub fn golden_matrices() -> BTreeMap<String, IntMatrix> {
    let mut out = BTreeMap::new();
    let mut name: Option<String> = None;
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let mut flush = |name: &mut Option<String>, rows: &mut Vec<Vec<BigInt>>| {
        if let Some(n) = name.take() {
            let m = IntMatrix::from_rows(std::mem::take(rows), Shape::General).expect("golden rows are rectangular");
            out.insert(n, m);
        }
    };
    for line in GOLDEN.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(n) = line.strip_prefix('=') {
            flush(&mut name, &mut rows);
            name = Some(n.trim().to_string());
        } else {
            rows.push(line.split_whitespace().map(|t| t.parse().expect("golden entries are integers")).collect());
        }
    }
    flush(&mut name, &mut rows);
    out
}

fn defs() -> Definitions {
    let mut d = Definitions::new();
    for line in [
        "c = (1-sqrt(1-4*x))/(2*x)",
        "c2 = (1-sqrt(1-4*x^2))/(2*x^2)",
        "m = (1-x-sqrt(1-2*x-3*x^2))/(2*x^2)",
        "s = (1-x-sqrt(1-6*x+x^2))/(2*x)",
        "s2 = (1-x^2-sqrt(1-6*x^2+x^4))/(2*x^2)",
        "gt = (1-x-sqrt(1-6*x+5*x^2))/(2*x)",
    ] {
        d.define_str(line).expect("built-in definitions parse");
    }
    d.define_fixpoint_str("t = 1 + x*t^3").expect("built-in definitions parse");
    d
}

fn series(text: &str) -> Result<Series> {
    static CACHE: OnceLock<Mutex<HashMap<String, Series>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("series cache").get(text) {
        return Ok(hit.clone());
    }
    let out = defs().parse_series(text, ORDER)?;
    cache.lock().expect("series cache").insert(text.to_string(), out.clone());
    Ok(out)
}

fn array(g: &str, f: &str) -> Result<RiordanArray> {
    RiordanArray::new(series(g)?, series(f)?)
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn steps(pairs: &[(i64, i64)]) -> Vec<Step> {
    pairs.iter().map(|&(dx, dy)| Step::new(dx, dy)).collect()
}

fn triangle(pairs: &[(i64, i64)]) -> StepSpec {
    StepSpec::from_pairs(pairs, Region::Triangle).expect("built-in step sets are valid")
}

fn g_of_f(f: Series) -> Result<Series> {
    f.shift_down(1)
}

/// Lower-triangular inverse Pascal matrix `(1/(1+x), x/(1+x))`.
fn inverse_pascal(size: usize) -> Result<IntMatrix> {
    array("1/(1+x)", "x/(1+x)")?.matrix(size)
}

struct Named {
    pascal: RiordanArray,
    delannoy: RiordanArray,
    fibonacci: RiordanArray,
    catalan: RiordanArray,
    dyck: RiordanArray,
    motzkin: RiordanArray,
    motzkin_tilde: RiordanArray,
    schroeder: RiordanArray,
    g_tilde: RiordanArray,
    ternary: RiordanArray,
}

fn named() -> Result<Named> {
    Ok(Named {
        pascal: array("1/(1-x)", "x/(1-x)")?,
        delannoy: array("1/(1-x)", "x*(1+x)/(1-x)")?,
        fibonacci: array("1/(1-x-x^2)", "x*(1+x)/(1-x-x^2)")?,
        catalan: array("c", "x*c")?,
        dyck: array("c2", "x*c2")?,
        motzkin: array("m", "x*m")?,
        motzkin_tilde: RiordanArray::new(series("(1+x)/(1+3*x+x^2)")?, series("x/(1+3*x+x^2)")?)?.inverse()?,
        schroeder: array("s", "x*s")?,
        g_tilde: array("gt/(1-x)", "x*gt")?,
        ternary: array("t", "x*t")?,
    })
}

fn almost_arrays() -> Result<[AlmostRiordan; 3]> {
    let d = defs();
    let s = |t: &str| d.parse_series(t, ORDER);
    Ok([
        AlmostRiordan::new(s("1/(1-x)")?, s("(1+x)/(1-x)^2")?, s("x/(1-x)")?)?,
        AlmostRiordan::new(s("1/(1-x^2)")?, s("(1+x)/(1-x^2)^2")?, s("x*(1+x)/(1-x)")?)?,
        AlmostRiordan::new(
            s("1 - x*(1-2*x-x^2-sqrt(1-6*x^2+x^4))/(2*(1-2*x-x^2))")?,
            s("-(1-2*x-x^2-sqrt(1-6*x^2+x^4))/(2*x*(1-2*x-x^2))")?,
            s("(1-x^2-sqrt(1-6*x^2+x^4))/(2*x)")?,
        )?,
    ])
}

/// Level-dependent step sets whose path matrices are the three almost arrays.
fn almost_paths() -> Result<[StepSpec; 3]> {
    Ok([
        triangle(&[(1, 1), (2, 0), (2, 1)])
            .with_level(0, steps(&[(1, 0), (1, 1)]))?
            .with_level(1, steps(&[(1, 0), (1, 1), (2, 1)]))?,
        triangle(&[(1, 0), (1, 1), (2, 1)])
            .with_level(0, steps(&[(2, 0), (1, 1)]))?
            .with_level(1, steps(&[(1, 0), (1, 1)]))?,
        triangle(&[(1, -1), (2, 0), (1, 1)])
            .with_level(0, steps(&[(1, -1), (1, 1)]))?
            .with_level(1, steps(&[(1, -1), (1, 0), (1, 1)]))?,
    ])
}

fn motzkin_tilde_paths() -> Result<StepSpec> {
    let mut colored = steps(&[(1, 1), (1, -1)]);
    colored.push(Step::weighted(3, 1, 0));
    let mut ground = steps(&[(1, 1), (1, -1)]);
    ground.push(Step::weighted(2, 1, 0));
    StepSpec::new(colored, Region::Triangle)?.with_level(0, ground)
}

fn g_tilde_paths() -> StepSpec {
    StepSpec::new(vec![Step::new(1, 0), Step::new(1, 1), Step::weighted(-1, 2, 1), Step::new(0, -1)], Region::Triangle)
        .expect("built-in step sets are valid")
}

fn cubic(second: bool) -> AMatrixSpec {
    let rows = if second { vec![vec![1], vec![0, 1]] } else { vec![vec![1, 1]] };
    AMatrixSpec::new(rows, vec![]).expect("built-in specs are valid").with_term(1, -2, 3)
}

fn rs_spec(r: i64, s: i64) -> AMatrixSpec {
    AMatrixSpec::new(vec![vec![1, r]], vec![s]).expect("built-in specs are valid")
}

fn abc_spec(a: i64, b: i64, c: i64) -> AMatrixSpec {
    AMatrixSpec::new(vec![vec![1], vec![0, a, b]], vec![c]).expect("built-in specs are valid")
}

fn displayed_matrices() -> Check {
    let mut c = Check::new(1, "displayed matrices");
    let gold = golden_matrices();
    let n = match named() {
        Ok(n) => n,
        Err(e) => {
            c.expect("array construction", Err(e));
            return c;
        }
    };
    let want = |c: &mut Check, name: &str, how: &str, got: Result<IntMatrix>| {
        let expected = gold.get(name).expect("golden name exists").to_rows();
        c.expect_eq(format!("{name} ({how})"), got.map(|m| m.to_rows()), &expected);
    };
    let size = 7;
    let delannoy_steps = triangle(&[(1, 0), (1, 1), (2, 1)]);
    let fib_steps = triangle(&[(1, 0), (2, 0), (1, 1), (2, 1)]);
    want(&mut c, "pascal", "array", n.pascal.matrix(size));
    want(&mut c, "pascal", "paths", count_paths(&triangle(&[(1, 0), (1, 1)]), size));
    want(&mut c, "delannoy_triangle", "array", n.delannoy.matrix(size));
    want(&mut c, "delannoy_triangle", "paths", count_paths(&delannoy_steps, size));
    want(&mut c, "pascal_rectified", "rectify", n.pascal.rectify(size));
    want(&mut c, "pascal_stretched", "stretch", n.pascal.stretch().matrix(size));
    want(&mut c, "fibonacci_step_triangle", "array", n.fibonacci.matrix(size));
    want(&mut c, "fibonacci_step_triangle", "paths", count_paths(&fib_steps, size));
    want(&mut c, "fibonacci_step_reversal", "reverse", n.fibonacci.reversal(size));
    want(&mut c, "delannoy_square", "rectify", n.delannoy.rectify(size));
    want(
        &mut c,
        "delannoy_square",
        "paths",
        StepSpec::from_pairs(&[(1, 0), (0, 1), (1, 1)], Region::Quadrant).and_then(|s| count_paths(&s, size)),
    );
    let seed = array("1/sqrt(1-6*x+x^2)", "(1-x-sqrt(1-6*x+x^2))/2");
    want(&mut c, "delannoy_square_seed", "array", seed.clone().and_then(|r| r.matrix(size)));
    want(&mut c, "delannoy_square", "reverse-symmetrize", seed.and_then(|r| r.reverse_symmetrize(size)));
    want(
        &mut c,
        "extended_square",
        "paths",
        StepSpec::from_pairs(&[(1, 0), (0, 1), (1, 1), (2, 2)], Region::Quadrant).and_then(|s| count_paths(&s, size)),
    );
    want(
        &mut c,
        "extended_diagonal_triangle",
        "paths",
        count_paths(&triangle(&[(1, 0), (1, 1), (2, 1), (4, 2)]), size),
    );
    want(&mut c, "delannoy_stretched", "stretch", n.delannoy.stretch().matrix(size));
    want(&mut c, "delannoy_stretched", "paths", count_paths(&triangle(&[(1, 0), (2, 1), (3, 1)]), size));
    want(&mut c, "delannoy_stretched_reversal", "reverse", n.delannoy.stretch().matrix(size).and_then(|m| reverse(&m)));
    for (name, arr) in [("fibonacci_step_triangulated", &n.fibonacci), ("delannoy_triangulated", &n.delannoy)] {
        want(&mut c, name, "triangulate", arr.triangulate().and_then(|t| t.matrix(size)));
        let f1 = as_integer(arr.f1()).expect("integral f1");
        want(&mut c, name, "conjugate", arr.rectify(size).map(|m| binomial_conjugate(&m, &f1, Direction::Inverse)));
    }
    want(&mut c, "catalan", "array", n.catalan.matrix(size));
    want(&mut c, "catalan", "paths", count_paths(&triangle(&[(1, 1), (0, -1)]), size));
    want(&mut c, "catalan_triangulated", "triangulate", n.catalan.triangulate().and_then(|t| t.matrix(size)));
    want(&mut c, "catalan_triangulated", "array", array("c", "x*c^2").and_then(|r| r.matrix(size)));
    want(&mut c, "catalan_square", "array", array("c", "c^2-1").and_then(|r| r.matrix(size)));
    want(&mut c, "dyck", "array", n.dyck.matrix(size));
    want(&mut c, "dyck", "inverse", array("1/(1+x^2)", "x/(1+x^2)").and_then(|r| r.inverse()?.matrix(size)));
    want(&mut c, "dyck", "paths", count_paths(&triangle(&[(1, 1), (1, -1)]), size));
    want(
        &mut c,
        "catalan_aerated",
        "conjugate",
        n.dyck.rectify(size).map(|m| binomial_conjugate(&m, &BigInt::one(), Direction::Inverse)),
    );
    want(&mut c, "motzkin_tilde", "inverse", n.motzkin_tilde.matrix(size));
    want(
        &mut c,
        "motzkin_tilde",
        "closed form",
        array("gt/(1-x)", "(1-3*x-sqrt(1-6*x+5*x^2))/(2*x)").and_then(|r| r.matrix(size)),
    );
    want(&mut c, "motzkin_tilde", "paths", motzkin_tilde_paths().and_then(|s| count_paths(&s, size)));
    want(
        &mut c,
        "motzkin_tilde_triangulated",
        "triangulate",
        n.motzkin_tilde.triangulate().and_then(|t| t.matrix(size)),
    );
    want(
        &mut c,
        "motzkin_tilde_triangulated",
        "product",
        array("1", "x*(3+x)").and_then(|b| n.motzkin_tilde.multiply(&b)?.matrix(size)),
    );
    match (almost_arrays(), almost_paths()) {
        (Ok(arrays), Ok(specs)) => {
            for (i, (a, s)) in arrays.iter().zip(&specs).enumerate() {
                let name = ["almost_first", "almost_second", "almost_third"][i];
                want(&mut c, name, "almost array", a.matrix(size));
                want(&mut c, name, "paths", count_paths(s, size));
            }
        }
        (Err(e), _) | (_, Err(e)) => c.expect("almost arrays", Err(e)),
    }
    want(&mut c, "schroeder", "array", n.schroeder.matrix(size));
    want(&mut c, "schroeder", "paths", count_paths(&triangle(&[(1, 1), (1, 0), (0, -1)]), size));
    want(&mut c, "g_tilde", "array", n.g_tilde.matrix(size));
    want(&mut c, "g_tilde", "paths", count_paths(&g_tilde_paths(), size));
    want(&mut c, "a060693_like", "general term", NamedMatrix::A060693Like.matrix(size));
    want(&mut c, "ternary_t", "general term", NamedMatrix::TernaryT.matrix(size));
    want(&mut c, "ternary", "array", n.ternary.matrix(size));
    want(&mut c, "ternary", "paths", count_paths(&triangle(&[(1, 1), (-1, -2)]), size));
    want(
        &mut c,
        "ternary_narayana",
        "product",
        NamedMatrix::TernaryT.matrix(size).and_then(|t| t.mul(&inverse_pascal(size)?)),
    );
    c
}

fn listed_sequences() -> Check {
    let mut c = Check::new(2, "listed sequences");
    let n = match named() {
        Ok(n) => n,
        Err(e) => {
            c.expect("array construction", Err(e));
            return c;
        }
    };
    let row_sums = |r: Result<RiordanArray>, len: usize| r.and_then(|r| r.sums(SumKind::Row, len));
    c.expect_eq(
        "A002605 left factors",
        left_factors(&triangle(&[(1, 0), (2, 0), (1, 1), (2, 1)]), 11),
        &ints(&[1, 2, 6, 16, 44, 120, 328, 896, 2448, 6688, 18272]),
    );
    c.expect_eq(
        "tribonacci left factors",
        left_factors(&triangle(&[(1, 0), (2, 1), (3, 1)]), 11),
        &ints(&[1, 1, 2, 4, 7, 13, 24, 44, 81, 149, 274]),
    );
    let a007482 = ints(&[1, 3, 11, 39, 139, 495, 1763, 6279, 22363, 79647, 283667]);
    let mut colored = steps(&[(1, 0), (2, 0), (2, 1)]);
    colored.push(Step::weighted(2, 1, 1));
    c.expect_eq(
        "A007482 left factors",
        StepSpec::new(colored, Region::Triangle).and_then(|s| left_factors(&s, 11)),
        &a007482,
    );
    c.expect_eq("A007482 row sums", n.fibonacci.triangulate().and_then(|t| t.sums(SumKind::Row, 11)), &a007482);
    let cs = array("c", "c^2-1");
    c.expect_eq(
        "catalan square row sums",
        row_sums(cs.clone(), 11),
        &ints(&[1, 3, 13, 60, 283, 1348, 6454, 30992, 149091, 718044, 3460818]),
    );
    c.expect_eq(
        "catalan square Hankel",
        row_sums(cs, 17).and_then(|s| hankel(&s, 9)),
        &ints(&[1, 4, 15, 56, 209, 780, 2911, 10864, 40545]),
    );
    let t = n.motzkin_tilde.triangulate();
    c.expect_eq(
        "T row sums",
        row_sums(t.clone(), 11),
        &ints(&[1, 5, 30, 191, 1241, 8129, 53448, 352097, 2321962, 15322025, 101143706]),
    );
    c.expect_eq(
        "T Hankel",
        row_sums(t, 19).and_then(|s| hankel(&s, 10)),
        &ints(&[1, 5, 24, 115, 551, 2640, 12649, 60605, 290376, 1391275]),
    );
    c.expect_eq(
        "A006190 row sums",
        row_sums(array("1", "x*(3+x)"), 11),
        &ints(&[1, 3, 10, 33, 109, 360, 1189, 3927, 12970, 42837, 141481]),
    );
    let almost_sums = [
        ints(&[1, 2, 5, 11, 23, 47, 95, 191, 383, 767, 1535]),
        ints(&[1, 1, 3, 6, 15, 35, 85, 204, 493, 1189, 2871]),
        ints(&[1, 1, 3, 6, 15, 34, 83, 194, 471, 1114, 2699]),
    ];
    match almost_arrays() {
        Ok(arrays) => {
            for (i, (a, want)) in arrays.iter().zip(&almost_sums).enumerate() {
                c.expect_eq(format!("almost array {} row sums", i + 1), a.matrix(11).map(|m| m.row_sums()), want);
            }
        }
        Err(e) => c.expect("almost arrays", Err(e)),
    }
    c.expect_eq(
        "(M, M-1) row sums",
        row_sums(array("m", "m-1"), 11),
        &ints(&[1, 2, 6, 18, 56, 176, 558, 1778, 5686, 18230, 58558]),
    );
    let first = ints(&[1, 2, 8, 44, 280, 1936, 14128, 107088, 834912]);
    let second = ints(&[1, 1, 4, 16, 77, 403, 2228, 12800, 75653, 457022, 2809266]);
    for (i, want) in [&first, &second].into_iter().enumerate() {
        let got = solve_f_from_amatrix(&cubic(i == 1), want.len() + 1)
            .and_then(g_of_f)
            .map(|g| g.to_integers().unwrap_or_default());
        c.expect_eq(format!("cubic {} expansion", i + 1), got, want);
    }
    let tt = NamedMatrix::TernaryT.matrix(11);
    c.expect_eq("ternary-T row sums", tt.as_ref().map(|m| m.row_sums()[..9].to_vec()).map_err(Clone::clone), &first);
    c.expect_eq("ternary-T diagonal sums", tt.map(|m| m.diagonal_sums()), &second);
    c.expect_eq(
        "A143330 diagonal sums",
        NamedMatrix::A060693Like.matrix(8).map(|m| m.diagonal_sums()),
        &ints(&[1, 1, 3, 8, 25, 83, 289, 1041]),
    );
    c
}

fn oracle_equivalence() -> Check {
    let mut c = Check::new(3, "path counts equal Riordan arrays");
    let size = 12;
    let mut colored = steps(&[(1, 0), (2, 0), (2, 1)]);
    colored.push(Step::weighted(2, 1, 1));
    let mut delannoy_colored = steps(&[(1, 0), (2, 1)]);
    delannoy_colored.push(Step::weighted(2, 1, 1));
    let proposition_specs = [
        triangle(&[(1, 0), (1, 1)]),
        triangle(&[(1, 0), (1, 1), (2, 1)]),
        triangle(&[(1, 0), (2, 0), (1, 1), (2, 1)]),
        triangle(&[(2, 0), (1, 1), (2, 1)]),
        StepSpec::new(colored, Region::Triangle).expect("valid"),
        StepSpec::new(delannoy_colored, Region::Triangle).expect("valid"),
    ];
    for spec in &proposition_specs {
        let label = format!("steps {:?}", spec.steps.iter().map(|s| (s.w, s.dx, s.dy)).collect::<Vec<_>>());
        let outcome = (|| {
            let (alpha, beta) = spec.proposition_form().ok_or(Error::InvalidSteps("not of proposition form".into()))?;
            let r = RiordanArray::from_steps(&alpha, &beta, ORDER)?;
            Ok(r.matrix(size)? == count_paths(spec, size)?)
        })();
        c.expect(label, outcome);
    }
    let stretched = (|| {
        Ok(array("1/(1-x)", "x*(1+x)/(1-x)")?.stretch().matrix(size)?
            == count_paths(&triangle(&[(1, 0), (2, 1), (3, 1)]), size)?)
    })();
    c.expect("stretched Delannoy", stretched);
    let rectified = (|| {
        let q = StepSpec::from_pairs(&[(1, 0), (0, 1), (1, 1)], Region::Quadrant)?;
        Ok(array("1/(1-x)", "x*(1+x)/(1-x)")?.rectify(size)? == count_paths(&q, size)?)
    })();
    c.expect("Delannoy square", rectified);
    let named = match named() {
        Ok(n) => n,
        Err(e) => {
            c.expect("array construction", Err(e));
            return c;
        }
    };
    let cubic_arrays = [cubic(false), cubic(true)]
        .map(|s| solve_f_from_amatrix(&s, ORDER).and_then(|f| RiordanArray::new(f.shift_down(1)?, f)));
    let downward: Vec<(&str, Result<RiordanArray>, Result<StepSpec>)> = vec![
        ("Catalan", Ok(named.catalan.clone()), Ok(triangle(&[(1, 1), (0, -1)]))),
        ("Dyck", Ok(named.dyck.clone()), Ok(triangle(&[(1, 1), (1, -1)]))),
        ("Motzkin", Ok(named.motzkin.clone()), Ok(triangle(&[(1, 0), (1, 1), (1, -1)]))),
        ("Motzkin, coloured levels", Ok(named.motzkin_tilde.clone()), motzkin_tilde_paths()),
        ("Schroeder", Ok(named.schroeder.clone()), Ok(triangle(&[(1, 1), (1, 0), (0, -1)]))),
        ("large Schroeder", array("s2", "x*s2"), Ok(triangle(&[(2, 0), (1, 1), (1, -1)]))),
        ("formal weights", Ok(named.g_tilde.clone()), Ok(g_tilde_paths())),
        ("ternary", Ok(named.ternary.clone()), Ok(triangle(&[(1, 1), (-1, -2)]))),
        ("first cubic", cubic_arrays[0].clone(), Ok(triangle(&[(1, 1), (1, 0), (-1, -2)]))),
        ("second cubic", cubic_arrays[1].clone(), Ok(triangle(&[(1, 1), (2, 0), (-1, -2)]))),
    ];
    for (label, r, spec) in downward {
        let outcome = (|| Ok(r?.matrix(size)? == count_paths(&spec?, size)?))();
        c.expect(label, outcome);
    }
    for (r, s) in [(1, 1), (2, 1), (0, 2), (3, 2)] {
        let outcome = (|| {
            let f = solve_f_from_amatrix(&rs_spec(r, s), ORDER)?;
            let arr = RiordanArray::new(f.shift_down(1)?, f)?;
            let spec = StepSpec::new(
                vec![Step::weighted(r, 1, 0), Step::new(1, 1), Step::weighted(s, 0, -1)],
                Region::Triangle,
            )?;
            Ok(arr.matrix(size)? == count_paths(&spec, size)?)
        })();
        c.expect(format!("(r,s) = ({r},{s})"), outcome);
    }
    c
}

fn random_array(rng: &mut ChaCha8Rng, order: usize) -> Result<RiordanArray> {
    let mut g: Vec<i64> = (0..order).map(|_| rng.gen_range(-3..=3)).collect();
    g[0] = if rng.gen_bool(0.5) { 1 } else { -1 };
    let mut f: Vec<i64> = (0..order).map(|_| rng.gen_range(-3..=3)).collect();
    f[0] = 0;
    f[1] = if rng.gen_bool(0.5) { 1 } else { -1 };
    // sparse pairs exercise the f2 = 0 branch of triangulation
    if rng.gen_bool(0.1) {
        f[2] = 0;
    }
    RiordanArray::new(Series::from_ints(&g, order), Series::from_ints(&f, order))
}

fn group_properties() -> Check {
    let mut c = Check::new(4, "group and structure properties");
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let order = 24;
    let size = 12;
    for i in 0..200 {
        let outcome = (|| -> Result<Vec<&'static str>> {
            let a = random_array(&mut rng, order)?;
            let b = random_array(&mut rng, order)?;
            let d = random_array(&mut rng, order)?;
            let mut bad = Vec::new();
            let ma = a.matrix(size)?;
            if a.multiply(&b)?.multiply(&d)? != a.multiply(&b.multiply(&d)?)? {
                bad.push("associativity");
            }
            if ma.mul(&b.matrix(size)?)? != a.multiply(&b)?.matrix(size)? {
                bad.push("product matrix");
            }
            let inv = a.inverse()?;
            if !is_identity(&ma.mul(&inv.matrix(size)?)?) || a.multiply(&inv)? != RiordanArray::identity(order) {
                bad.push("inverse");
            }
            let v: Vec<i64> = (0..order).map(|_| rng.gen_range(-5..=5)).collect();
            let image =
                a.apply(&Series::from_ints(&v, order))?.to_integers().ok_or(Error::InvalidArray("image".into()))?;
            let col = IntMatrix::from_rows(v[..size].iter().map(|&x| vec![BigInt::from(x)]).collect(), Shape::General)?;
            if ma.mul(&col)?.column(0) != image[..size] {
                bad.push("fundamental theorem");
            }
            let rect = a.rectify(size)?;
            let big = a.matrix(2 * size)?;
            let rev = a.reversal(size)?;
            let indices_ok = (0..size).all(|n| {
                (0..size).all(|k| rect.get(n, k) == big.get(n + k, k))
                    && (0..=n).all(|k| rev.get(n, k) == ma.get(n, n - k))
            });
            if !indices_ok {
                bad.push("rectify/reverse indices");
            }
            match a.triangulate() {
                Ok(t) => {
                    let f1 = as_integer(a.f1()).ok_or(Error::InvalidArray("f1".into()))?;
                    if binomial_conjugate(&rect, &f1, Direction::Inverse) != t.matrix(size)?.with_shape(Shape::Square) {
                        bad.push("triangulation");
                    }
                }
                Err(Error::F2Zero) => {}
                Err(e) => return Err(e),
            }
            let p = ProductionMatrix::new(&a.matrix(size + 1)?, size)?;
            if !verify_rogers(&ma, &p.z(), &p.a()) || !p.is_banded() || a_sequence(&a, size)? != p.a() {
                bad.push("production sequences");
            }
            Ok(bad)
        })();
        match outcome {
            Ok(bad) => c.expect(format!("pair {i}: {}", bad.join(", ")), Ok(bad.is_empty())),
            Err(e) => c.expect(format!("pair {i}"), Err(e)),
        }
    }
    c
}

fn functional_equations() -> Check {
    let mut c = Check::new(5, "functional equations");
    let order = 32;
    let residual_ok = |spec: &AMatrixSpec| -> Result<bool> {
        let f = solve_f_from_amatrix(spec, order + 4)?;
        let res = spec.residual(&f)?;
        Ok(res.order() >= order && res.truncate(order).is_zero())
    };
    for r in 0..=3 {
        for s in 1..=3 {
            c.expect(format!("(r,s) = ({r},{s})"), residual_ok(&rs_spec(r, s)));
        }
    }
    let cat = |x: &Series| -> Result<Series> { series("c")?.compose(x) };
    for a in 0..=2 {
        for b in 0..=2 {
            for g in 1..=2 {
                let spec = abc_spec(a, b, g);
                c.expect(format!("(alpha,beta,gamma) = ({a},{b},{g}) residual"), residual_ok(&spec));
                let composite = (|| {
                    let f = solve_f_from_amatrix(&spec, order + 1)?;
                    let lhs = f.shift_down(1)?;
                    let text = format!("x*({g}+{b}*x^2)/(1-{a}*x^2)^2");
                    let inner = series(&text)?;
                    let rhs = &series(&format!("1/(1-{a}*x^2)"))? * &cat(&inner)?;
                    lhs.equal_to(&rhs, order)
                })();
                c.expect(format!("(alpha,beta,gamma) = ({a},{b},{g}) composite"), composite);
            }
        }
    }
    c.expect("first cubic residual", residual_ok(&cubic(false)));
    c.expect("second cubic residual", residual_ok(&cubic(true)));
    c
}

/// Hankel transform of `g = f/x` for the `(alpha, beta, gamma)` equation.
pub fn somos_hankel(alpha: i64, beta: i64, gamma: i64, terms: usize) -> Result<Vec<BigInt>> {
    let f = solve_f_from_amatrix(&abc_spec(alpha, beta, gamma), 2 * terms + 1)?;
    let g = f.shift_down(1)?.to_integers().ok_or(Error::InvalidArray("non-integral expansion".into()))?;
    hankel(&g, terms)
}

fn somos() -> Check {
    let mut c = Check::new(6, "Somos-4 Hankel transforms");
    for (a, b, g) in [(1, 1, 1), (0, 1, 1), (1, 0, 1), (2, 1, 1)] {
        let (ca, cb) = somos_coefficients(a, b, g);
        let outcome = somos_hankel(a, b, g, 10).and_then(|h| somos4_check(&h, &ca, &cb));
        c.expect(format!("(alpha,beta,gamma) = ({a},{b},{g}) with A = {ca}, B = {cb}"), outcome);
    }
    c
}

fn continued_fractions() -> Check {
    let mut c = Check::new(7, "continued fractions");
    let order = 24;
    for r in 0..=3i64 {
        for s in 1..=3i64 {
            let g = solve_f_from_amatrix(&rs_spec(r, s), order + 1).and_then(g_of_f);
            let depth = order / 2 + 1;
            let mut b = vec![rat(r + 2 * s); depth];
            b[0] = rat(r + s);
            let jacobi = CfSpec::new(CfKind::Jacobi, b, vec![rat(s * (r + s)); depth]);
            let thron = CfSpec::new(CfKind::Thron, vec![rat(r); order + 1], vec![rat(s); order + 1]);
            for (kind, spec) in [("J", jacobi), ("T", thron)] {
                let outcome = (|| Ok(cf_eval(&spec, order)? == g.clone()?.truncate(order)))();
                c.expect(format!("{kind}-fraction (r,s) = ({r},{s})"), outcome);
            }
        }
    }
    for name in ["m", "s", "c"] {
        let outcome = (|| {
            let g = series(name)?;
            let spec = jfraction_extract(&g, 10)?;
            Ok(cf_eval(&spec, 20)? == g.truncate(20))
        })();
        c.expect(format!("J-fraction round trip of {name}"), outcome);
    }
    c
}

fn factorizations() -> Check {
    let mut c = Check::new(8, "step polynomial factorizations");
    let window = (-8, 16);
    let order_x = 16;
    type Case = Result<(RiordanArray, StepSpec, Series)>;
    let cases: Vec<(String, Case)> = {
        let with = |g: &str, f: &str, pairs: &[(i64, i64)], h: &str| -> Case {
            Ok((array(g, f)?, triangle(pairs), series(h)?))
        };
        let mut v = vec![
            ("Dyck".to_string(), with("c2", "x*c2", &[(1, 1), (1, -1)], "x*c2")),
            ("Motzkin".to_string(), with("m", "x*m", &[(1, 0), (1, 1), (1, -1)], "x*m")),
            ("large Schroeder".to_string(), with("s2", "x*s2", &[(2, 0), (1, 1), (1, -1)], "x*s2")),
            ("Schroeder".to_string(), with("s", "x*s", &[(1, 0), (1, 1), (0, -1)], "s")),
            ("Catalan".to_string(), with("c", "x*c", &[(1, 1), (0, -1)], "c")),
            (
                "formal weights".to_string(),
                (|| Ok((array("gt/(1-x)", "x*gt")?, g_tilde_paths(), series("gt/(1-x)")?)))(),
            ),
        ];
        for (r, s) in [(1, 1), (2, 1)] {
            let case = (|| {
                let f = solve_f_from_amatrix(&rs_spec(r, s), ORDER)?;
                let g = f.shift_down(1)?;
                let spec = StepSpec::new(
                    vec![Step::weighted(r, 1, 0), Step::new(1, 1), Step::weighted(s, 0, -1)],
                    Region::Triangle,
                )?;
                let h = g.scale(&rat(s));
                Ok((RiordanArray::new(g, f)?, spec, h))
            })();
            v.push((format!("(r,s) = ({r},{s})"), case));
        }
        v
    };
    for (label, case) in cases {
        let outcome = case.and_then(|(r, spec, h)| verify_factorization(&r, &spec, &h, order_x, window));
        c.expect(label, outcome);
    }
    c
}

/// Runs every criterion, in order.
pub fn run_all() -> Vec<Check> {
    CRITERIA.iter().map(|run| run()).collect()
}

/// The criteria in order; `CRITERIA[i]` builds criterion `i + 1`.
pub const CRITERIA: [fn() -> Check; 8] = [
    displayed_matrices,
    listed_sequences,
    oracle_equivalence,
    group_properties,
    functional_equations,
    somos,
    continued_fractions,
    factorizations,
];

/// Recurrence checks of the A-matrix characterization on displayed arrays;
/// used by tests and the CLI alongside [`run_all`].
pub fn amatrix_examples() -> Result<Vec<(&'static str, bool)>> {
    let n = named()?;
    let size = 10;
    Ok(vec![
        ("Catalan", verify_amatrix(&n.catalan.matrix(size)?, &AMatrixSpec::new(vec![vec![1]], vec![1])?)),
        ("Schroeder", verify_amatrix(&n.schroeder.matrix(size)?, &AMatrixSpec::new(vec![vec![1, 1]], vec![1])?)),
        ("identity", verify_amatrix(&IntMatrix::identity(size), &AMatrixSpec::new(vec![vec![1]], vec![])?)),
    ])
}
