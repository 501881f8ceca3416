//! Production matrices, A- and Z-sequences, and the A-matrix recurrence
//! with its functional equation for `f`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, Shape};
use crate::rat::{as_integer, format_rat, Rat};
use crate::riordan::RiordanArray;
use crate::series::{solve_fixpoint, Series};

/// `P = M^{-1} Mbar`, where `Mbar` is `M` without its top row.
///
/// Entries are rational: a lower-triangular `M` with non-unit diagonal can
/// have a production matrix with fractional entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductionMatrix {
    raw: Vec<Vec<Rat>>,
}

impl ProductionMatrix {
    /// Builds the `size x size` block by forward substitution.
    pub fn new(m: &IntMatrix, size: usize) -> Result<Self> {
        if !m.is_lower_triangular() || m.rows() != m.cols() {
            return Err(Error::DimensionMismatch("production matrix needs a lower-triangular square matrix".into()));
        }
        if size + 1 > m.rows() {
            return Err(Error::DimensionMismatch(format!(
                "a {size}x{size} production matrix needs {} rows, got {}",
                size + 1,
                m.rows()
            )));
        }
        let t = |n: usize, k: usize| Rat::from_integer(m.get(n, k).clone());
        let mut raw: Vec<Vec<Rat>> = Vec::with_capacity(size);
        for n in 0..size {
            let d = t(n, n);
            if d.is_zero() {
                return Err(Error::SingularMatrix(n));
            }
            let row = (0..size)
                .map(|k| {
                    let mut acc = t(n + 1, k);
                    for (j, prev) in raw.iter().enumerate() {
                        if !prev[k].is_zero() {
                            acc -= t(n, j) * &prev[k];
                        }
                    }
                    acc / &d
                })
                .collect();
            raw.push(row);
        }
        Ok(ProductionMatrix { raw })
    }

    pub fn size(&self) -> usize {
        self.raw.len()
    }

    pub fn get(&self, n: usize, k: usize) -> &Rat {
        &self.raw[n][k]
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.raw
    }

    /// Column 0.
    pub fn z(&self) -> Vec<Rat> {
        self.raw.iter().map(|r| r[0].clone()).collect()
    }

    /// Column 1, read from row 0: `a_0, a_1, ...`.
    pub fn a(&self) -> Vec<Rat> {
        if self.size() < 2 {
            return Vec::new();
        }
        self.raw.iter().map(|r| r[1].clone()).collect()
    }

    /// True when column `k+1` is column 1 shifted down `k` places.
    pub fn is_banded(&self) -> bool {
        let a = self.a();
        let s = self.size();
        (1..s).all(|c| {
            (0..s).all(|n| {
                let expected = if n + 1 >= c { a[n + 1 - c].clone() } else { Rat::zero() };
                self.raw[n][c] == expected
            })
        })
    }

    pub fn to_int_matrix(&self) -> Result<IntMatrix> {
        let rows = self
            .raw
            .iter()
            .enumerate()
            .map(|(n, r)| {
                r.iter()
                    .enumerate()
                    .map(|(k, q)| as_integer(q).ok_or_else(|| Error::NonIntegralEntry { n, k, value: format_rat(q) }))
                    .collect()
            })
            .collect::<Result<Vec<Vec<BigInt>>>>()?;
        IntMatrix::from_rows(rows, Shape::Square)
    }
}

/// Coefficients of `A(x) = x / fbar(x)`.
pub fn a_sequence(r: &RiordanArray, len: usize) -> Result<Vec<Rat>> {
    let fbar = r.f().revert()?;
    let a = Series::x(fbar.order()).div(&fbar)?;
    if a.order() < len {
        return Err(Error::OrderExceeded { index: len - 1, order: a.order() });
    }
    Ok(a.truncate(len).into_coeffs())
}

/// Checks `t(n,0) = sum z_i t(n-1,i)` and `t(n,k) = sum a_i t(n-1,k-1+i)`
/// for every `n >= 1`. Missing sequence terms count as zero.
pub fn verify_rogers(m: &IntMatrix, z: &[Rat], a: &[Rat]) -> bool {
    let t = |n: usize, k: usize| -> Rat {
        if k < m.cols() {
            Rat::from_integer(m.get(n, k).clone())
        } else {
            Rat::zero()
        }
    };
    (1..m.rows()).all(|n| {
        (0..m.cols()).all(|k| {
            let rhs: Rat = if k == 0 {
                z.iter().enumerate().map(|(i, zi)| zi * t(n - 1, i)).sum()
            } else {
                a.iter().enumerate().map(|(i, ai)| ai * t(n - 1, k - 1 + i)).sum()
            };
            rhs == t(n, k)
        })
    })
}

/// A term `coeff * x^xpow * u^upow` on the right-hand side of `f/x = ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: i64,
    pub xpow: i64,
    pub upow: u32,
}

/// The A-matrix `(a_{i,j})` by rows, the sequence `rho`, and any extra
/// monomial terms. Together they give
/// `f/x = sum_i x^i R_i(f) + (f^2/x) rho(f) + sum c x^p f^q`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AMatrixSpec {
    pub rows: Vec<Vec<i64>>,
    #[serde(default)]
    pub rho: Vec<i64>,
    #[serde(default)]
    pub extra_terms: Vec<Term>,
}

/// Upper bound on powers accepted from decoded specs.
const MAX_POWER: i64 = 256;

impl AMatrixSpec {
    pub fn new(rows: Vec<Vec<i64>>, rho: Vec<i64>) -> Result<Self> {
        let spec = AMatrixSpec { rows, rho, extra_terms: Vec::new() };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_term(mut self, coeff: i64, xpow: i64, upow: u32) -> Self {
        self.extra_terms.push(Term { coeff, xpow, upow });
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: AMatrixSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows.first().and_then(|r| r.first()).is_none_or(|&a| a == 0) {
            return Err(Error::InvalidArray("a_{0,0} must be nonzero".into()));
        }
        let too_big = self.rows.len() as i64 > MAX_POWER
            || self.rows.iter().any(|r| r.len() as i64 > MAX_POWER)
            || self.rho.len() as i64 > MAX_POWER
            || self.extra_terms.iter().any(|t| t.xpow.abs() > MAX_POWER || i64::from(t.upow) > MAX_POWER);
        if too_big {
            return Err(Error::InvalidArray(format!("powers are limited to {MAX_POWER}")));
        }
        Ok(())
    }

    /// All terms `(c, p, q)` of the right-hand side `sum c x^p u^q` of `u/x`.
    pub fn terms(&self) -> Vec<(i64, i64, u32)> {
        let mut out = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if c != 0 {
                    out.push((c, i as i64, j as u32));
                }
            }
        }
        for (j, &c) in self.rho.iter().enumerate() {
            if c != 0 {
                out.push((c, -1, j as u32 + 2));
            }
        }
        out.extend(self.extra_terms.iter().filter(|t| t.coeff != 0).map(|t| (t.coeff, t.xpow, t.upow)));
        out
    }

    /// `sum c x^(p+1) u^q`, the right-hand side of `u = x * (...)`.
    pub fn image(&self, u: &Series) -> Result<Series> {
        let order = u.order();
        let mut acc = Series::zero(order);
        for (c, p, q) in self.terms() {
            let mut t = u.pow(q).scale(&Rat::from_integer(c.into()));
            let shift = p + 1;
            t = if shift >= 0 { t.shift_up(shift as usize).truncate(order) } else { t.shift_down((-shift) as usize)? };
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// `u - image(u)`, zero to the known order exactly when `u` solves the equation.
    pub fn residual(&self, u: &Series) -> Result<Series> {
        Ok(u - &self.image(u)?)
    }

    /// Recurrence check on interior entries:
    /// `t(n+1,k+1) = sum c t(n-p, k+q)`. Checks whose referenced entries
    /// fall outside the stored block are skipped.
    pub fn verify(&self, m: &IntMatrix) -> bool {
        let terms = self.terms();
        let rows = m.rows() as i64;
        let cols = m.cols() as i64;
        for n in 0..rows - 1 {
            'entry: for k in 0..cols - 1 {
                let mut rhs = BigInt::zero();
                for &(c, p, q) in &terms {
                    let (r, col) = (n - p, k + i64::from(q));
                    if r >= rows || (col >= cols && col <= r) {
                        continue 'entry;
                    }
                    let t = m.get_or_zero(r, col);
                    if !t.is_zero() {
                        rhs += t * c;
                    }
                }
                if &rhs != m.get(n as usize + 1, k as usize + 1) {
                    return false;
                }
            }
        }
        true
    }
}

/// Solves `f/x = sum c x^p f^q` for `f` with `f(0) = 0`.
pub fn solve_f_from_amatrix(spec: &AMatrixSpec, order: usize) -> Result<Series> {
    spec.validate()?;
    solve_fixpoint(order, |u| {
        spec.image(u).map_err(|e| match e {
            Error::ZeroConstantTerm => Error::NotContractive("a negative power of x does not cancel".into()),
            e => e,
        })
    })
}

/// `true` iff `m` satisfies the recurrence of `spec`.
pub fn verify_amatrix(m: &IntMatrix, spec: &AMatrixSpec) -> bool {
    spec.verify(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn rats(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x)).collect()
    }

    fn catalan(order: usize) -> RiordanArray {
        let c = Series::parse("(1-sqrt(1-4*x))/(2*x)", order).unwrap();
        RiordanArray::bell(c).unwrap()
    }

    fn ints(s: &Series) -> Vec<i64> {
        s.to_integers().unwrap().iter().map(|v| i64::try_from(v).unwrap()).collect()
    }

    #[test]
    fn pascal_production() {
        let m = RiordanArray::parse("1/(1-x)", "x/(1-x)", 10).unwrap().matrix(8).unwrap();
        let p = ProductionMatrix::new(&m, 7).unwrap();
        assert_eq!(p.z(), rats(&[1, 0, 0, 0, 0, 0, 0]));
        assert_eq!(p.a(), rats(&[1, 1, 0, 0, 0, 0, 0]));
        assert!(p.is_banded());
        assert!(verify_rogers(&m, &p.z(), &p.a()));
    }

    #[test]
    fn catalan_production() {
        let m = catalan(10).matrix(8).unwrap();
        let p = ProductionMatrix::new(&m, 7).unwrap();
        assert_eq!(p.z(), rats(&[1; 7]));
        assert_eq!(p.a(), rats(&[1; 7]));
        assert_eq!(a_sequence(&catalan(10), 7).unwrap(), p.a());
    }

    #[test]
    fn identity_production_is_the_shift() {
        let p = ProductionMatrix::new(&IntMatrix::identity(5), 4).unwrap();
        assert_eq!(p.z(), rats(&[0; 4]));
        assert_eq!(p.a(), rats(&[1, 0, 0, 0]));
        assert!(verify_rogers(&IntMatrix::identity(5), &p.z(), &p.a()));
    }

    #[test]
    fn production_errors() {
        let m = IntMatrix::from_i64_rows(&[vec![1, 0], vec![1, 0]], Shape::LowerTriangular).unwrap();
        assert_eq!(ProductionMatrix::new(&m, 1).unwrap().size(), 1);
        let m3 =
            IntMatrix::from_i64_rows(&[vec![1, 0, 0], vec![1, 0, 0], vec![1, 1, 1]], Shape::LowerTriangular).unwrap();
        assert_eq!(ProductionMatrix::new(&m3, 2), Err(Error::SingularMatrix(1)));
        assert!(ProductionMatrix::new(&m, 2).is_err());
    }

    #[test]
    fn rational_production_entries() {
        let m = RiordanArray::parse("1", "2*x", 6).unwrap().matrix(4).unwrap();
        let p = ProductionMatrix::new(&m, 3).unwrap();
        assert_eq!(p.get(0, 1), &rat(2));
        let m = IntMatrix::from_i64_rows(&[vec![2, 0], vec![1, 1]], Shape::LowerTriangular).unwrap();
        let bigger =
            IntMatrix::from_i64_rows(&[vec![2, 0, 0], vec![1, 1, 0], vec![1, 1, 1]], Shape::LowerTriangular).unwrap();
        let p = ProductionMatrix::new(&bigger, 2).unwrap();
        assert_eq!(p.get(0, 0), &crate::rat::ratio(1, 2));
        assert!(p.to_int_matrix().is_err());
        assert!(ProductionMatrix::new(&m, 1).is_ok());
    }

    #[test]
    fn a_sequences() {
        let pascal = RiordanArray::parse("1/(1-x)", "x/(1-x)", 10).unwrap();
        assert_eq!(a_sequence(&pascal, 4).unwrap(), rats(&[1, 1, 0, 0]));
        assert_eq!(a_sequence(&RiordanArray::identity(6), 3).unwrap(), rats(&[1, 0, 0]));
        assert!(a_sequence(&pascal, 10).is_err());
    }

    #[test]
    fn rogers_rejects_wrong_sequences() {
        let m = catalan(10).matrix(6).unwrap();
        assert!(!verify_rogers(&m, &rats(&[1, 1]), &rats(&[1, 1, 1, 1, 1])));
        assert!(!verify_rogers(&m, &rats(&[1; 6]), &rats(&[1, 2])));
    }

    #[test]
    fn schroeder_family() {
        let spec = AMatrixSpec::new(vec![vec![1, 1]], vec![1]).unwrap();
        let f = solve_f_from_amatrix(&spec, 8).unwrap();
        assert_eq!(ints(&f), vec![0, 1, 2, 6, 22, 90, 394, 1806]);
        assert!(spec.residual(&f).unwrap().is_zero());
        let g = f.shift_down(1).unwrap();
        let s = RiordanArray::bell(g).unwrap();
        assert!(verify_amatrix(&s.matrix(7).unwrap(), &spec));
    }

    #[test]
    fn alpha_beta_gamma_closed_form() {
        // u/x = 1 + x u + x u^2 + u^2/x
        let spec = AMatrixSpec::new(vec![vec![1], vec![0, 1, 1]], vec![1]).unwrap();
        let f = solve_f_from_amatrix(&spec, 16).unwrap();
        let closed = Series::parse("(1-x^2-sqrt(1-4*x-2*x^2-4*x^3+x^4))/(2*(1+x^2))", 16).unwrap();
        assert_eq!(f, closed);
    }

    #[test]
    fn ternary_via_extra_term() {
        let spec = AMatrixSpec::new(vec![vec![1]], vec![]).unwrap().with_term(1, -2, 3);
        let f = solve_f_from_amatrix(&spec, 6).unwrap();
        assert_eq!(ints(&f), vec![0, 1, 1, 3, 12, 55]);
    }

    #[test]
    fn catalan_recurrence() {
        let spec = AMatrixSpec::new(vec![vec![1]], vec![1]).unwrap();
        let m = catalan(12).matrix(8).unwrap();
        assert!(verify_amatrix(&m, &spec));
        let wrong = AMatrixSpec::new(vec![vec![1]], vec![2]).unwrap();
        assert!(!verify_amatrix(&m, &wrong));
        let id = AMatrixSpec::new(vec![vec![1]], vec![]).unwrap();
        assert!(verify_amatrix(&IntMatrix::identity(6), &id));
    }

    #[test]
    fn json_round_trip() {
        let spec = AMatrixSpec::new(vec![vec![1, 2], vec![3]], vec![1]).unwrap().with_term(-1, -2, 3);
        let text = spec.to_json();
        assert_eq!(AMatrixSpec::from_json(&text).unwrap(), spec);
        let minimal = AMatrixSpec::from_json(r#"{"rows":[[1]]}"#).unwrap();
        assert!(minimal.rho.is_empty());
        assert!(AMatrixSpec::from_json(r#"{"rows":[[0,1]]}"#).is_err());
        assert!(AMatrixSpec::from_json(r#"{"rows":[]}"#).is_err());
        assert!(AMatrixSpec::from_json(r#"{"rows":[[1]],"extra_terms":[{"coeff":1,"xpow":-9999,"upow":1}]}"#).is_err());
    }

    #[test]
    fn non_contractive_specs_are_rejected() {
        // u/x = 1 + u/x leaves u free
        let spec = AMatrixSpec::new(vec![vec![1]], vec![]).unwrap().with_term(1, -1, 1);
        assert!(matches!(solve_f_from_amatrix(&spec, 6), Err(Error::NotContractive(_))));
    }
}
