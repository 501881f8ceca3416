//! Hankel and INVERT transforms, Jacobi and Thron continued fractions,
//! and Somos-4 checks.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::series::Series;

/// Determinant of a square integer matrix by fraction-free elimination.
pub fn determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// `h_n = det(seq[i + j])_{0 <= i, j <= n}` for `n < m`.
pub fn hankel(seq: &[BigInt], m: usize) -> Result<Vec<BigInt>> {
    let needed = (2 * m).saturating_sub(1);
    if seq.len() < needed {
        return Err(Error::InsufficientTerms { needed, got: seq.len() });
    }
    Ok((0..m).map(|n| determinant((0..=n).map(|i| seq[i..=i + n].to_vec()).collect())).collect())
}

/// `g / (1 - x g)`.
pub fn invert_transform(g: &Series) -> Result<Series> {
    let den = &Series::one(g.order()) - &g.shift_up(1).truncate(g.order());
    den.reciprocal().map(|r| g * &r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CfKind {
    /// `1/(1 - b0 x - lam1 x^2/(1 - b1 x - lam2 x^2/(...)))`
    Jacobi,
    /// `1/(1 - c0 x - d1 x/(1 - c1 x - d2 x/(...)))`
    Thron,
}

/// Continued-fraction coefficients: `b` holds `b_i` or `c_i` from index 0,
/// `lam` holds `lambda_i` or `d_i` from index 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CfSpec {
    pub kind: CfKind,
    #[serde(with = "rat_strings")]
    pub b: Vec<Rat>,
    #[serde(with = "rat_strings")]
    pub lam: Vec<Rat>,
}

/// Largest depth accepted when decoding a spec.
pub const MAX_CF_DEPTH: usize = 4096;

mod rat_strings {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use crate::rat::{format_rat, parse_rat, Rat};

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rat))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter().map(|t| parse_rat(t).map_err(D::Error::custom)).collect()
    }
}

impl CfSpec {
    pub fn new(kind: CfKind, b: Vec<Rat>, lam: Vec<Rat>) -> Self {
        CfSpec { kind, b, lam }
    }

    /// The depth `min(len b, len lam)`.
    pub fn depth(&self) -> usize {
        self.b.len().min(self.lam.len())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: CfSpec = serde_json::from_str(text)?;
        if spec.b.len() > MAX_CF_DEPTH || spec.lam.len() > MAX_CF_DEPTH {
            return Err(Error::Json(format!("more than {MAX_CF_DEPTH} coefficients")));
        }
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    fn eval_with_tail(&self, order: usize, tail: Series) -> Result<Series> {
        let x_pow = match self.kind {
            CfKind::Jacobi => 2,
            CfKind::Thron => 1,
        };
        let mut t = tail;
        for i in (0..self.depth()).rev() {
            let lin = Series::monomial(self.b[i].clone(), 1, order);
            let rest = (&t * &Series::monomial(self.lam[i].clone(), x_pow, order)).truncate(order);
            let den = &(&Series::one(order) - &lin) - &rest;
            t = den.reciprocal()?;
        }
        Ok(t)
    }
}

/// Evaluates the fraction with tail 1. Fails with `InsufficientDepth`
/// when the tail still influences a coefficient below `order`, which is
/// detected by comparing against tail 0.
pub fn cf_eval(spec: &CfSpec, order: usize) -> Result<Series> {
    let one = spec.eval_with_tail(order, Series::one(order))?;
    let zero = spec.eval_with_tail(order, Series::zero(order))?;
    if one != zero {
        return Err(Error::InsufficientDepth(spec.depth()));
    }
    Ok(one)
}

/// Jacobi coefficients `b_0..b_{depth-1}`, `lambda_1..lambda_depth` of `g`,
/// with `g(0) = 1`, by repeated reciprocal and shift. Needs `2 depth + 1` terms.
pub fn jfraction_extract(g: &Series, depth: usize) -> Result<CfSpec> {
    let needed = 2 * depth + 1;
    if g.order() < needed {
        return Err(Error::InsufficientTerms { needed, got: g.order() });
    }
    if !g.constant_term().is_one() {
        return Err(Error::InvalidArray("continued fraction extraction needs g(0) = 1".into()));
    }
    let mut b = Vec::with_capacity(depth);
    let mut lam = Vec::with_capacity(depth);
    let mut cur = g.truncate(needed);
    for i in 0..depth {
        let inv = cur.reciprocal()?;
        let bi = -inv.coeffs()[1].clone();
        // h = (1 - b x - 1/g) / x^2 = lambda * (next level)
        let lin = &Series::one(inv.order()) - &Series::monomial(bi.clone(), 1, inv.order());
        let h = (&lin - &inv).shift_down(2)?;
        b.push(bi);
        let li = h.constant_term();
        if li.is_zero() {
            if !h.is_zero() {
                return Err(Error::ZeroHankel(i + 1));
            }
            b.resize(depth, Rat::zero());
            lam.resize(depth, Rat::zero());
            break;
        }
        cur = h.scale(&(Rat::one() / &li));
        lam.push(li);
    }
    Ok(CfSpec::new(CfKind::Jacobi, b, lam))
}

/// `s_n s_{n-4} = a s_{n-1} s_{n-3} + b s_{n-2}^2` for every `n >= 4`.
pub fn somos4_check(seq: &[BigInt], a: &BigInt, b: &BigInt) -> Result<bool> {
    if seq.len() < 5 {
        return Err(Error::InsufficientTerms { needed: 5, got: seq.len() });
    }
    Ok((4..seq.len()).all(|n| &seq[n] * &seq[n - 4] == a * &seq[n - 1] * &seq[n - 3] + b * &seq[n - 2] * &seq[n - 2]))
}

/// The claimed Somos-4 coefficients for the Hankel transform of
/// `g = f/x` with `f/x = 1 + alpha x f + beta x f^2 + gamma f^2/x`.
pub fn somos_coefficients(alpha: i64, beta: i64, gamma: i64) -> (BigInt, BigInt) {
    let (al, be, ga) = (BigInt::from(alpha), BigInt::from(beta), BigInt::from(gamma));
    let g3 = ga.pow(3);
    let g6 = ga.pow(6);
    let root = &al * &ga + &be + 2 * &g3;
    let a = &root * &root;
    let b = -(al.pow(3) * ga.pow(2))
        - al.pow(2) * &ga * (2 * &be + 3 * &g3)
        - &al * (be.pow(2) + 6 * &be * &g3 + 4 * &g6)
        - &ga * (2 * be.pow(2) + 6 * &be * &g3 + 3 * &g6);
    (a, b)
}
