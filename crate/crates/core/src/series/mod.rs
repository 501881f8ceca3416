//! Truncated formal power series with exact rational coefficients.
//!
//! A [`Series`] stores its first `order` coefficients; everything beyond is
//! unknown. Binary operations keep the smaller of the two orders, and the
//! operations that divide by a power of `x` lose that many coefficients.

mod expr;
mod fixpoint;

pub use expr::{parse_expr, Definitions, Expr};
pub use fixpoint::solve_fixpoint;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{as_integer, format_rat, rat_sqrt, Rat};

/// Default truncation order used by the CLI and the reproduction suite.
pub const DEFAULT_ORDER: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Series {
    coeffs: Vec<Rat>,
}

impl Series {
    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        Series { coeffs }
    }

    /// Integer coefficients, zero-padded (or cut) to `order`.
    pub fn from_ints(coeffs: &[i64], order: usize) -> Self {
        let mut c: Vec<Rat> = coeffs.iter().take(order).map(|&v| Rat::from_integer(v.into())).collect();
        c.resize(order, Rat::zero());
        Series { coeffs: c }
    }

    pub fn from_bigints(coeffs: &[BigInt], order: usize) -> Self {
        let mut c: Vec<Rat> = coeffs.iter().take(order).map(|v| Rat::from_integer(v.clone())).collect();
        c.resize(order, Rat::zero());
        Series { coeffs: c }
    }

    pub fn zero(order: usize) -> Self {
        Series { coeffs: vec![Rat::zero(); order] }
    }

    pub fn constant(c: Rat, order: usize) -> Self {
        let mut s = Self::zero(order);
        if order > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rat::one(), order)
    }

    /// `c * x^power`.
    pub fn monomial(c: Rat, power: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if power < order {
            s.coeffs[power] = c;
        }
        s
    }

    /// The series `x`.
    pub fn x(order: usize) -> Self {
        Self::monomial(Rat::one(), 1, order)
    }

    /// `1 / (1 - x)`.
    pub fn geometric(order: usize) -> Self {
        Series { coeffs: vec![Rat::one(); order] }
    }

    /// Number of known coefficients.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rat> {
        self.coeffs
    }

    /// `[x^n] self`.
    pub fn coeff(&self, n: usize) -> Result<&Rat> {
        self.coeffs.get(n).ok_or(Error::OrderExceeded { index: n, order: self.order() })
    }

    pub fn constant_term(&self) -> Rat {
        self.coeffs.first().cloned().unwrap_or_else(Rat::zero)
    }

    /// Index of the first nonzero coefficient, `None` if all known ones vanish.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn truncate(&self, order: usize) -> Self {
        Series { coeffs: self.coeffs.iter().take(order).cloned().collect() }
    }

    /// Extends with zero coefficients up to `order` (no-op if already longer).
    pub fn pad(&self, order: usize) -> Self {
        let mut c = self.coeffs.clone();
        if c.len() < order {
            c.resize(order, Rat::zero());
        }
        Series { coeffs: c }
    }

    /// Exact agreement on indices `0..order`.
    pub fn equal_to(&self, other: &Series, order: usize) -> Result<bool> {
        let known = self.order().min(other.order());
        if order > known {
            return Err(Error::OrderExceeded { index: order - 1, order: known });
        }
        Ok(self.coeffs[..order] == other.coeffs[..order])
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Series { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiplies by `x^k`; the order grows by `k`.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut c = vec![Rat::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        Series { coeffs: c }
    }

    /// Divides by `x^k`; the first `k` coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if k > self.order() {
            return Err(Error::OrderExceeded { index: k, order: self.order() });
        }
        if self.coeffs[..k].iter().any(|c| !c.is_zero()) {
            return Err(Error::ZeroConstantTerm);
        }
        Ok(Series { coeffs: self.coeffs[k..].to_vec() })
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one(self.order());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let a0 = self.constant_term();
        if a0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let n = self.order();
        let inv0 = a0.recip();
        let mut b: Vec<Rat> = Vec::with_capacity(n);
        for m in 0..n {
            if m == 0 {
                b.push(inv0.clone());
                continue;
            }
            let mut acc = Rat::zero();
            for i in 1..=m {
                let ai = &self.coeffs[i];
                if !ai.is_zero() {
                    acc += ai * &b[m - i];
                }
            }
            b.push(-(acc * &inv0));
        }
        Ok(Series { coeffs: b })
    }

    /// `self / other` after cancelling the common power of `x`.
    ///
    /// The order drops by the valuation of the divisor.
    pub fn div(&self, other: &Series) -> Result<Self> {
        let v = other.valuation().ok_or(Error::ZeroConstantTerm)?;
        let known = self.order().min(other.order());
        let num = self.truncate(known).shift_down(v)?;
        let den = other.truncate(known).shift_down(v)?;
        Ok(&num * &den.reciprocal()?)
    }

    /// `self(inner(x))` by Horner's rule; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Series) -> Result<Self> {
        if !inner.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Series::zero(n);
        for c in self.coeffs[..n].iter().rev() {
            acc = &acc * &inner;
            if n > 0 {
                acc.coeffs[0] += c;
            }
        }
        Ok(acc)
    }

    /// Compositional inverse by undetermined coefficients.
    ///
    /// Coefficient `n` of `f(g)` is `f_1 g_n` plus terms in `g_1..g_{n-1}`,
    /// so each step fixes one new coefficient of `g`.
    pub fn revert(&self) -> Result<Self> {
        let n = self.order();
        if n < 2 || !self.coeffs[0].is_zero() || self.coeffs[1].is_zero() {
            return Err(Error::NotReversible);
        }
        let f1 = &self.coeffs[1];
        let mut g = vec![Rat::zero(); n];
        g[1] = f1.recip();
        // powers[k][m] = [x^m] g^k, filled as coefficients of g become known
        let mut powers: Vec<Vec<Rat>> = vec![vec![Rat::zero(); n]; n];
        powers[1][1] = g[1].clone();
        for m in 2..n {
            let mut rest = Rat::zero();
            for k in 2..=m {
                // [x^m] g^k uses g_1 .. g_{m-k+1}, all known
                let mut c = Rat::zero();
                for j in 1..=(m - k + 1) {
                    let prev = &powers[k - 1][m - j];
                    if !prev.is_zero() && !g[j].is_zero() {
                        c += &g[j] * prev;
                    }
                }
                if !self.coeffs[k].is_zero() {
                    rest += &self.coeffs[k] * &c;
                }
                powers[k][m] = c;
            }
            g[m] = -(rest / f1);
            powers[1][m] = g[m].clone();
        }
        Ok(Series { coeffs: g })
    }

    /// Principal square root (positive leading coefficient).
    ///
    /// A leading factor `x^(2v)` is pulled out first, costing `v` orders.
    pub fn sqrt(&self) -> Result<Self> {
        let Some(v) = self.valuation() else {
            return Ok(Series::zero(self.order()));
        };
        if v % 2 == 1 {
            return Err(Error::NotASquare(format!("series with valuation {v}")));
        }
        let h = self.shift_down(v)?;
        let h0 = h.constant_term();
        let b0 = rat_sqrt(&h0).ok_or_else(|| Error::NotASquare(format_rat(&h0)))?;
        let n = h.order();
        let two_b0 = &b0 + &b0;
        let mut b: Vec<Rat> = Vec::with_capacity(n);
        b.push(b0);
        for m in 1..n {
            let mut acc = h.coeffs[m].clone();
            for i in 1..m {
                acc -= &b[i] * &b[m - i];
            }
            b.push(acc / &two_b0);
        }
        Ok(Series { coeffs: b }.shift_up(v / 2).truncate(self.order() - v / 2))
    }

    /// Integer coefficients, or `None` if any known coefficient is fractional.
    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.coeffs.iter().map(as_integer).collect()
    }
}

impl<'a> Add<&'a Series> for &'a Series {
    type Output = Series;

    fn add(self, rhs: &Series) -> Series {
        let n = self.order().min(rhs.order());
        Series { coeffs: (0..n).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect() }
    }
}

impl<'a> Sub<&'a Series> for &'a Series {
    type Output = Series;

    fn sub(self, rhs: &Series) -> Series {
        let n = self.order().min(rhs.order());
        Series { coeffs: (0..n).map(|i| &self.coeffs[i] - &rhs.coeffs[i]).collect() }
    }
}

/// Numerators of `coeffs` when every denominator is one.
fn integral(coeffs: &[Rat]) -> Option<Vec<&BigInt>> {
    coeffs.iter().map(|c| c.is_integer().then(|| c.numer())).collect()
}

impl<'a> Mul<&'a Series> for &'a Series {
    type Output = Series;

    fn mul(self, rhs: &Series) -> Series {
        let n = self.order().min(rhs.order());
        if let (Some(a), Some(b)) = (integral(&self.coeffs[..n]), integral(&rhs.coeffs[..n])) {
            let mut out = vec![BigInt::zero(); n];
            for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                for (j, y) in b[..n - i].iter().enumerate() {
                    if !y.is_zero() {
                        out[i + j] += *x * *y;
                    }
                }
            }
            return Series { coeffs: out.into_iter().map(Rat::from_integer).collect() };
        }
        let mut out = vec![Rat::zero(); n];
        for (i, a) in self.coeffs[..n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Series { coeffs: out }
    }
}

impl Neg for &Series {
    type Output = Series;

    fn neg(self) -> Series {
        Series { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let coef = format_rat(&mag);
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{coef}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{coef}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{coef}*x^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.order())
    }
}
