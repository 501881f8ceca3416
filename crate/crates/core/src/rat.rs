//! Exact rational helpers on top of `num_rational::BigRational`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

/// Principal square root of a rational, if it is the square of one.
pub fn rat_sqrt(q: &Rat) -> Option<Rat> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer();
    let d = q.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        Some(Rat::new(rn, rd))
    } else {
        None
    }
}

/// The integer value of `q` when its denominator is one.
pub fn as_integer(q: &Rat) -> Option<BigInt> {
    if q.denom().is_one() {
        Some(q.numer().clone())
    } else {
        None
    }
}

/// Parses `"p"`, `"-p"` or `"p/q"` with arbitrary-precision integers.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = |msg: &str| Error::Parse { pos: 0, msg: format!("{msg}: {s:?}") };
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad("invalid numerator"))?;
    let den: BigInt = den.parse().map_err(|_| bad("invalid denominator"))?;
    if den.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rat::new(num, den))
}

/// Formats as `p` or `p/q`.
pub fn format_rat(q: &Rat) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// `binomial(n, k)` over big integers; zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_of_squares() {
        assert_eq!(rat_sqrt(&ratio(9, 4)), Some(ratio(3, 2)));
        assert_eq!(rat_sqrt(&rat(0)), Some(rat(0)));
        assert_eq!(rat_sqrt(&rat(2)), None);
        assert_eq!(rat_sqrt(&rat(-4)), None);
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("6/4").unwrap(), ratio(3, 2));
        assert_eq!(parse_rat("-7").unwrap(), rat(-7));
        assert_eq!(format_rat(&ratio(-6, 4)), "-3/2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 4), int(210));
        assert_eq!(binomial(5, 6), int(0));
        assert_eq!(binomial(0, 0), int(1));
    }
}
