//! Riordan arrays `(g, f)` and almost Riordan arrays `(a; g, f)`.
//!
//! Entries are `[x^n] g(x) f(x)^k`, computed over the rationals and
//! checked for integrality when a matrix is extracted.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, Shape};
use crate::rat::{as_integer, binomial, format_rat, Rat};
use crate::series::Series;

/// Column generating functions `g f^k`, as rational entries `rows x cols`.
fn pair_entries(g: &Series, f: &Series, rows: usize, cols: usize) -> Result<Vec<Vec<Rat>>> {
    let known = g.order().min(f.order());
    if rows > known {
        return Err(Error::OrderExceeded { index: rows - 1, order: known });
    }
    let f = f.truncate(rows);
    let mut column = g.truncate(rows);
    let mut out = vec![Vec::with_capacity(cols); rows];
    for k in 0..cols {
        if k > 0 {
            column = &column * &f;
        }
        for (n, row) in out.iter_mut().enumerate() {
            row.push(column.coeffs()[n].clone());
        }
    }
    Ok(out)
}

fn integral(n: usize, k: usize, q: &Rat) -> Result<BigInt> {
    as_integer(q).ok_or_else(|| Error::NonIntegralEntry { n, k, value: format_rat(q) })
}

fn int_matrix(entries: Vec<Vec<Rat>>, shape: Shape) -> Result<IntMatrix> {
    let rows = entries
        .iter()
        .enumerate()
        .map(|(n, row)| row.iter().enumerate().map(|(k, q)| integral(n, k, q)).collect())
        .collect::<Result<Vec<Vec<BigInt>>>>()?;
    IntMatrix::from_rows(rows, shape)
}

fn integral_seq(s: &Series) -> Result<Vec<BigInt>> {
    s.coeffs().iter().enumerate().map(|(n, q)| integral(n, 0, q)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumKind {
    Row,
    Diagonal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiordanArray {
    g: Series,
    f: Series,
}

impl RiordanArray {
    /// Checks `g(0) != 0`, `f(0) = 0` and `f'(0) != 0`.
    pub fn new(g: Series, f: Series) -> Result<Self> {
        if g.order() == 0 || g.constant_term().is_zero() {
            return Err(Error::InvalidArray("g(0) must be nonzero".into()));
        }
        if f.order() < 2 || !f.coeffs()[0].is_zero() || f.coeffs()[1].is_zero() {
            return Err(Error::InvalidArray("f must satisfy f(0) = 0 and f'(0) != 0".into()));
        }
        Ok(RiordanArray { g, f })
    }

    /// `(g, f)` from two expressions in `x`.
    pub fn parse(g: &str, f: &str, order: usize) -> Result<Self> {
        Self::new(Series::parse(g, order)?, Series::parse(f, order)?)
    }

    /// The Bell matrix `(g, x g)`.
    pub fn bell(g: Series) -> Result<Self> {
        let f = g.shift_up(1).truncate(g.order());
        Self::new(g, f)
    }

    pub fn identity(order: usize) -> Self {
        RiordanArray { g: Series::one(order), f: Series::x(order) }
    }

    /// Array whose matrix counts paths for the step polynomial
    /// `sum alpha_i x^i + y x sum beta_j x^j`; `alpha[0]` is the coefficient of `x`.
    pub fn from_steps(alpha: &[BigInt], beta: &[BigInt], order: usize) -> Result<Self> {
        if beta.first().is_none_or(|b| b.is_zero()) {
            return Err(Error::Beta0Zero);
        }
        let mut den = vec![Rat::zero(); order];
        if order > 0 {
            den[0] = Rat::one();
        }
        for (i, a) in alpha.iter().enumerate() {
            if i + 1 < order {
                den[i + 1] = -Rat::from_integer(a.clone());
            }
        }
        let g = Series::from_coeffs(den).reciprocal()?;
        let b = Series::from_bigints(beta, order);
        let f = (&b * &g).shift_up(1).truncate(order);
        Self::new(g, f)
    }

    pub fn g(&self) -> &Series {
        &self.g
    }

    pub fn f(&self) -> &Series {
        &self.f
    }

    pub fn order(&self) -> usize {
        self.g.order().min(self.f.order())
    }

    pub fn is_bell(&self) -> bool {
        let n = self.order();
        self.g.shift_up(1).truncate(n) == self.f.truncate(n)
    }

    pub fn element(&self, n: usize, k: usize) -> Result<BigInt> {
        if n >= self.order() {
            return Err(Error::OrderExceeded { index: n, order: self.order() });
        }
        if k > n {
            return Ok(BigInt::zero());
        }
        let col = &self.g.truncate(n + 1) * &self.f.truncate(n + 1).pow(k as u32);
        integral(n, k, &col.coeffs()[n])
    }

    /// The `size x size` lower-triangular matrix.
    pub fn matrix(&self, size: usize) -> Result<IntMatrix> {
        int_matrix(pair_entries(&self.g, &self.f, size, size)?, Shape::LowerTriangular)
    }

    /// `(g u(f), v(f))`.
    pub fn multiply(&self, other: &RiordanArray) -> Result<RiordanArray> {
        let g = &self.g * &other.g.compose(&self.f)?;
        let f = other.f.compose(&self.f)?;
        Self::new(g, f)
    }

    /// `(1 / g(fbar), fbar)` with `fbar` the compositional inverse of `f`.
    pub fn inverse(&self) -> Result<RiordanArray> {
        let fbar = self.f.revert()?;
        let g = self.g.compose(&fbar)?.reciprocal()?;
        Self::new(g, fbar)
    }

    /// `g(x) a(f(x))`.
    pub fn apply(&self, a: &Series) -> Result<Series> {
        Ok(&self.g * &a.compose(&self.f)?)
    }

    /// Row sums `g/(1-f)` or diagonal sums `g/(1-xf)`.
    pub fn sums(&self, kind: SumKind, len: usize) -> Result<Vec<BigInt>> {
        if len > self.order() {
            return Err(Error::OrderExceeded { index: len.saturating_sub(1), order: self.order() });
        }
        let one = Series::one(self.order());
        let den = match kind {
            SumKind::Row => &one - &self.f,
            SumKind::Diagonal => &one - &self.f.shift_up(1),
        };
        integral_seq(&self.g.div(&den)?.truncate(len))
    }

    /// Square matrix with entry `(n, k) = a_{n+k, k}`.
    pub fn rectify(&self, size: usize) -> Result<IntMatrix> {
        let f_over_x = self.f.shift_down(1)?;
        int_matrix(pair_entries(&self.g, &f_over_x, size, size)?, Shape::Square)
    }

    /// The pair `(g, x f)`; not a Riordan array since its `f'(0)` vanishes.
    pub fn stretch(&self) -> StretchedArray {
        StretchedArray { g: self.g.clone(), f: self.f.shift_up(1).truncate(self.f.order()) }
    }

    /// Lower-triangular matrix with entry `(n, k) = a_{n, n-k}`.
    pub fn reversal(&self, size: usize) -> Result<IntMatrix> {
        reverse(&self.matrix(size)?)
    }

    /// `(g, (f - f1 x)/x)`, the triangulated rectification. Needs `f2 != 0`.
    pub fn triangulate(&self) -> Result<RiordanArray> {
        if self.f.order() < 3 {
            return Err(Error::OrderExceeded { index: 2, order: self.f.order() });
        }
        if self.f.coeffs()[2].is_zero() {
            return Err(Error::F2Zero);
        }
        let f1 = self.f.coeffs()[1].clone();
        let lin = Series::monomial(f1, 1, self.f.order());
        let f = (&self.f - &lin).shift_down(1)?;
        Self::new(self.g.clone(), f)
    }

    /// `f1`, the coefficient of `x` in `f`.
    pub fn f1(&self) -> &Rat {
        &self.f.coeffs()[1]
    }

    /// `rev(M) + rev(M)^T - diag(rev(M))`.
    pub fn reverse_symmetrize(&self, size: usize) -> Result<IntMatrix> {
        let rev = self.reversal(size)?;
        let mut out = rev.add(&rev.transpose())?;
        for i in 0..size {
            let d = out.get(i, i) - rev.get(i, i);
            out.set(i, i, d);
        }
        Ok(out.with_shape(Shape::Square))
    }
}

/// Reversal of a lower-triangular matrix: `(n, k) -> (n, n - k)`.
pub fn reverse(m: &IntMatrix) -> Result<IntMatrix> {
    if m.rows() != m.cols() {
        return Err(Error::DimensionMismatch("reversal needs a square block".into()));
    }
    let n = m.rows();
    let mut out = IntMatrix::zeros(n, n, Shape::LowerTriangular);
    for r in 0..n {
        for k in 0..=r {
            out.set(r, k, m.get(r, r - k).clone());
        }
    }
    Ok(out)
}

/// `(g, x f)`, the vertical stretching of a Riordan array.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StretchedArray {
    g: Series,
    f: Series,
}

impl StretchedArray {
    pub fn g(&self) -> &Series {
        &self.g
    }

    pub fn f(&self) -> &Series {
        &self.f
    }

    pub fn matrix(&self, size: usize) -> Result<IntMatrix> {
        int_matrix(pair_entries(&self.g, &self.f, size, size)?, Shape::LowerTriangular)
    }
}

/// `M (B_a)^T` (forward) or `M (B_a^{-1})^T` (inverse), where
/// `B_a = (binomial(n,k) a^(n-k))`.
pub fn binomial_conjugate(m: &IntMatrix, a: &BigInt, direction: Direction) -> IntMatrix {
    let base = match direction {
        Direction::Forward => a.clone(),
        Direction::Inverse => -a,
    };
    let cols = m.cols();
    // powers of the base, shared by every column
    let mut pw = vec![BigInt::one(); cols];
    for i in 1..cols {
        pw[i] = &pw[i - 1] * &base;
    }
    let shape = if m.rows() == cols { Shape::Square } else { Shape::General };
    let mut out = IntMatrix::zeros(m.rows(), cols, shape);
    for k in 0..cols {
        let weights: Vec<BigInt> = (0..=k).map(|j| binomial(k as i64, j as i64) * &pw[k - j]).collect();
        for n in 0..m.rows() {
            let mut acc = BigInt::zero();
            for (j, w) in weights.iter().enumerate() {
                let e = m.get(n, j);
                if !e.is_zero() && !w.is_zero() {
                    acc += e * w;
                }
            }
            out.set(n, k, acc);
        }
    }
    out
}

/// Almost Riordan array of first order `(a; g, f)`: column 0 is `a`, and
/// the block from `(1, 1)` on is the Riordan array `(g, f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostRiordan {
    a: Series,
    inner: RiordanArray,
}

impl AlmostRiordan {
    pub fn new(a: Series, g: Series, f: Series) -> Result<Self> {
        if a.order() == 0 || a.constant_term().is_zero() {
            return Err(Error::InvalidArray("a(0) must be nonzero".into()));
        }
        Ok(AlmostRiordan { a, inner: RiordanArray::new(g, f)? })
    }

    pub fn parse(a: &str, g: &str, f: &str, order: usize) -> Result<Self> {
        Self::new(Series::parse(a, order)?, Series::parse(g, order)?, Series::parse(f, order)?)
    }

    pub fn a(&self) -> &Series {
        &self.a
    }

    pub fn inner(&self) -> &RiordanArray {
        &self.inner
    }

    pub fn element(&self, n: usize, k: usize) -> Result<BigInt> {
        if n >= self.a.order() {
            return Err(Error::OrderExceeded { index: n, order: self.a.order() });
        }
        match (n, k) {
            (_, 0) => integral(n, 0, &self.a.coeffs()[n]),
            (0, _) => Ok(BigInt::zero()),
            _ => self.inner.element(n - 1, k - 1),
        }
    }

    pub fn matrix(&self, size: usize) -> Result<IntMatrix> {
        if size > self.a.order() {
            return Err(Error::OrderExceeded { index: size - 1, order: self.a.order() });
        }
        let mut m = IntMatrix::zeros(size, size, Shape::LowerTriangular);
        for n in 0..size {
            m.set(n, 0, integral(n, 0, &self.a.coeffs()[n])?);
        }
        if size > 1 {
            let inner = self.inner.matrix(size - 1)?;
            for n in 1..size {
                for k in 1..=n {
                    m.set(n, k, inner.get(n - 1, k - 1).clone());
                }
            }
        }
        Ok(m)
    }
}

/// Triangles given by a closed-form general term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedMatrix {
    /// `binom(2n-k, k) binom(2n-2k, n-k) / (n-k+1)`
    A060693Like,
    /// `binom(3n-2k, k) binom(3n-3k, n-k) / (2n-2k+1)`
    TernaryT,
}

impl NamedMatrix {
    pub fn term(self, n: usize, k: usize) -> Result<BigInt> {
        if k > n {
            return Ok(BigInt::zero());
        }
        let (n, k) = (n as i64, k as i64);
        let (num, den) = match self {
            NamedMatrix::A060693Like => (binomial(2 * n - k, k) * binomial(2 * n - 2 * k, n - k), n - k + 1),
            NamedMatrix::TernaryT => (binomial(3 * n - 2 * k, k) * binomial(3 * n - 3 * k, n - k), 2 * n - 2 * k + 1),
        };
        let den = BigInt::from(den);
        if !(&num % &den).is_zero() {
            return Err(Error::NonIntegralEntry { n: n as usize, k: k as usize, value: format!("{num}/{den}") });
        }
        Ok(num / den)
    }

    pub fn matrix(self, size: usize) -> Result<IntMatrix> {
        let mut m = IntMatrix::zeros(size, size, Shape::LowerTriangular);
        for n in 0..size {
            for k in 0..=n {
                m.set(n, k, self.term(n, k)?);
            }
        }
        Ok(m)
    }
}

impl std::str::FromStr for NamedMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a060693" | "a060693-like" | "A060693-like" => Ok(NamedMatrix::A060693Like),
            "ternary-t" | "ternary_t" => Ok(NamedMatrix::TernaryT),
            _ => Err(Error::Parse { pos: 0, msg: format!("unknown named matrix {s:?}") }),
        }
    }
}

/// Sign-aware helper for callers comparing matrices to the identity.
pub fn is_identity(m: &IntMatrix) -> bool {
    (0..m.rows()).all(|n| (0..m.cols()).all(|k| if n == k { m.get(n, k).is_one() } else { m.get(n, k).is_zero() }))
}

/// True when every entry is nonnegative.
pub fn is_nonnegative(m: &IntMatrix) -> bool {
    (0..m.rows()).all(|n| m.row(n).iter().all(|v| !v.is_negative()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::int;

    fn pascal(order: usize) -> RiordanArray {
        RiordanArray::parse("1/(1-x)", "x/(1-x)", order).unwrap()
    }

    fn delannoy(order: usize) -> RiordanArray {
        RiordanArray::parse("1/(1-x)", "x*(1+x)/(1-x)", order).unwrap()
    }

    fn row(m: &IntMatrix, n: usize) -> Vec<i64> {
        m.row(n).iter().map(|v| i64::try_from(v).unwrap()).collect()
    }

    #[test]
    fn elements() {
        assert_eq!(pascal(8).element(4, 2).unwrap(), int(6));
        assert_eq!(delannoy(8).element(4, 2).unwrap(), int(13));
        assert_eq!(delannoy(8).element(0, 0).unwrap(), int(1));
        assert_eq!(delannoy(8).element(2, 5).unwrap(), int(0));
        assert!(matches!(delannoy(8).element(8, 0), Err(Error::OrderExceeded { .. })));
    }

    #[test]
    fn validation() {
        assert!(RiordanArray::parse("x", "x", 4).is_err());
        assert!(RiordanArray::parse("1", "1+x", 4).is_err());
        assert!(RiordanArray::parse("1", "x^2", 4).is_err());
        assert!(AlmostRiordan::parse("x", "1", "x", 4).is_err());
    }

    #[test]
    fn non_integral_entries_are_errors() {
        let r = RiordanArray::parse("1/(1-x/2)", "x", 4).unwrap();
        assert!(matches!(r.matrix(3), Err(Error::NonIntegralEntry { n: 1, k: 0, .. })));
    }

    #[test]
    fn identity_matrix() {
        assert!(is_identity(&RiordanArray::identity(4).matrix(3).unwrap()));
        let id = RiordanArray::identity(8);
        // (1, 1) puts ones along row 0
        assert_eq!(row(&id.rectify(4).unwrap(), 0), vec![1, 1, 1, 1]);
        assert_eq!(id.reversal(4).unwrap().column(0), vec![int(1); 4]);
        assert_eq!(id.sums(SumKind::Row, 5).unwrap(), vec![int(1); 5]);
    }

    #[test]
    fn products_and_inverses() {
        let p = pascal(10);
        let id = RiordanArray::identity(10);
        assert_eq!(p.multiply(&id).unwrap(), p);
        assert_eq!(id.multiply(&p).unwrap(), p);
        assert_eq!(p.multiply(&p.inverse().unwrap()).unwrap(), id);
        // Pascal squared is B_2
        let b2 = RiordanArray::parse("1/(1-2*x)", "x/(1-2*x)", 10).unwrap();
        assert_eq!(p.multiply(&p).unwrap(), b2);
        assert_eq!(id.inverse().unwrap(), id);
    }

    #[test]
    fn dyck_inverse() {
        let r = RiordanArray::parse("1/(1+x^2)", "x/(1+x^2)", 12).unwrap();
        let inv = r.inverse().unwrap();
        let mut d = crate::series::Definitions::new();
        d.define_str("c = (1-sqrt(1-4*x))/(2*x)").unwrap();
        let c2 = d.parse_series("(1-sqrt(1-4*x^2))/(2*x^2)", 12).unwrap();
        assert_eq!(inv.g(), &c2);
        assert_eq!(inv.f(), &c2.shift_up(1).truncate(12));
    }

    #[test]
    fn fundamental_theorem() {
        let p = pascal(8);
        let image = p.apply(&Series::geometric(8)).unwrap();
        assert_eq!(image, Series::parse("1/(1-2*x)", 8).unwrap());
        let m = p.matrix(8).unwrap();
        assert_eq!(m.row_sums(), image.to_integers().unwrap());
    }

    #[test]
    fn sums() {
        let d = pascal(8).sums(SumKind::Diagonal, 6).unwrap();
        assert_eq!(d, [1, 1, 2, 3, 5, 8].map(int).to_vec());
        let sd = RiordanArray::parse("1/(1-x)", "x*(1+x)/(1-x)", 12).unwrap().stretch();
        assert_eq!(sd.matrix(8).unwrap().row_sums(), [1, 1, 2, 4, 7, 13, 24, 44].map(int).to_vec());
        assert!(pascal(4).sums(SumKind::Row, 5).is_err());
    }

    #[test]
    fn rectification() {
        let sq = pascal(10).rectify(5).unwrap();
        assert_eq!(row(&sq, 2), vec![1, 3, 6, 10, 15]);
        assert_eq!(delannoy(10).rectify(3).unwrap().get(2, 2), &int(13));
    }

    #[test]
    fn stretching() {
        let s = pascal(8).stretch().matrix(7).unwrap();
        assert_eq!(row(&s, 6), vec![1, 5, 6, 1, 0, 0, 0]);
        let s = RiordanArray::identity(8).stretch().matrix(7).unwrap();
        assert_eq!(s.get(4, 2), &int(1));
        assert_eq!(s.get(2, 2), &int(0));
    }

    #[test]
    fn reversal() {
        let r = RiordanArray::parse("1/(1-x-x^2)", "x*(1+x)/(1-x-x^2)", 8).unwrap();
        let rev = r.reversal(4).unwrap();
        assert_eq!(row(&rev, 3), vec![1, 5, 7, 3]);
    }

    #[test]
    fn triangulation() {
        let t = delannoy(10).triangulate().unwrap();
        assert_eq!(row(&t.matrix(4).unwrap(), 3), vec![1, 6, 12, 8]);
        let fib = RiordanArray::parse("1/(1-x-x^2)", "x*(1+x)/(1-x-x^2)", 10).unwrap();
        let t = fib.triangulate().unwrap();
        let expected = RiordanArray::parse("1/(1-x-x^2)", "x*(2+x)/(1-x-x^2)", 9).unwrap();
        assert_eq!(t.matrix(8).unwrap(), expected.matrix(8).unwrap());
        assert_eq!(row(&t.matrix(4).unwrap(), 3), vec![3, 12, 16, 8]);
        let dyck = RiordanArray::parse("(1-sqrt(1-4*x^2))/(2*x^2)", "(1-sqrt(1-4*x^2))/(2*x)", 10).unwrap();
        assert_eq!(dyck.triangulate(), Err(Error::F2Zero));
    }

    #[test]
    fn conjugation_identity_cases() {
        let m = pascal(8).rectify(5).unwrap();
        assert_eq!(binomial_conjugate(&m, &int(0), Direction::Inverse), m);
        let fwd = binomial_conjugate(&m, &int(3), Direction::Forward);
        assert_eq!(binomial_conjugate(&fwd, &int(3), Direction::Inverse), m);
    }

    #[test]
    fn almost_riordan() {
        let a = AlmostRiordan::parse("1/(1-x)", "(1+x)/(1-x)^2", "x/(1-x)", 8).unwrap();
        assert_eq!(row(&a.matrix(5).unwrap(), 4), vec![1, 7, 9, 5, 1]);
        assert_eq!(a.element(4, 2).unwrap(), int(9));
        assert_eq!(a.element(0, 0).unwrap(), int(1));
        let b = AlmostRiordan::parse("1/(1-x^2)", "(1+x)/(1-x^2)^2", "x*(1+x)/(1-x)", 8).unwrap();
        assert_eq!(row(&b.matrix(6).unwrap(), 5), vec![0, 3, 10, 14, 7, 1]);
    }

    #[test]
    fn step_arrays() {
        let d = RiordanArray::from_steps(&[int(1)], &[int(1), int(1)], 10).unwrap();
        assert_eq!(d, delannoy(10));
        let f = RiordanArray::from_steps(&[int(1), int(1)], &[int(1), int(1)], 10).unwrap();
        assert_eq!(f, RiordanArray::parse("1/(1-x-x^2)", "x*(1+x)/(1-x-x^2)", 10).unwrap());
        assert_eq!(RiordanArray::from_steps(&[], &[int(1)], 6).unwrap(), RiordanArray::identity(6));
        assert_eq!(RiordanArray::from_steps(&[int(1)], &[int(0), int(1)], 6), Err(Error::Beta0Zero));
        assert_eq!(RiordanArray::from_steps(&[int(1)], &[], 6), Err(Error::Beta0Zero));
    }

    #[test]
    fn symmetrization() {
        let m = RiordanArray::parse("1/sqrt(1-6*x+x^2)", "(1-x-sqrt(1-6*x+x^2))/2", 10).unwrap();
        let s = m.reverse_symmetrize(5).unwrap();
        assert_eq!(row(&s, 3), vec![1, 7, 25, 63, 129]);
        assert!(s.is_symmetric());
        let ones = RiordanArray::identity(6).reverse_symmetrize(3).unwrap();
        assert_eq!(ones.to_string(), "1 1 1\n1 0 0\n1 0 0\n");
    }

    #[test]
    fn named_matrices() {
        assert_eq!(row(&NamedMatrix::A060693Like.matrix(4).unwrap(), 3), vec![5, 10, 6, 1]);
        assert_eq!(row(&NamedMatrix::TernaryT.matrix(4).unwrap(), 3), vec![12, 21, 10, 1]);
        assert_eq!(NamedMatrix::TernaryT.term(0, 0).unwrap(), int(1));
        assert_eq!("ternary-t".parse::<NamedMatrix>().unwrap(), NamedMatrix::TernaryT);
    }

    #[test]
    fn bell_detection() {
        let c = Series::parse("(1-sqrt(1-4*x))/(2*x)", 10).unwrap();
        let cat = RiordanArray::bell(c).unwrap();
        assert!(cat.is_bell());
        assert!(pascal(6).is_bell());
        assert!(!delannoy(6).is_bell());
        assert!(RiordanArray::identity(4).is_bell());
    }
}
