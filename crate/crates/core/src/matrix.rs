//! Dense arbitrary-precision integer matrices indexed from `(0, 0)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest dimension accepted when decoding a matrix.
pub const MAX_DECODE_DIM: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    LowerTriangular,
    Square,
    General,
}

/// Dense integer matrix. Equality compares dimensions and entries; the
/// shape tag only records how the matrix was produced.
#[derive(Clone, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
    shape: Shape,
}

impl PartialEq for IntMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.entries == other.entries
    }
}

impl Eq for IntMatrix {}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize, shape: Shape) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols], shape }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n, Shape::LowerTriangular);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Builds from rows of equal length. A lower-triangular shape is checked.
    pub fn from_rows(rows: Vec<Vec<BigInt>>, shape: Shape) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("rows of unequal length".into()));
        }
        if shape != Shape::General && r != c {
            return Err(Error::DimensionMismatch(format!("{r}x{c} matrix cannot be {shape:?}")));
        }
        let m = IntMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect(), shape };
        if shape == Shape::LowerTriangular && !m.is_lower_triangular() {
            return Err(Error::DimensionMismatch("nonzero entry above the diagonal".into()));
        }
        Ok(m)
    }

    pub fn from_i64_rows(rows: &[Vec<i64>], shape: Shape) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect(), shape)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn with_shape(mut self, shape: Shape) -> Self {
        self.shape = shape;
        self
    }

    pub fn get(&self, n: usize, k: usize) -> &BigInt {
        &self.entries[n * self.cols + k]
    }

    /// Like [`get`](Self::get) but zero outside the stored block.
    pub fn get_or_zero(&self, n: i64, k: i64) -> BigInt {
        if n < 0 || k < 0 || n as usize >= self.rows || k as usize >= self.cols {
            BigInt::zero()
        } else {
            self.get(n as usize, k as usize).clone()
        }
    }

    pub fn set(&mut self, n: usize, k: usize, v: BigInt) {
        self.entries[n * self.cols + k] = v;
    }

    pub fn row(&self, n: usize) -> &[BigInt] {
        &self.entries[n * self.cols..(n + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|n| self.row(n).to_vec()).collect()
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|n| ((n + 1)..self.cols).all(|k| self.get(n, k).is_zero()))
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|n| (0..n).all(|k| self.get(n, k) == self.get(k, n)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows, Shape::General);
        for n in 0..self.rows {
            for k in 0..self.cols {
                t.set(k, n, self.get(n, k).clone());
            }
        }
        if self.rows == self.cols {
            t.shape = Shape::Square;
        }
        t
    }

    /// Top-left `rows x cols` block.
    pub fn block(&self, rows: usize, cols: usize) -> Self {
        let rows = rows.min(self.rows);
        let cols = cols.min(self.cols);
        let mut b = Self::zeros(rows, cols, if rows == cols { self.shape } else { Shape::General });
        for n in 0..rows {
            for k in 0..cols {
                b.set(n, k, self.get(n, k).clone());
            }
        }
        b
    }

    /// Entries with `k <= n` kept, the rest zeroed.
    pub fn lower_part(&self) -> Self {
        let mut m = self.clone();
        for n in 0..self.rows {
            for k in (n + 1)..self.cols {
                m.set(n, k, BigInt::zero());
            }
        }
        if m.rows == m.cols {
            m.shape = Shape::LowerTriangular;
        }
        m
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let shape = match (self.shape, other.shape) {
            (Shape::LowerTriangular, Shape::LowerTriangular) => Shape::LowerTriangular,
            _ if self.rows == other.cols => Shape::Square,
            _ => Shape::General,
        };
        let mut out = Self::zeros(self.rows, other.cols, shape);
        for n in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(n, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.cols {
                    let b = other.get(j, k);
                    if !b.is_zero() {
                        out.entries[n * other.cols + k] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("sum of matrices of different sizes".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a += b;
        }
        if self.shape != other.shape {
            out.shape = if self.rows == self.cols { Shape::Square } else { Shape::General };
        }
        Ok(out)
    }

    pub fn row_sums(&self) -> Vec<BigInt> {
        (0..self.rows).map(|n| self.row(n).iter().sum()).collect()
    }

    /// `d_n = sum_k a_{n-k,k}`.
    pub fn diagonal_sums(&self) -> Vec<BigInt> {
        (0..self.rows).map(|n| (0..=n).filter(|&k| k < self.cols).map(|k| self.get(n - k, k)).sum()).collect()
    }

    pub fn column(&self, k: usize) -> Vec<BigInt> {
        (0..self.rows).map(|n| self.get(n, k).clone()).collect()
    }

    /// JSON: an array of rows, each an array of decimal strings.
    pub fn to_json(&self) -> String {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|n| self.row(n).iter().map(BigInt::to_string).collect()).collect();
        serde_json::to_string(&rows).expect("strings serialize")
    }

    /// Inverse of [`to_json`](Self::to_json); the shape is inferred.
    pub fn from_json(text: &str) -> Result<Self> {
        let rows: Vec<Vec<String>> = serde_json::from_str(text)?;
        if rows.len() > MAX_DECODE_DIM || rows.iter().any(|r| r.len() > MAX_DECODE_DIM) {
            return Err(Error::DimensionMismatch(format!("dimension above {MAX_DECODE_DIM}")));
        }
        let rows = rows
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|s| s.parse::<BigInt>().map_err(|_| Error::Json(format!("not a decimal integer: {s:?}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut m = Self::from_rows(rows, Shape::General)?;
        if m.rows == m.cols {
            m.shape = if m.is_lower_triangular() { Shape::LowerTriangular } else { Shape::Square };
        }
        Ok(m)
    }
}

impl fmt::Display for IntMatrix {
    /// Right-aligned columns.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(BigInt::to_string).collect();
        let mut widths = vec![0; self.cols];
        for n in 0..self.rows {
            for k in 0..self.cols {
                widths[k] = widths[k].max(cells[n * self.cols + k].len());
            }
        }
        for n in 0..self.rows {
            let line: Vec<String> =
                (0..self.cols).map(|k| format!("{:>w$}", cells[n * self.cols + k], w = widths[k])).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows, Shape::General).unwrap()
    }

    #[test]
    fn lower_triangular_is_checked() {
        assert!(IntMatrix::from_i64_rows(&[vec![1, 2], vec![0, 1]], Shape::LowerTriangular).is_err());
        assert!(IntMatrix::from_i64_rows(&[vec![1, 0], vec![5, 1]], Shape::LowerTriangular).is_ok());
        assert!(IntMatrix::from_i64_rows(&[vec![1, 0], vec![5]], Shape::General).is_err());
    }

    #[test]
    fn product_and_transpose() {
        let a = m(&[vec![1, 2], vec![3, 4]]);
        let b = m(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(a.mul(&b).unwrap(), m(&[vec![2, 1], vec![4, 3]]).with_shape(Shape::Square));
        assert_eq!(a.transpose().row(0), &[BigInt::from(1), BigInt::from(3)]);
        assert!(a.mul(&m(&[vec![1, 2, 3]])).is_err());
    }

    #[test]
    fn sums() {
        let p = m(&[vec![1, 0, 0], vec![1, 1, 0], vec![1, 2, 1]]);
        assert_eq!(p.row_sums(), vec![1.into(), 2.into(), 4.into()]);
        assert_eq!(p.diagonal_sums(), vec![1.into(), 1.into(), 2.into()]);
    }

    #[test]
    fn json_round_trip_and_errors() {
        let p = IntMatrix::from_i64_rows(&[vec![1, 0], vec![3, 1]], Shape::LowerTriangular).unwrap();
        let s = p.to_json();
        assert_eq!(s, r#"[["1","0"],["3","1"]]"#);
        assert_eq!(IntMatrix::from_json(&s).unwrap(), p);
        assert!(IntMatrix::from_json(r#"[["1","x"]]"#).is_err());
        assert!(IntMatrix::from_json(r#"[[1]]"#).is_err());
        assert!(IntMatrix::from_json(r#"[["1"],["1","2"]]"#).is_err());
    }

    #[test]
    fn text_rendering_is_right_aligned() {
        let p = m(&[vec![1, 0], vec![13, 1]]);
        assert_eq!(p.to_string(), " 1 0\n13 1\n");
    }
}
