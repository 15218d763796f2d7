//! Dense row-major matrices of exact rationals.

use std::fmt;
use std::ops::{Index, IndexMut, Range};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{common_denominator, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        QMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let nr = rows.len();
        let nc = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != nc) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(QMatrix {
            rows: nr,
            cols: nc,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn diagonal(d: &[Rational]) -> Self {
        let mut m = QMatrix::zeros(d.len(), d.len());
        for (i, v) in d.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        QMatrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn submatrix(&self, rows: Range<usize>, cols: Range<usize>) -> QMatrix {
        QMatrix::from_fn(rows.len(), cols.len(), |r, c| {
            self[(rows.start + r, cols.start + c)].clone()
        })
    }

    /// Leading `n x n` corner.
    pub fn leading(&self, n: usize) -> QMatrix {
        self.submatrix(0..n, 0..n)
    }

    pub fn mul(&self, rhs: &QMatrix) -> Result<QMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        // each row of `self` and column of `rhs` over one denominator, so an
        // entry is an integer dot product reduced once
        let lhs: Vec<(Vec<BigInt>, BigInt)> = (0..self.rows)
            .map(|i| common_denominator((0..self.cols).map(|k| &self[(i, k)])))
            .collect();
        let rhs_cols: Vec<(Vec<BigInt>, BigInt)> = (0..rhs.cols)
            .map(|j| common_denominator((0..rhs.rows).map(|k| &rhs[(k, j)])))
            .collect();
        let mut out = QMatrix::zeros(self.rows, rhs.cols);
        for (i, (a, da)) in lhs.iter().enumerate() {
            for (j, (b, db)) in rhs_cols.iter().enumerate() {
                let mut acc = BigInt::zero();
                for (x, y) in a.iter().zip(b) {
                    if !x.is_zero() && !y.is_zero() {
                        acc += x * y;
                    }
                }
                if !acc.is_zero() {
                    out[(i, j)] = Rational::new(acc, da * db);
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &QMatrix) -> Result<QMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch("subtraction shapes differ".into()));
        }
        Ok(QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale_rows(&self, d: &[Rational]) -> QMatrix {
        QMatrix::from_fn(self.rows, self.cols, |r, c| &d[r] * &self[(r, c)])
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let v = &self[(r, c)];
                    if r == c {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|r| (0..r).all(|c| self[(r, c)] == self[(c, r)]))
    }

    /// Positions where `self` and `other` differ.
    pub fn diff_positions(&self, other: &QMatrix) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for r in 0..self.rows.min(other.rows) {
            for c in 0..self.cols.min(other.cols) {
                if self[(r, c)] != other[(r, c)] {
                    out.push((r, c));
                }
            }
        }
        out
    }

    /// Exact inverse by Gauss-Jordan elimination with row pivoting.
    pub fn inverse(&self) -> Result<QMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        // fraction-free Gauss-Jordan on the row-scaled integer matrix
        // [D M | I]; it ends at [det I | det (D M)^{-1}]
        let mut scales = Vec::with_capacity(n);
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for r in 0..n {
            let (mut nums, d) = common_denominator(self.row(r));
            nums.extend((0..n).map(|c| if c == r { BigInt::one() } else { BigInt::zero() }));
            rows.push(nums);
            scales.push(d);
        }
        let mut prev = BigInt::one();
        for k in 0..n {
            let pivot = (k..n).find(|&r| !rows[r][k].is_zero()).ok_or(Error::Singular)?;
            rows.swap(pivot, k);
            let prow = rows[k].clone();
            let pk = prow[k].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == k {
                    continue;
                }
                let f = std::mem::take(&mut row[k]);
                // columns before k are zero except an earlier pivot
                let done = if i < k { i..i + 1 } else { 0..0 };
                for j in done.chain(k + 1..2 * n) {
                    let mut v = &pk * &row[j];
                    if !f.is_zero() && !prow[j].is_zero() {
                        v -= &f * &prow[j];
                    }
                    row[j] = v / &prev;
                }
            }
            prev = pk;
        }
        // M^{-1} = (D M)^{-1} D
        Ok(QMatrix::from_fn(n, n, |r, c| {
            Rational::new(&rows[r][n + c] * &scales[c], rows[r][r].clone())
        }))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn inverse_small() {
        let m = QMatrix::from_rows(vec![vec![int(0), int(1)], vec![int(2), int(3)]]).unwrap();
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
        assert_eq!(inv[(0, 0)], rat(-3, 2));
    }

    #[test]
    fn inverse_with_fractions_and_swaps() {
        let m = QMatrix::from_rows(vec![
            vec![int(0), rat(1, 2), int(2), rat(-1, 3)],
            vec![int(0), int(0), rat(3, 4), int(1)],
            vec![rat(2, 5), int(1), int(0), int(3)],
            vec![int(1), rat(-7, 6), int(4), int(0)],
        ])
        .unwrap();
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
        assert!(inv.mul(&m).unwrap().is_identity());
    }

    #[test]
    fn singular_detected() {
        let m = QMatrix::from_rows(vec![vec![int(1), int(2)], vec![int(2), int(4)]]).unwrap();
        assert!(matches!(m.inverse(), Err(Error::Singular)));
    }

    #[test]
    fn shape_errors() {
        let a = QMatrix::zeros(2, 3);
        assert!(a.mul(&a).is_err());
        assert!(QMatrix::from_rows(vec![vec![int(1)], vec![]]).is_err());
    }
}
