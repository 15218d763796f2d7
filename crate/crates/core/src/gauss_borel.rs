//! Normalized Gauss-Borel factorization `M = S^{-1} H Sbar^{-T}`.
//!
//! Elimination without pivoting gives `M = L U`; then `S = L^{-1}`,
//! `H = diag(U)` and `Sbar^{-T} = diag(U)^{-1} U`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// `S`, lower unitriangular.
    pub s: QMatrix,
    /// `S^{-1}`, the `L` factor.
    pub s_inv: QMatrix,
    /// `Sbar`, lower unitriangular.
    pub sbar: QMatrix,
    /// `Sbar^{-1}`; its transpose is `diag(U)^{-1} U`.
    pub sbar_inv: QMatrix,
    pub h: Vec<Rational>,
}

impl Factorization {
    pub fn depth(&self) -> usize {
        self.h.len()
    }

    /// `S^{-1} diag(H) Sbar^{-T}`.
    pub fn reconstruct(&self) -> QMatrix {
        let lh = QMatrix::from_fn(self.depth(), self.depth(), |r, c| &self.s_inv[(r, c)] * &self.h[c]);
        lh.mul(&self.sbar_inv.transpose())
            .expect("square factors of equal size")
    }

    /// Leading `d x d` corners of every factor.
    pub fn restrict(&self, d: usize) -> Factorization {
        Factorization {
            s: self.s.leading(d),
            s_inv: self.s_inv.leading(d),
            sbar: self.sbar.leading(d),
            sbar_inv: self.sbar_inv.leading(d),
            h: self.h[..d].to_vec(),
        }
    }

    /// `H^{-1} S`, the coefficient matrix of the `B` family.
    pub fn h_inv_s(&self) -> QMatrix {
        let inv: Vec<Rational> = self.h.iter().map(|v| v.recip()).collect();
        self.s.scale_rows(&inv)
    }
}

/// Doolittle `M = L U` with unit-diagonal `L`; no pivoting.
pub fn doolittle(m: &QMatrix) -> Result<(QMatrix, QMatrix)> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("moment truncation must be square".into()));
    }
    let n = m.rows();
    let mut l = QMatrix::identity(n);
    let mut u = m.clone();
    for k in 0..n {
        if u[(k, k)].is_zero() {
            return Err(Error::Breakdown { index: k });
        }
        let pivot = u[(k, k)].clone();
        for i in k + 1..n {
            if u[(i, k)].is_zero() {
                continue;
            }
            let f = &u[(i, k)] / &pivot;
            u[(i, k)] = Rational::zero();
            for j in k + 1..n {
                if !u[(k, j)].is_zero() {
                    let d = &f * &u[(k, j)];
                    u[(i, j)] -= d;
                }
            }
            l[(i, k)] = f;
        }
    }
    Ok((l, u))
}

/// `M = S^{-1} H Sbar^{-T}`. Runs fraction-free elimination on a
/// row-scaled integer copy of `M` and of `M^T`, so every rational is formed
/// once at the end. Agrees with the Doolittle route.
pub fn factorize(m: &QMatrix) -> Result<Factorization> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("moment truncation must be square".into()));
    }
    let n = m.rows();
    let (a, dr) = integer_rows(n, |r, c| &m[(r, c)]);
    let fwd = bareiss(a)?;
    let (at, dc) = integer_rows(n, |r, c| &m[(c, r)]);
    let bwd = bareiss(at)?;
    let prev = |piv: &[BigInt], k: usize| if k == 0 { BigInt::one() } else { piv[k - 1].clone() };
    let q = |num: BigInt, den: BigInt| Rational::new(num, den);
    let h = (0..n)
        .map(|k| q(fwd.pivots[k].clone(), prev(&fwd.pivots, k) * &dr[k]))
        .collect();
    // with A = D M for diagonal D, S_A = D S D^{-1} and Sbar_A = Sbar
    let s = QMatrix::from_fn(n, n, |k, j| match j.cmp(&k) {
        std::cmp::Ordering::Greater => Rational::zero(),
        std::cmp::Ordering::Equal => Rational::one(),
        std::cmp::Ordering::Less => q(&fwd.aug[k][j] * &dr[j], prev(&fwd.pivots, k) * &dr[k]),
    });
    let sbar = QMatrix::from_fn(n, n, |k, j| match j.cmp(&k) {
        std::cmp::Ordering::Greater => Rational::zero(),
        std::cmp::Ordering::Equal => Rational::one(),
        std::cmp::Ordering::Less => q(&bwd.aug[k][j] * &dc[j], prev(&bwd.pivots, k) * &dc[k]),
    });
    let s_inv = QMatrix::from_fn(n, n, |i, k| match k.cmp(&i) {
        std::cmp::Ordering::Greater => Rational::zero(),
        std::cmp::Ordering::Equal => Rational::one(),
        std::cmp::Ordering::Less => q(&fwd.lower[i][k] * &dr[k], &fwd.pivots[k] * &dr[i]),
    });
    // Sbar^{-T} row k is the pivot row of the elimination over its pivot
    let sbar_inv = QMatrix::from_fn(n, n, |j, k| match k.cmp(&j) {
        std::cmp::Ordering::Greater => Rational::zero(),
        std::cmp::Ordering::Equal => Rational::one(),
        std::cmp::Ordering::Less => q(fwd.upper[k][j - k].clone(), fwd.pivots[k].clone()),
    });
    Ok(Factorization { s, s_inv, sbar, sbar_inv, h })
}

/// Clears denominators row by row: returns `D M` as integers and `D`.
fn integer_rows<'a>(n: usize, at: impl Fn(usize, usize) -> &'a Rational) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let mut rows = Vec::with_capacity(n);
    let mut scales = Vec::with_capacity(n);
    for r in 0..n {
        let d = (0..n).fold(BigInt::one(), |acc, c| acc.lcm(at(r, c).denom()));
        rows.push((0..n).map(|c| at(r, c).numer() * (&d / at(r, c).denom())).collect());
        scales.push(d);
    }
    (rows, scales)
}

/// Fraction-free elimination of `[A | I]`.
struct Bareiss {
    /// Leading principal minors of `A`.
    pivots: Vec<BigInt>,
    /// `lower[i][k]`: entry `(i, k)` just before step `k` eliminates it.
    lower: Vec<Vec<BigInt>>,
    /// `upper[k]`: columns `k..` of row `k` when it becomes the pivot row.
    upper: Vec<Vec<BigInt>>,
    /// `aug[k]`: columns `..=k` of the right half of row `k`.
    aug: Vec<Vec<BigInt>>,
}

fn bareiss(mut a: Vec<Vec<BigInt>>) -> Result<Bareiss> {
    let n = a.len();
    let mut aug: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut row = vec![BigInt::zero(); i + 1];
            row[i] = BigInt::one();
            row
        })
        .collect();
    let mut lower: Vec<Vec<BigInt>> = (0..n).map(Vec::with_capacity).collect();
    let mut upper = Vec::with_capacity(n);
    let mut pivots = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    for k in 0..n {
        let pk = a[k][k].clone();
        if pk.is_zero() {
            return Err(Error::Breakdown { index: k });
        }
        let (head, tail) = a.split_at_mut(k + 1);
        let (ahead, atail) = aug.split_at_mut(k + 1);
        let prow = &head[k];
        let paug = &ahead[k];
        for (off, row) in tail.iter_mut().enumerate() {
            let i = k + 1 + off;
            let f = std::mem::take(&mut row[k]);
            for j in k + 1..n {
                let mut v = &pk * &row[j];
                if !f.is_zero() && !prow[j].is_zero() {
                    v -= &f * &prow[j];
                }
                row[j] = v / &prev;
            }
            let erow = &mut atail[off];
            for j in 0..k {
                let mut v = &pk * &erow[j];
                if !f.is_zero() && !paug[j].is_zero() {
                    v -= &f * &paug[j];
                }
                erow[j] = v / &prev;
            }
            erow[k] = -(&f * &paug[k]) / &prev;
            erow[i] = &pk * &erow[i] / &prev;
            lower[i].push(f);
        }
        upper.push(head[k][k..].to_vec());
        pivots.push(pk.clone());
        prev = pk;
    }
    Ok(Bareiss { pivots, lower, upper, aug })
}

/// Inverse of a lower unitriangular matrix by forward substitution.
pub fn invert_unitriangular(t: &QMatrix) -> QMatrix {
    debug_assert!(t.is_square());
    debug_assert!((0..t.rows()).all(|i| t[(i, i)].is_one()));
    let n = t.rows();
    let mut inv = QMatrix::identity(n);
    for c in 0..n {
        for r in c + 1..n {
            let mut acc = Rational::zero();
            for k in c..r {
                let a = &t[(r, k)];
                if !a.is_zero() && !inv[(k, c)].is_zero() {
                    acc += a * &inv[(k, c)];
                }
            }
            inv[(r, c)] = -acc;
        }
    }
    inv
}

pub fn is_unit_lower(t: &QMatrix) -> bool {
    t.is_square()
        && (0..t.rows()).all(|r| {
            t[(r, r)].is_one() && (r + 1..t.cols()).all(|c| t[(r, c)].is_zero())
        })
}
