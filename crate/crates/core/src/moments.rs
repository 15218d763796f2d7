//! Scalar-indexed truncations of the moment matrix and of the shift
//! operators `Lambda_{[r];k}`.

use num_traits::One;

use crate::check::CheckReport;
use crate::error::{Error, Result};
use crate::index::{exponents_of, n_plus, pair_of, Axis};
use crate::matrix::QMatrix;
use crate::measure::{MeasureMatrix, MomentCache};
use crate::rational::{pow, Rational};

/// Leading `D x D` corner of the moment matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentTruncation {
    pub q: usize,
    pub p: usize,
    pub data: QMatrix,
}

impl MomentTruncation {
    pub fn depth(&self) -> usize {
        self.data.rows()
    }

    pub fn leading(&self, d: usize) -> MomentTruncation {
        MomentTruncation {
            q: self.q,
            p: self.p,
            data: self.data.leading(d),
        }
    }
}

/// Largest total degree of a moment that a `depth x depth` truncation uses.
pub fn moment_degree(depth: usize, q: usize, p: usize) -> usize {
    if depth == 0 {
        return 0;
    }
    pair_of((depth - 1) / q).i + pair_of((depth - 1) / p).i
}

/// Entry `(m, n)` is `∫ X_{⌊m/q⌋} dμ_{m mod q, n mod p} X_{⌊n/p⌋}`.
pub fn assemble_moments(mm: &MeasureMatrix, depth: usize) -> Result<MomentTruncation> {
    let cache = mm.moment_cache(moment_degree(depth, mm.q(), mm.p()));
    assemble_from_cache(mm, &cache, depth)
}

pub fn assemble_from_cache(
    mm: &MeasureMatrix,
    cache: &MomentCache,
    depth: usize,
) -> Result<MomentTruncation> {
    if depth == 0 {
        return Err(Error::config("depth", "must be at least 1"));
    }
    let (q, p) = (mm.q(), mm.p());
    let mut data = QMatrix::zeros(depth, depth);
    for m in 0..depth {
        let (r1, r2) = exponents_of(m / q);
        for n in 0..depth {
            let (c1, c2) = exponents_of(n / p);
            let (b, a) = (m % q, n % p);
            data[(m, n)] = match cache.get(b, a, r1 + c1, r2 + c2) {
                Some(v) => v.clone(),
                // reports the out-of-range moment
                None => mm.get(b, a).moment(r1 + c1, r2 + c2)?,
            };
        }
    }
    Ok(MomentTruncation { q, p, data })
}

/// Rows `0..rows` of `Lambda_{[r];k}`, stored by the positions of their 1s.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftTruncation {
    pub r: usize,
    pub axis: Axis,
    pub rows: usize,
    pub cols: usize,
    pub ones: Vec<(usize, usize)>,
}

impl ShiftTruncation {
    pub fn to_matrix(&self) -> QMatrix {
        let mut m = QMatrix::zeros(self.rows, self.cols);
        for &(n, c) in &self.ones {
            m[(n, c)] = Rational::one();
        }
        m
    }
}

pub fn shift_operator(r: usize, axis: Axis, rows: usize) -> ShiftTruncation {
    let ones: Vec<_> = (0..rows).map(|n| (n, n_plus(n, r, axis))).collect();
    let cols = ones.last().map_or(0, |&(_, c)| c + 1);
    ShiftTruncation {
        r,
        axis,
        rows,
        cols,
        ones,
    }
}

/// Compares `Lambda_{[q];k} M` with `M Lambda_{[p];k}^T` on every entry
/// both sides can read from the truncation.
pub fn check_hankel_symmetry(m: &MomentTruncation, axis: Axis) -> Result<CheckReport> {
    let d = m.depth();
    let rows = (0..d).take_while(|&i| n_plus(i, m.q, axis) < d).count();
    let cols = (0..d).take_while(|&j| n_plus(j, m.p, axis) < d).count();
    if rows == 0 || cols == 0 {
        return Err(Error::EmptyWindow { depth: d });
    }
    let mut report = CheckReport::new();
    for i in 0..rows {
        let si = n_plus(i, m.q, axis);
        for j in 0..cols {
            let sj = n_plus(j, m.p, axis);
            let (lhs, rhs) = (&m.data[(si, j)], &m.data[(i, sj)]);
            report.expect(
                lhs == rhs,
                || format!("({i},{j})"),
                || format!("{lhs} != {rhs}"),
            );
        }
    }
    Ok(report)
}

/// Scalar value of `X_{[r]}(x)` at row `n`.
pub fn monomial_row(n: usize, r: usize, x1: &Rational, x2: &Rational) -> Rational {
    let (e1, e2) = exponents_of(n / r);
    pow(x1, e1) * pow(x2, e2)
}

/// First `count` rows of `Lambda_{[r];k} X_{[r]}(x)`.
pub fn apply_shift_to_monomials(
    r: usize,
    axis: Axis,
    x1: &Rational,
    x2: &Rational,
    count: usize,
) -> Vec<Rational> {
    (0..count)
        .map(|n| monomial_row(n_plus(n, r, axis), r, x1, x2))
        .collect()
}

/// Whether `Lambda X = x_k X` holds row by row for the first `count` rows.
pub fn check_eigen_relation(r: usize, axis: Axis, x1: &Rational, x2: &Rational, count: usize) -> bool {
    let xk = axis.coord(x1, x2);
    apply_shift_to_monomials(r, axis, x1, x2, count)
        .iter()
        .enumerate()
        .all(|(n, v)| *v == xk * monomial_row(n, r, x1, x2))
}

/// `true` if the leading `d x d` corner equals `small` entrywise.
pub fn is_leading_of(big: &MomentTruncation, small: &MomentTruncation) -> bool {
    let d = small.depth();
    d <= big.depth() && big.data.leading(d) == small.data
}
