//! Christoffel-Darboux kernels `K^{[n]}(x, y) = sum_{i<=n} A_i(x) B_i(y)`.

use std::ops::RangeInclusive;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::check::CheckReport;
use crate::error::{Error, Result};
use crate::families::{check_biorthogonality_matrix, FamilyA, FamilyB};
use crate::gauss_borel::Factorization;
use crate::index::{n_minus_big, n_plus, Axis};
use crate::matrix::QMatrix;
use crate::measure::MomentCache;
use crate::moments::monomial_row;
use crate::poly::{BiPoly, PolyMatrix};
use crate::rational::{common_denominator, Rational};
use crate::recurrence::RecurrenceTruncation;

pub type Point = (Rational, Rational);

/// `p x q` value of `K^{[n]}` at `(x, y)`.
pub fn kernel_eval(a: &FamilyA, b: &FamilyB, n: usize, x: &Point, y: &Point) -> QMatrix {
    let mut k = QMatrix::zeros(a.width, b.width);
    for i in 0..=n {
        let av = a.eval(i, &x.0, &x.1);
        let bv = b.eval(i, &y.0, &y.1);
        for (r, ar) in av.iter().enumerate() {
            for (c, bc) in bv.iter().enumerate() {
                k[(r, c)] += ar * bc;
            }
        }
    }
    k
}

/// Ingredients of the Christoffel-Darboux formula at `(n, k)`.
///
/// The polynomial slices hold the normalizations `A H^{-1}` and `H B` on
/// which `T_k` acts.
#[derive(Clone, Debug)]
pub struct CDBlocks {
    pub axis: Axis,
    pub n: usize,
    pub tgt_rows: RangeInclusive<usize>,
    pub tgt_cols: RangeInclusive<usize>,
    pub src_rows: RangeInclusive<usize>,
    pub src_cols: RangeInclusive<usize>,
    /// `T_k` on `tgt_rows x tgt_cols`.
    pub t_gt_n: QMatrix,
    /// `T_k` on `src_rows x src_cols`.
    pub t_n_gt: QMatrix,
    /// `p x |tgt_rows|`.
    pub a_gt: PolyMatrix,
    /// `|tgt_cols| x q`.
    pub b_n: PolyMatrix,
    /// `p x |src_rows|`.
    pub a_n: PolyMatrix,
    /// `|src_cols| x q`.
    pub b_gt: PolyMatrix,
}

fn slice_t(t: &QMatrix, rows: &RangeInclusive<usize>, cols: &RangeInclusive<usize>) -> QMatrix {
    t.submatrix(*rows.start()..rows.end() + 1, *cols.start()..cols.end() + 1)
}

fn a_slice(a: &FamilyA, idx: &RangeInclusive<usize>) -> PolyMatrix {
    let mut m = PolyMatrix::zeros(a.width, idx.clone().count());
    for (col, i) in idx.clone().enumerate() {
        for r in 0..a.width {
            *m.get_mut(r, col) = a.get(i, r).clone();
        }
    }
    m
}

fn b_slice(b: &FamilyB, idx: &RangeInclusive<usize>) -> PolyMatrix {
    let mut m = PolyMatrix::zeros(idx.clone().count(), b.width);
    for (row, i) in idx.clone().enumerate() {
        for c in 0..b.width {
            *m.get_mut(row, c) = b.get(i, c).clone();
        }
    }
    m
}

/// `(A H^{-1}, H B)` restricted to the first `len` members.
pub fn recurrence_normalized(a: &FamilyA, b: &FamilyB, h: &[Rational], len: usize) -> (FamilyA, FamilyB) {
    let h_inv: Vec<Rational> = h.iter().map(Rational::recip).collect();
    (
        a.truncated(len).scaled(&h_inv),
        b.truncated(len).scaled(h),
    )
}

pub fn cd_blocks(t: &RecurrenceTruncation, a: &FamilyA, b: &FamilyB, n: usize) -> Result<CDBlocks> {
    let (q, p, axis) = (t.q, t.p, t.axis);
    let tgt_end = n_plus(n, p, axis);
    let src_end = n_plus(n, q, axis);
    let need = tgt_end.max(src_end) + 1;
    let available = t.size().min(a.len()).min(b.len());
    if need > available {
        return Err(Error::InsufficientDepth {
            what: "Christoffel-Darboux blocks",
            required: need,
            available,
        });
    }
    let tgt_rows = n + 1..=tgt_end;
    let tgt_cols = n_minus_big(n + 1, p, axis)..=n;
    let src_rows = n_minus_big(n + 1, q, axis)..=n;
    let src_cols = n + 1..=src_end;
    let (ah, bh) = recurrence_normalized(a, b, &t.h, need);
    Ok(CDBlocks {
        axis,
        n,
        t_gt_n: slice_t(&t.data, &tgt_rows, &tgt_cols),
        t_n_gt: slice_t(&t.data, &src_rows, &src_cols),
        a_gt: a_slice(&ah, &tgt_rows),
        b_n: b_slice(&bh, &tgt_cols),
        a_n: a_slice(&ah, &src_rows),
        b_gt: b_slice(&bh, &src_cols),
        tgt_rows,
        tgt_cols,
        src_rows,
        src_cols,
    })
}

impl CDBlocks {
    /// Right-hand side of the formula at `(x, y)`.
    pub fn rhs(&self, x: &Point, y: &Point) -> QMatrix {
        let first = self
            .a_gt
            .eval(&x.0, &x.1)
            .mul(&self.t_gt_n)
            .and_then(|m| m.mul(&self.b_n.eval(&y.0, &y.1)));
        let second = self
            .a_n
            .eval(&x.0, &x.1)
            .mul(&self.t_n_gt)
            .and_then(|m| m.mul(&self.b_gt.eval(&y.0, &y.1)));
        first
            .and_then(|f| f.sub(&second?))
            .expect("block shapes conform")
    }
}

/// `(x_k - y_k) K^{[n]}(x, y)` against the block formula at one point pair.
pub fn check_cd_formula(blocks: &CDBlocks, a: &FamilyA, b: &FamilyB, x: &Point, y: &Point) -> CheckReport {
    let mut report = CheckReport::new();
    let diff = blocks.axis.coord(&x.0, &x.1) - blocks.axis.coord(&y.0, &y.1);
    let lhs = kernel_eval(a, b, blocks.n, x, y).scale_rows(&vec![diff; a.width]);
    let rhs = blocks.rhs(x, y);
    report.expect(
        lhs == rhs,
        || format!("k={}, n={}, x=({},{}), y=({},{})", blocks.axis.k(), blocks.n, x.0, x.1, y.0, y.1),
        || format!("residual {}", lhs.sub(&rhs).expect("same shape")),
    );
    report
}

fn max_total_deg<'a>(polys: impl Iterator<Item = &'a BiPoly>) -> usize {
    polys.filter_map(BiPoly::total_deg).max().unwrap_or(0)
}

/// `(d+1)^2` points with distinct small integer coordinates.
pub fn grid(d: usize) -> Vec<Point> {
    let vals: Vec<Rational> = (0..=d as i64).map(|v| Rational::from_integer((v - d as i64 / 2).into())).collect();
    let mut out = Vec::with_capacity(vals.len() * vals.len());
    for u in &vals {
        for v in &vals {
            out.push((u.clone(), v.clone()));
        }
    }
    out
}

/// `v^T t` for a row vector `v` indexed by `rows` and a block `t`.
fn row_times(v: &[Rational], rows: &RangeInclusive<usize>, t: &QMatrix) -> Vec<Rational> {
    (0..t.cols())
        .map(|col| {
            let mut acc = Rational::zero();
            for (row, i) in rows.clone().enumerate() {
                let tv = &t[(row, col)];
                if !tv.is_zero() && !v[i].is_zero() {
                    acc += &v[i] * tv;
                }
            }
            acc
        })
        .collect()
}

/// The formula on a tensor grid with more nodes per variable than any
/// variable's degree, so grid equality is polynomial equality.
pub fn check_cd_grid(t: &RecurrenceTruncation, a: &FamilyA, b: &FamilyB, n: usize) -> Result<CheckReport> {
    let blocks = cd_blocks(t, a, b, n)?;
    let top = *blocks.tgt_rows.end().max(blocks.src_cols.end());
    let deg = max_total_deg((0..=top).flat_map(|i| a.polys[i].iter().chain(b.polys[i].iter())));
    // the factor (x_k - y_k) adds one to the degree in x_k and y_k
    let pts = grid(deg + 1);
    let (ah, bh) = recurrence_normalized(a, b, &t.h, top + 1);
    let (pw, qw) = (a.width, b.width);
    // av[x][r][i] and bv[y][c][j]
    let av: Vec<Vec<Vec<Rational>>> = pts
        .iter()
        .map(|x| {
            let vals: Vec<Vec<Rational>> = (0..=top).map(|i| ah.eval(i, &x.0, &x.1)).collect();
            (0..pw).map(|r| vals.iter().map(|v| v[r].clone()).collect()).collect()
        })
        .collect();
    let bv: Vec<Vec<Vec<Rational>>> = pts
        .iter()
        .map(|y| {
            let vals: Vec<Vec<Rational>> = (0..=top).map(|j| bh.eval(j, &y.0, &y.1)).collect();
            (0..qw).map(|c| vals.iter().map(|v| v[c].clone()).collect()).collect()
        })
        .collect();
    // both sides over common denominators, compared as integers; grid
    // coordinates are integers so the factor (x_k - y_k) is too
    let bv: Vec<Vec<(Vec<BigInt>, BigInt)>> = bv
        .iter()
        .map(|cols| cols.iter().map(common_denominator).collect())
        .collect();
    let mut report = CheckReport::new();
    for (xi, x) in pts.iter().enumerate() {
        let xk = blocks.axis.coord(&x.0, &x.1);
        for r in 0..pw {
            let (a_row, da) = common_denominator(&av[xi][r][..=n]);
            let mut via = row_times(&av[xi][r], &blocks.tgt_rows, &blocks.t_gt_n);
            via.extend(row_times(&av[xi][r], &blocks.src_rows, &blocks.t_n_gt).into_iter().map(|v| -v));
            let (via, dv) = common_denominator(&via);
            let cols: Vec<usize> = blocks.tgt_cols.clone().chain(blocks.src_cols.clone()).collect();
            for (yi, y) in pts.iter().enumerate() {
                let diff = (xk - blocks.axis.coord(&y.0, &y.1)).to_integer();
                for c in 0..qw {
                    let b_col = &bv[yi][c].0;
                    let mut lhs = BigInt::zero();
                    for (ai, bi) in a_row.iter().zip(b_col) {
                        lhs += ai * bi;
                    }
                    let mut rhs = BigInt::zero();
                    for (v, &j) in via.iter().zip(&cols) {
                        rhs += v * &b_col[j];
                    }
                    let (lhs, rhs) = (lhs * &diff * &dv, rhs * &da);
                    report.expect(
                        lhs == rhs,
                        || format!("k={}, n={n}, x=({},{}), y=({},{}), entry ({r},{c})", blocks.axis.k(), x.0, x.1, y.0, y.1),
                        || format!("scaled residual {}", &lhs - &rhs),
                    );
                }
            }
        }
    }
    Ok(report)
}

/// The formula as a polynomial identity in `(x, y)`. Both sides are
/// bilinear in polynomials of `x` and of `y`, so for each monomial of `x`
/// the collected polynomial in `y` must vanish.
pub fn check_cd_identity(t: &RecurrenceTruncation, a: &FamilyA, b: &FamilyB, n: usize) -> Result<CheckReport> {
    let blocks = cd_blocks(t, a, b, n)?;
    let axis = blocks.axis;
    let top = *blocks.tgt_rows.end().max(blocks.src_cols.end());
    let (ah, bh) = recurrence_normalized(a, b, &t.h, top + 1);
    let mut report = CheckReport::new();
    for r in 0..a.width {
        for c in 0..b.width {
            // (x-poly, y-poly) pairs with their weights in lhs - rhs
            let mut left: Vec<BiPoly> = Vec::new();
            let mut right: Vec<BiPoly> = Vec::new();
            for i in 0..=n {
                left.push(ah.get(i, r).mul_by_variable(axis));
                right.push(bh.get(i, c).clone());
                left.push(ah.get(i, r).scale(&-Rational::one()));
                right.push(bh.get(i, c).mul_by_variable(axis));
            }
            for (i, row) in blocks.tgt_rows.clone().zip(0..) {
                let mut acc = BiPoly::zero();
                for (j, col) in blocks.tgt_cols.clone().zip(0..) {
                    acc.add_scaled(bh.get(j, c), &-&blocks.t_gt_n[(row, col)]);
                }
                left.push(ah.get(i, r).clone());
                right.push(acc);
            }
            for (i, row) in blocks.src_rows.clone().zip(0..) {
                let mut acc = BiPoly::zero();
                for (j, col) in blocks.src_cols.clone().zip(0..) {
                    acc.add_scaled(bh.get(j, c), &blocks.t_n_gt[(row, col)]);
                }
                left.push(ah.get(i, r).clone());
                right.push(acc);
            }
            let mut by_x: BTreeMap<usize, BiPoly> = BTreeMap::new();
            for (lp, rp) in left.iter().zip(&right) {
                if rp.is_zero() {
                    continue;
                }
                for (pos, coef) in lp.terms() {
                    by_x.entry(pos).or_insert_with(BiPoly::zero).add_scaled(rp, coef);
                }
            }
            let bad: Vec<usize> = by_x.iter().filter(|(_, p)| !p.is_zero()).map(|(&pos, _)| pos).collect();
            report.expect(
                bad.is_empty(),
                || format!("k={}, n={n}, entry ({r},{c})", axis.k()),
                || format!("residual at x-monomial positions {bad:?}"),
            );
        }
    }
    Ok(report)
}

/// `X_{[p]}^T(x) (M^{[n]})^{-1} X_{[q]}(y)` with the inverse taken by
/// Gauss-Jordan elimination, independent of the LU factors. Rows of the
/// inverse are kept over common denominators for repeated evaluation.
pub struct AbcKernel {
    p: usize,
    q: usize,
    rows: Vec<(Vec<BigInt>, BigInt)>,
}

impl AbcKernel {
    pub fn new(m_inv: &QMatrix, p: usize, q: usize) -> Self {
        let rows = (0..m_inv.rows()).map(|i| common_denominator(m_inv.row(i))).collect();
        AbcKernel { p, q, rows }
    }

    pub fn eval(&self, x: &Point, y: &Point) -> QMatrix {
        let size = self.rows.len();
        let ys: Vec<Rational> = (0..size).map(|j| monomial_row(j, self.q, &y.0, &y.1)).collect();
        let (yn, yd) = common_denominator(&ys);
        let mut k = QMatrix::zeros(self.p, self.q);
        for (i, (row, d)) in self.rows.iter().enumerate() {
            let xi = monomial_row(i, self.p, &x.0, &x.1);
            for c in 0..self.q {
                let mut acc = BigInt::zero();
                for j in (c..size).step_by(self.q) {
                    acc += &row[j] * &yn[j];
                }
                if !acc.is_zero() {
                    k[(i % self.p, c)] += &xi * Rational::new(acc, d * &yd);
                }
            }
        }
        k
    }
}

pub fn check_abc(
    m: &QMatrix,
    a: &FamilyA,
    b: &FamilyB,
    n: usize,
    pairs: &[(Point, Point)],
) -> Result<CheckReport> {
    let abc = AbcKernel::new(&m.leading(n + 1).inverse()?, a.width, b.width);
    let mut report = CheckReport::new();
    for (x, y) in pairs {
        let lhs = kernel_eval(a, b, n, x, y);
        let rhs = abc.eval(x, y);
        report.expect(
            lhs == rhs,
            || format!("n={n}, x=({},{}), y=({},{})", x.0, x.1, y.0, y.1),
            || format!("residual {}", lhs.sub(&rhs).expect("same shape")),
        );
    }
    Ok(report)
}

/// `K^{[n]}(x, .)` as a polynomial in the second argument, component `(r, c)`.
fn kernel_in_second(a: &FamilyA, b: &FamilyB, n: usize, x: &Point, r: usize, c: usize) -> BiPoly {
    let mut out = BiPoly::zero();
    for i in 0..=n {
        out.add_scaled(b.get(i, c), &a.get(i, r).eval(&x.0, &x.1));
    }
    out
}

/// `K^{[n]}(., y)` as a polynomial in the first argument.
fn kernel_in_first(a: &FamilyA, b: &FamilyB, n: usize, y: &Point, r: usize, c: usize) -> BiPoly {
    let mut out = BiPoly::zero();
    for i in 0..=n {
        out.add_scaled(a.get(i, r), &b.get(i, c).eval(&y.0, &y.1));
    }
    out
}

/// The middle identity `(H^{-1}S)^{[n]} M^{[n]} (Sbar^T)^{[n]} = I`, then the
/// full double integral at the given point pairs through the moments.
pub fn check_reproduction(
    f: &Factorization,
    m: &QMatrix,
    a: &FamilyA,
    b: &FamilyB,
    cache: &MomentCache,
    n: usize,
    pairs: &[(Point, Point)],
) -> CheckReport {
    let mut report = check_biorthogonality_matrix(f, m, n + 1);
    report.merge(check_reproduction_integral(a, b, cache, n, pairs));
    report
}

/// `∫ K^{[n]}(x, u) dμ(u) K^{[n]}(u, y) = K^{[n]}(x, y)` through the moments.
/// The middle identity on a window covers every smaller `n` too, so callers
/// sweeping `n` check it once.
pub fn check_reproduction_integral(
    a: &FamilyA,
    b: &FamilyB,
    cache: &MomentCache,
    n: usize,
    pairs: &[(Point, Point)],
) -> CheckReport {
    let mut report = CheckReport::new();
    let (pw, qw) = (a.width, b.width);
    for (x, y) in pairs {
        let want = kernel_eval(a, b, n, x, y);
        let left: Vec<Vec<BiPoly>> = (0..pw)
            .map(|r| (0..qw).map(|bi| kernel_in_second(a, b, n, x, r, bi)).collect())
            .collect();
        let right: Vec<Vec<BiPoly>> = (0..pw)
            .map(|ai| (0..qw).map(|c| kernel_in_first(a, b, n, y, ai, c)).collect())
            .collect();
        for r in 0..pw {
            for c in 0..qw {
                let mut total = Some(Rational::zero());
                for bi in 0..qw {
                    for ai in 0..pw {
                        total = match (total, cache.pair(bi, ai, &left[r][bi], &right[ai][c])) {
                            (Some(t), Some(v)) => Some(t + v),
                            _ => None,
                        };
                    }
                }
                match total {
                    None => report.skip(),
                    Some(v) => report.expect(
                        v == want[(r, c)],
                        || format!("n={n}, x=({},{}), y=({},{}), entry ({r},{c})", x.0, x.1, y.0, y.1),
                        || format!("{v} != {}", want[(r, c)]),
                    ),
                }
            }
        }
    }
    report
}

pub fn projection_threshold(p: &PolyMatrix, width: usize) -> usize {
    p.grlex_pos().unwrap_or(0) * width + width - 1
}

fn check_monic(p: &PolyMatrix, width: usize) -> Result<()> {
    if p.rows() != width || p.cols() != width || !p.is_monic() {
        return Err(Error::DimensionMismatch(format!(
            "projection needs a monic {width}x{width} matrix polynomial"
        )));
    }
    Ok(())
}

fn compare_poly_matrix(
    report: &mut CheckReport,
    got: &PolyMatrix,
    want: &PolyMatrix,
    points: &[Point],
    label: &str,
) {
    for r in 0..want.rows() {
        for c in 0..want.cols() {
            report.expect(
                got.get(r, c) == want.get(r, c),
                || format!("{label}, entry ({r},{c})"),
                || "polynomials differ".into(),
            );
        }
    }
    for x in points {
        let (g, w) = (got.eval(&x.0, &x.1), want.eval(&x.0, &x.1));
        report.expect(g == w, || format!("{label}, x=({},{})", x.0, x.1), || "values differ".into());
    }
}

/// `∫ K^{[n]}(x, y) dμ(y) P(y) = P(x)` for monic `p x p` `P`, `n >= Ip + p - 1`.
pub fn check_projection(
    a: &FamilyA,
    b: &FamilyB,
    cache: &MomentCache,
    n: usize,
    poly: &PolyMatrix,
    points: &[Point],
) -> Result<CheckReport> {
    let (pw, qw) = (a.width, b.width);
    check_monic(poly, pw)?;
    let threshold = projection_threshold(poly, pw);
    if n < threshold {
        return Err(Error::BelowThreshold { n, threshold });
    }
    let mut report = CheckReport::new();
    let mut got = PolyMatrix::zeros(pw, pw);
    for c in 0..pw {
        for i in 0..=n {
            // sum_{b,a'} ∫ B_i^{(b)} dμ_{b,a'} P_{a',c}
            let mut coef = Rational::zero();
            for bi in 0..qw {
                for ai in 0..pw {
                    match cache.pair(bi, ai, b.get(i, bi), poly.get(ai, c)) {
                        Some(v) => coef += v,
                        None => {
                            report.skip();
                            return Ok(report);
                        }
                    }
                }
            }
            for r in 0..pw {
                got.get_mut(r, c).add_scaled(a.get(i, r), &coef);
            }
        }
    }
    compare_poly_matrix(&mut report, &got, poly, points, &format!("n={n}"));
    Ok(report)
}

/// `∫ P(x) dμ(x) K^{[n]}(x, y) = P(y)` for monic `q x q` `P`, `n >= Iq + q - 1`.
pub fn check_projection_dual(
    a: &FamilyA,
    b: &FamilyB,
    cache: &MomentCache,
    n: usize,
    poly: &PolyMatrix,
    points: &[Point],
) -> Result<CheckReport> {
    let (pw, qw) = (a.width, b.width);
    check_monic(poly, qw)?;
    let threshold = projection_threshold(poly, qw);
    if n < threshold {
        return Err(Error::BelowThreshold { n, threshold });
    }
    let mut report = CheckReport::new();
    let mut got = PolyMatrix::zeros(qw, qw);
    for r in 0..qw {
        for i in 0..=n {
            let mut coef = Rational::zero();
            for bi in 0..qw {
                for ai in 0..pw {
                    match cache.pair(bi, ai, poly.get(r, bi), a.get(i, ai)) {
                        Some(v) => coef += v,
                        None => {
                            report.skip();
                            return Ok(report);
                        }
                    }
                }
            }
            for c in 0..qw {
                got.get_mut(r, c).add_scaled(b.get(i, c), &coef);
            }
        }
    }
    compare_poly_matrix(&mut report, &got, poly, points, &format!("dual, n={n}"));
    Ok(report)
}

/// `K^{[n]} - K^{[n-1]}` is the outer product of member `n`.
pub fn kernel_increment(a: &FamilyA, b: &FamilyB, n: usize, x: &Point, y: &Point) -> QMatrix {
    let av = a.eval(n, &x.0, &x.1);
    let bv = b.eval(n, &y.0, &y.1);
    QMatrix::from_fn(av.len(), bv.len(), |r, c| &av[r] * &bv[c])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::extract_families;
    use crate::gauss_borel::factorize;
    use crate::measure::{MeasureMatrix, MeasureSpec};
    use crate::moments::assemble_moments;
    use crate::rational::{int, rat};
    use crate::recurrence::{build_recurrence, required_depth};

    struct Sys {
        f: Factorization,
        m: QMatrix,
        a: FamilyA,
        b: FamilyB,
        cache: MomentCache,
    }

    fn system(q: usize, p: usize, d: usize) -> Sys {
        let specs = (0..q * p)
            .map(|i| {
                let dens = BiPoly::from_terms([(0, int(1 + i as i64)), (2, rat(1, 3)), (4, rat(-1, 5))]);
                MeasureSpec::rect((rat(-1, 2 + i as i64), int(1 + i as i64)), (rat(-1, 1 + i as i64), rat(2 + i as i64, 3)), dens).unwrap()
            })
            .collect();
        let mm = MeasureMatrix::new(q, p, specs).unwrap();
        let dd = required_depth(d, q, p);
        let m = assemble_moments(&mm, dd).unwrap().data;
        let f = factorize(&m).unwrap();
        let (a, b) = extract_families(&f, q, p);
        let cache = mm.moment_cache(12);
        Sys { f, m, a, b, cache }
    }

    fn lebesgue() -> Sys {
        let mm = MeasureMatrix::new(1, 1, vec![MeasureSpec::lebesgue_square(int(-1), int(1)).unwrap()]).unwrap();
        let m = assemble_moments(&mm, 10).unwrap().data;
        let f = factorize(&m).unwrap();
        let (a, b) = extract_families(&f, 1, 1);
        Sys { cache: mm.moment_cache(12), f, m, a, b }
    }

    #[test]
    fn kernel_examples() {
        let s = lebesgue();
        let o = (int(0), int(0));
        assert_eq!(kernel_eval(&s.a, &s.b, 0, &o, &(int(5), int(7)))[(0, 0)], rat(1, 4));
        let x = (int(1), int(0));
        assert_eq!(kernel_eval(&s.a, &s.b, 1, &x, &x)[(0, 0)], int(1));
        let y = (rat(1, 3), int(2));
        let diff = kernel_eval(&s.a, &s.b, 3, &x, &y).sub(&kernel_eval(&s.a, &s.b, 2, &x, &y)).unwrap();
        assert_eq!(diff, kernel_increment(&s.a, &s.b, 3, &x, &y));
    }

    #[test]
    fn worked_blocks() {
        let s = system(1, 2, 8);
        let t = build_recurrence(&s.f, 1, 2, Axis::X1, 8).unwrap();
        let bl = cd_blocks(&t, &s.a, &s.b, 3).unwrap();
        assert_eq!((bl.tgt_rows.clone(), bl.tgt_cols.clone()), (4..=7, 2..=3));
        assert_eq!((bl.src_rows.clone(), bl.src_cols.clone()), (2..=3, 4..=6));
        assert!(bl.t_gt_n[(3, 0)].is_zero());
        assert_eq!(bl.t_n_gt.row(0), &[int(1), int(0), int(0)]);
        assert!(bl.t_n_gt[(1, 2)].is_one());
        assert_eq!((bl.b_gt.rows(), bl.a_gt.cols()), (3, 4));
    }

    #[test]
    fn cd_holds() {
        for (q, p) in [(1, 1), (1, 2), (2, 1)] {
            let s = system(q, p, 10);
            for axis in Axis::BOTH {
                let t = build_recurrence(&s.f, q, p, axis, 10).unwrap();
                for n in 0..3 {
                    let bl = cd_blocks(&t, &s.a, &s.b, n).unwrap();
                    let x = (rat(1, 2), rat(-3, 4));
                    let y = (rat(2, 3), int(5));
                    assert!(check_cd_formula(&bl, &s.a, &s.b, &x, &y).passed());
                    assert!(check_cd_formula(&bl, &s.a, &s.b, &x, &x).passed());
                }
                assert!(check_cd_identity(&t, &s.a, &s.b, 1).unwrap().passed());
                assert!(check_cd_grid(&t, &s.a, &s.b, 1).unwrap().passed());
                let mut bad = t.clone();
                let (r, c) = (n_plus(1, p, axis), 1);
                bad.data[(r, c)] += int(1);
                assert!(!check_cd_identity(&bad, &s.a, &s.b, 1).unwrap().passed());
                assert!(!check_cd_grid(&bad, &s.a, &s.b, 1).unwrap().passed());
            }
        }
    }

    #[test]
    fn abc_and_reproduction() {
        let s = system(1, 2, 6);
        let pairs = vec![((rat(1, 2), int(3)), (rat(-1, 3), rat(1, 7)))];
        for n in 0..6 {
            assert!(check_abc(&s.m, &s.a, &s.b, n, &pairs).unwrap().passed());
            let rep = check_reproduction(&s.f, &s.m, &s.a, &s.b, &s.cache, n, &pairs);
            assert!(rep.passed() && rep.unchecked == 0, "{rep:?}");
        }
        let l = lebesgue();
        let o = (int(0), int(0));
        assert_eq!(AbcKernel::new(&l.m.leading(1).inverse().unwrap(), 1, 1).eval(&o, &o)[(0, 0)], rat(1, 4));
    }

    #[test]
    fn projection() {
        let s = lebesgue();
        let x = PolyMatrix::monomial_identity(1, 1);
        let pts = vec![(rat(1, 2), int(3))];
        assert!(check_projection(&s.a, &s.b, &s.cache, 1, &x, &pts).unwrap().passed());
        assert!(matches!(
            check_projection(&s.a, &s.b, &s.cache, 0, &x, &pts),
            Err(Error::BelowThreshold { n: 0, threshold: 1 })
        ));
        let t = system(2, 2, 4);
        let mut poly = PolyMatrix::monomial_identity(2, 2);
        *poly.get_mut(0, 1) = BiPoly::from_terms([(0, int(3)), (1, rat(1, 2))]);
        let n = projection_threshold(&poly, 2);
        assert_eq!(n, 5);
        assert!(check_projection(&t.a, &t.b, &t.cache, n, &poly, &pts).unwrap().passed());
        assert!(check_projection_dual(&t.a, &t.b, &t.cache, n, &poly, &pts).unwrap().passed());
    }
}
