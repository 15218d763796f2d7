//! Recurrence matrices `T_k = S Lambda_{[q];k} S^{-1}` and their band.
//!
//! `T_k` acts on `S X_{[q]} = H B` from the left and on `A H^{-1}` from the
//! right; the entrywise relations are checked on those normalizations.

use num_traits::Zero;
use serde::Serialize;

use crate::check::CheckReport;
use crate::error::{Error, Result};
use crate::families::{FamilyA, FamilyB};
use crate::gauss_borel::Factorization;
use crate::index::{in_complement_j, n_minus_big, n_plus, Axis};
use crate::matrix::QMatrix;
use crate::poly::BiPoly;
use crate::rational::Rational;

/// Inclusive range of potentially nonzero entries along a row or column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Band {
    pub first: usize,
    pub last: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceTruncation {
    pub axis: Axis,
    pub q: usize,
    pub p: usize,
    pub data: QMatrix,
    /// `H` at the extended depth.
    pub h: Vec<Rational>,
    pub row_bands: Vec<Band>,
    pub col_bands: Vec<Band>,
}

/// Row `n`: from `N^-_{p;k}(n)` to `n^+_{q;k}`.
pub fn row_band(n: usize, q: usize, p: usize, axis: Axis) -> Band {
    Band {
        first: n_minus_big(n, p, axis),
        last: n_plus(n, q, axis),
    }
}

/// Column `n`: from `N^-_{q;k}(n)` to `n^+_{p;k}`.
pub fn col_band(n: usize, q: usize, p: usize, axis: Axis) -> Band {
    Band {
        first: n_minus_big(n, q, axis),
        last: n_plus(n, p, axis),
    }
}

/// Extended depth at which both forms of `T_1` and `T_2` are exact on the
/// leading `d x d` window.
pub fn required_depth(d: usize, q: usize, p: usize) -> usize {
    let last = d.saturating_sub(1);
    n_plus(last, q, Axis::X2).max(n_plus(last, p, Axis::X2)) + 1
}

fn ensure_depth(f: &Factorization, d: usize, q: usize, p: usize) -> Result<()> {
    let required = required_depth(d, q, p);
    if f.depth() < required {
        return Err(Error::InsufficientDepth {
            what: "recurrence matrix",
            required,
            available: f.depth(),
        });
    }
    Ok(())
}

/// Primal form: `T_{n,m} = sum_j S_{n,j} S^{-1}_{n^+_{q;k}(j), m}`.
pub fn primal_form(f: &Factorization, q: usize, axis: Axis, d: usize) -> QMatrix {
    let mut t = QMatrix::zeros(d, d);
    for n in 0..d {
        for j in 0..=n {
            let s = &f.s[(n, j)];
            if s.is_zero() {
                continue;
            }
            let row = n_plus(j, q, axis);
            for m in 0..d.min(row + 1) {
                let v = &f.s_inv[(row, m)];
                if !v.is_zero() {
                    t[(n, m)] += s * v;
                }
            }
        }
    }
    t
}

/// Dual form: `T_{n,m} = (H_n / H_m) sum_l Sbar^{-1}_{n^+_{p;k}(l), n} Sbar_{m,l}`.
pub fn dual_form(f: &Factorization, p: usize, axis: Axis, d: usize) -> QMatrix {
    let mut t = QMatrix::zeros(d, d);
    for m in 0..d {
        for l in 0..=m {
            let sb = &f.sbar[(m, l)];
            if sb.is_zero() {
                continue;
            }
            let row = n_plus(l, p, axis);
            for n in 0..d.min(row + 1) {
                let v = &f.sbar_inv[(row, n)];
                if !v.is_zero() {
                    t[(n, m)] += sb * v;
                }
            }
        }
    }
    for n in 0..d {
        for m in 0..d {
            if !t[(n, m)].is_zero() {
                let r = &f.h[n] / &f.h[m];
                t[(n, m)] *= r;
            }
        }
    }
    t
}

pub fn build_recurrence(
    f: &Factorization,
    q: usize,
    p: usize,
    axis: Axis,
    d: usize,
) -> Result<RecurrenceTruncation> {
    ensure_depth(f, d, q, p)?;
    Ok(RecurrenceTruncation {
        axis,
        q,
        p,
        data: primal_form(f, q, axis, d),
        h: f.h.clone(),
        row_bands: (0..d).map(|n| row_band(n, q, p, axis)).collect(),
        col_bands: (0..d).map(|n| col_band(n, q, p, axis)).collect(),
    })
}

impl RecurrenceTruncation {
    pub fn size(&self) -> usize {
        self.data.rows()
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[(r, c)]
    }
}

fn compare(a: &QMatrix, b: &QMatrix) -> CheckReport {
    let mut report = CheckReport::new();
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            let (x, y) = (&a[(r, c)], &b[(r, c)]);
            report.expect(x == y, || format!("({r},{c})"), || format!("{x} != {y}"));
        }
    }
    report
}

/// Primal and dual forms agree on the leading window.
pub fn check_dual_form(t: &RecurrenceTruncation, f: &Factorization) -> Result<CheckReport> {
    ensure_depth(f, t.size(), t.q, t.p)?;
    Ok(compare(&t.data, &dual_form(f, t.p, t.axis, t.size())))
}

/// Row and column structure of `T_k`, including the `H` ratios at the ends.
pub fn validate_band(t: &RecurrenceTruncation) -> CheckReport {
    let d = t.size();
    let (q, p, axis) = (t.q, t.p, t.axis);
    let mut report = CheckReport::new();
    for n in 0..d {
        let Band { first, last } = t.row_bands[n];
        for c in 0..first.min(d) {
            let v = t.get(n, c);
            report.expect(v.is_zero(), || format!("row {n}, col {c}"), || format!("left of band: {v}"));
        }
        if last < d {
            let v = t.get(n, last);
            report.expect(v == &Rational::from_integer(1.into()), || format!("row {n}, col {last}"), || format!("trailing entry {v}"));
            for c in last + 1..d {
                let v = t.get(n, c);
                report.expect(v.is_zero(), || format!("row {n}, col {c}"), || format!("right of band: {v}"));
            }
        }
        if in_complement_j(n, p, axis) && first < d {
            let want = &t.h[n] / &t.h[first];
            let v = t.get(n, first);
            report.expect(
                *v == want && !v.is_zero(),
                || format!("row {n}, col {first}"),
                || format!("leading entry {v}, want H_{n}/H_{first} = {want}"),
            );
        }
    }
    for n in 0..d {
        let Band { first, last } = t.col_bands[n];
        for r in 0..first.min(d) {
            let v = t.get(r, n);
            report.expect(v.is_zero(), || format!("col {n}, row {r}"), || format!("above band: {v}"));
        }
        if in_complement_j(n, q, axis) && first < d {
            let v = t.get(first, n);
            report.expect(v == &Rational::from_integer(1.into()), || format!("col {n}, row {first}"), || format!("leading entry {v}"));
        }
        if last < d {
            let want = &t.h[last] / &t.h[n];
            let v = t.get(last, n);
            report.expect(
                *v == want,
                || format!("col {n}, row {last}"),
                || format!("trailing entry {v}, want H_{last}/H_{n} = {want}"),
            );
            for r in last + 1..d {
                let v = t.get(r, n);
                report.expect(v.is_zero(), || format!("col {n}, row {r}"), || format!("below band: {v}"));
            }
        }
    }
    report
}

/// Rows `n` whose band lies inside the truncation.
pub fn complete_rows(t: &RecurrenceTruncation) -> impl Iterator<Item = usize> + '_ {
    (0..t.size()).filter(|&n| t.row_bands[n].last < t.size())
}

/// Columns `n` whose band lies inside the truncation.
pub fn complete_cols(t: &RecurrenceTruncation) -> impl Iterator<Item = usize> + '_ {
    (0..t.size()).filter(|&n| t.col_bands[n].last < t.size())
}

/// `x_k Bh_n(x) = Bh_{n^+} + sum_i T_{n,i} Bh_i` and
/// `x_k Ah_n(x) = T_{n^+,n} Ah_{n^+} + sum_i T_{i,n} Ah_i` at every point,
/// where `Bh = H B` and `Ah = A H^{-1}`. `max_n` limits the indices tested.
pub fn check_recurrences(
    t: &RecurrenceTruncation,
    a: &FamilyA,
    b: &FamilyB,
    points: &[(Rational, Rational)],
    max_n: usize,
) -> Result<CheckReport> {
    let need = t.size();
    if a.len() < need || b.len() < need || t.h.len() < need {
        return Err(Error::InsufficientDepth {
            what: "recurrence check",
            required: need,
            available: a.len().min(b.len()).min(t.h.len()),
        });
    }
    let h_inv: Vec<Rational> = t.h.iter().map(Rational::recip).collect();
    let bh = b.truncated(need).scaled(&t.h);
    let ah = a.truncated(need).scaled(&h_inv);
    let mut report = CheckReport::new();
    for (x1, x2) in points {
        let xk = t.axis.coord(x1, x2);
        let bv: Vec<Vec<Rational>> = (0..need).map(|n| bh.eval(n, x1, x2)).collect();
        let av: Vec<Vec<Rational>> = (0..need).map(|n| ah.eval(n, x1, x2)).collect();
        for n in complete_rows(t).filter(|&n| n <= max_n) {
            let Band { first, last } = t.row_bands[n];
            for c in 0..b.width {
                let mut rhs = bv[last][c].clone();
                for i in first..last {
                    rhs += t.get(n, i) * &bv[i][c];
                }
                let lhs = xk * &bv[n][c];
                report.expect(
                    lhs == rhs,
                    || format!("B, k={}, n={n}, b={}, x=({x1},{x2})", t.axis.k(), c + 1),
                    || format!("residual {}", &lhs - &rhs),
                );
            }
        }
        for n in complete_cols(t).filter(|&n| n <= max_n) {
            let Band { first, last } = t.col_bands[n];
            for c in 0..a.width {
                let mut rhs = Rational::zero();
                for i in first..=last {
                    rhs += t.get(i, n) * &av[i][c];
                }
                let lhs = xk * &av[n][c];
                report.expect(
                    lhs == rhs,
                    || format!("A, k={}, n={n}, a={}, x=({x1},{x2})", t.axis.k(), c + 1),
                    || format!("residual {}", &lhs - &rhs),
                );
            }
        }
    }
    Ok(report)
}

/// Coefficient-space form of the same relations: `(T Bh)_n = x_k Bh_n` and
/// `(Ah T)_n = x_k Ah_n` as polynomials, over the complete rows/columns.
pub fn check_recurrences_coefficients(
    t: &RecurrenceTruncation,
    a: &FamilyA,
    b: &FamilyB,
) -> Result<CheckReport> {
    let need = t.size();
    if a.len() < need || b.len() < need {
        return Err(Error::InsufficientDepth {
            what: "recurrence check",
            required: need,
            available: a.len().min(b.len()),
        });
    }
    let h_inv: Vec<Rational> = t.h.iter().map(Rational::recip).collect();
    let bh = b.truncated(need).scaled(&t.h);
    let ah = a.truncated(need).scaled(&h_inv);
    let mut report = CheckReport::new();
    for n in complete_rows(t) {
        for c in 0..b.width {
            let mut rhs = BiPoly::zero();
            for i in 0..need {
                rhs.add_scaled(bh.get(i, c), t.get(n, i));
            }
            let lhs = bh.get(n, c).mul_by_variable(t.axis);
            report.expect(lhs == rhs, || format!("B, k={}, n={n}, b={}", t.axis.k(), c + 1), || "polynomials differ".into());
        }
    }
    for n in complete_cols(t) {
        for c in 0..a.width {
            let mut rhs = BiPoly::zero();
            for i in 0..need {
                rhs.add_scaled(ah.get(i, c), t.get(i, n));
            }
            let lhs = ah.get(n, c).mul_by_variable(t.axis);
            report.expect(lhs == rhs, || format!("A, k={}, n={n}, a={}", t.axis.k(), c + 1), || "polynomials differ".into());
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::extract_families;
    use crate::gauss_borel::factorize;
    use crate::measure::{MeasureMatrix, MeasureSpec};
    use crate::moments::assemble_moments;
    use crate::rational::{int, rat};

    fn system(q: usize, p: usize, d: usize) -> Factorization {
        let specs = (0..q * p)
            .map(|i| {
                let lo = rat(-1 - i as i64, 2);
                let hi = rat(3 + 2 * i as i64, 3);
                let dens = BiPoly::from_terms([(0, int(2)), (1, rat(1, 1 + i as i64)), (2, rat(-1, 4))]);
                MeasureSpec::rect((lo.clone(), hi.clone()), (lo - int(1), hi), dens).unwrap()
            })
            .collect();
        let mm = MeasureMatrix::new(q, p, specs).unwrap();
        let m = assemble_moments(&mm, required_depth(d, q, p)).unwrap();
        factorize(&m.data).unwrap()
    }

    #[test]
    fn depth_examples() {
        assert_eq!(required_depth(4, 1, 2), 10);
        assert_eq!(required_depth(1, 1, 1), 3);
        assert_eq!(required_depth(2, 2, 2), 6);
    }

    #[test]
    fn insufficient_depth() {
        let f = system(1, 1, 2);
        assert!(matches!(
            build_recurrence(&f, 1, 1, Axis::X1, 4),
            Err(Error::InsufficientDepth { .. })
        ));
    }

    #[test]
    fn worked_example_shape() {
        let f = system(1, 2, 8);
        let t = build_recurrence(&f, 1, 2, Axis::X1, 8).unwrap();
        for (r, c) in [(0, 1), (1, 3), (2, 4), (3, 6)] {
            assert_eq!(t.get(r, c), &int(1));
        }
        assert_eq!(t.get(2, 0), &(&f.h[2] / &f.h[0]));
        assert!(t.get(4, 0).is_zero() && t.get(4, 1).is_zero());
        assert_eq!(t.row_bands[3], Band { first: 1, last: 6 });
        assert_eq!(t.col_bands[3], Band { first: 1, last: 7 });
        let t2 = build_recurrence(&f, 1, 2, Axis::X2, 8).unwrap();
        assert_eq!(t2.row_bands[1].last, 4);
    }

    #[test]
    fn identities_hold() {
        for (q, p) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let d = 7;
            let f = system(q, p, d);
            let (a, b) = extract_families(&f, q, p);
            for axis in Axis::BOTH {
                let t = build_recurrence(&f, q, p, axis, d).unwrap();
                assert!(check_dual_form(&t, &f).unwrap().passed(), "dual {q} {p}");
                assert!(validate_band(&t).passed(), "band {q} {p} {:?}", validate_band(&t).violations);
                let pts = [(rat(1, 2), rat(-2, 3)), (int(0), int(0))];
                assert!(check_recurrences(&t, &a, &b, &pts, usize::MAX).unwrap().passed());
                assert!(check_recurrences_coefficients(&t, &a, &b).unwrap().passed());
            }
        }
    }

    #[test]
    fn planted_errors() {
        let f = system(1, 2, 6);
        let mut t = build_recurrence(&f, 1, 2, Axis::X1, 6).unwrap();
        t.data[(4, 0)] = int(1);
        assert!(!validate_band(&t).passed());
        assert!(!check_dual_form(&t, &f).unwrap().passed());
    }
}
