//! The biorthogonal families `B = H^{-1} S X_{[q]}` and `A = X_{[p]}^T Sbar^T`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::check::CheckReport;
use crate::gauss_borel::Factorization;
use crate::index::{ceil_div, pair_of, GradedIndex};
use crate::matrix::QMatrix;
use crate::measure::MomentCache;
use crate::poly::BiPoly;
use crate::rational::Rational;

/// `polys[n][c]` is component `c` (zero-based) of the `n`-th member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Family {
    pub width: usize,
    pub polys: Vec<Vec<BiPoly>>,
}

/// Rows of `B`: `q` components per index.
pub type FamilyB = Family;
/// Columns of `A`: `p` components per index.
pub type FamilyA = Family;

impl Family {
    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn get(&self, n: usize, c: usize) -> &BiPoly {
        &self.polys[n][c]
    }

    pub fn eval(&self, n: usize, x1: &Rational, x2: &Rational) -> Vec<Rational> {
        self.polys[n].iter().map(|f| f.eval(x1, x2)).collect()
    }

    /// Member `n` multiplied by `factors[n]`.
    pub fn scaled(&self, factors: &[Rational]) -> Family {
        Family {
            width: self.width,
            polys: self
                .polys
                .iter()
                .zip(factors)
                .map(|(row, f)| row.iter().map(|p| p.scale(f)).collect())
                .collect(),
        }
    }

    pub fn truncated(&self, len: usize) -> Family {
        Family {
            width: self.width,
            polys: self.polys[..len.min(self.len())].to_vec(),
        }
    }
}

/// Reads the families off the factorization: coefficient of `X_K` in
/// `B_n^{(b)}` is `(H^{-1} S)_{n, Kq+b}`, in `A_n^{(a)}` it is `Sbar_{n, Kp+a}`.
pub fn extract_families(f: &Factorization, q: usize, p: usize) -> (FamilyA, FamilyB) {
    let d = f.depth();
    let hs = f.h_inv_s();
    let read = |m: &QMatrix, r: usize| -> Family {
        let polys = (0..d)
            .map(|n| {
                let mut comps = vec![BiPoly::zero(); r];
                for col in 0..=n {
                    let c = &m[(n, col)];
                    if !c.is_zero() {
                        comps[col % r].add_term(col / r, c.clone());
                    }
                }
                comps
            })
            .collect();
        Family { width: r, polys }
    };
    (read(&f.sbar, p), read(&hs, q))
}

/// `ceil((n + 1 - c) / r) - 1` for zero-based component `c`: the grlex
/// position bound of component `c` of member `n`. Negative means zero.
pub fn degree_bound(n: usize, c: usize, r: usize) -> i64 {
    ceil_div(n as i64 + 1 - c as i64, r as i64) - 1
}

/// Largest `K` with an orthogonality condition on component `c` of member
/// `n`: `ceil((n - c) / r) - 1`.
pub fn orthogonality_bound(n: usize, c: usize, r: usize) -> i64 {
    ceil_div(n as i64 - c as i64, r as i64) - 1
}

fn describe(pos: Option<usize>) -> String {
    match pos {
        Some(k) => {
            let GradedIndex { i, j } = pair_of(k);
            format!("{k} ~ ({i},{j})")
        }
        None => "zero".into(),
    }
}

fn degree_structure_one(fam: &Family, name: &str, report: &mut CheckReport, monic: bool) {
    let r = fam.width;
    for n in 0..fam.len() {
        for c in 0..r {
            let poly = fam.get(n, c);
            let bound = degree_bound(n, c, r);
            let found = poly.grlex_pos();
            let within = match found {
                None => true,
                Some(k) => (k as i64) <= bound,
            };
            report.expect(
                within,
                || format!("{name}_{n}^({})", c + 1),
                || format!("grlex-pos {} exceeds bound {bound}", describe(found)),
            );
            if n % r == c {
                let exact = found == Some(bound as usize);
                report.expect(
                    exact,
                    || format!("{name}_{n}^({})", c + 1),
                    || format!("grlex-pos {} should equal {bound}", describe(found)),
                );
                let lead = poly.leading_coeff().cloned().unwrap_or_else(Rational::zero);
                let ok = if monic { lead.is_one() } else { !lead.is_zero() };
                report.expect(
                    ok,
                    || format!("{name}_{n}^({})", c + 1),
                    || format!("leading coefficient {lead}"),
                );
            }
        }
    }
}

/// Degree bounds, equality on the diagonal components, monic diagonal of
/// `A` and nonvanishing leading coefficients of `B`.
pub fn validate_degree_structure(a: &FamilyA, b: &FamilyB) -> CheckReport {
    let mut report = CheckReport::new();
    degree_structure_one(b, "B", &mut report, false);
    degree_structure_one(a, "A", &mut report, true);
    report
}

/// `sum_a ∫ X_K dμ_{b,a} A_n^{(a)} = 0` and `sum_b ∫ B_n^{(b)} dμ_{b,a} X_K = 0`
/// for every `K` up to the orthogonality bound. Conditions needing moments
/// outside the cache are counted as unchecked.
pub fn check_orthogonality(a: &FamilyA, b: &FamilyB, cache: &MomentCache) -> CheckReport {
    let (q, p) = (cache.q(), cache.p());
    let mut report = CheckReport::new();
    for n in 0..a.len() {
        for bi in 0..q {
            for k in 0..=orthogonality_bound(n, bi, q).max(-1) {
                let k = k as usize;
                let mono = BiPoly::monomial(k);
                let total = (0..p)
                    .map(|ai| cache.pair(bi, ai, &mono, a.get(n, ai)))
                    .sum::<Option<Rational>>();
                match total {
                    None => report.skip(),
                    Some(v) => report.expect(
                        v.is_zero(),
                        || format!("A_{n}, b={}, K={k}", bi + 1),
                        || format!("residual {v}"),
                    ),
                }
            }
        }
    }
    for n in 0..b.len() {
        for ai in 0..p {
            for k in 0..=orthogonality_bound(n, ai, p).max(-1) {
                let k = k as usize;
                let mono = BiPoly::monomial(k);
                let total = (0..q)
                    .map(|bi| cache.pair(bi, ai, b.get(n, bi), &mono))
                    .sum::<Option<Rational>>();
                match total {
                    None => report.skip(),
                    Some(v) => report.expect(
                        v.is_zero(),
                        || format!("B_{n}, a={}, K={k}", ai + 1),
                        || format!("residual {v}"),
                    ),
                }
            }
        }
    }
    report
}

/// `sum_{a,b} ∫ B_m^{(b)} dμ_{b,a} A_n^{(a)} = δ_{mn}` for `m, n < window`.
pub fn check_biorthogonality(
    a: &FamilyA,
    b: &FamilyB,
    cache: &MomentCache,
    window: usize,
) -> CheckReport {
    let (q, p) = (cache.q(), cache.p());
    let window = window.min(a.len()).min(b.len());
    let mut report = CheckReport::new();
    for m in 0..window {
        for n in 0..window {
            let total = (0..q)
                .flat_map(|bi| (0..p).map(move |ai| (bi, ai)))
                .map(|(bi, ai)| cache.pair(bi, ai, b.get(m, bi), a.get(n, ai)))
                .sum::<Option<Rational>>();
            match total {
                None => report.skip(),
                Some(v) => {
                    let want = if m == n { Rational::one() } else { Rational::zero() };
                    report.expect(v == want, || format!("({m},{n})"), || format!("value {v}"));
                }
            }
        }
    }
    report
}

/// Matrix form: `(H^{-1} S) M Sbar^T = I` on the leading `window x window`.
pub fn check_biorthogonality_matrix(f: &Factorization, m: &QMatrix, window: usize) -> CheckReport {
    let w = window.min(f.depth()).min(m.rows());
    let hs = f.h_inv_s().leading(w);
    let prod = hs
        .mul(&m.leading(w))
        .and_then(|x| x.mul(&f.sbar.leading(w).transpose()))
        .expect("square windows");
    let mut report = CheckReport::new();
    for r in 0..w {
        for c in 0..w {
            let v = &prod[(r, c)];
            let ok = if r == c { v.is_one() } else { v.is_zero() };
            report.expect(ok, || format!("({r},{c})"), || format!("value {v}"));
        }
    }
    report
}
