//! Test-side oracles. Nothing here calls the library's index maps,
//! factorization or inverse; they are rebuilt from first principles.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use proptest::test_runner::TestCaseError;

use bimop::measure::{Atom, MeasureMatrix, MeasureSpec};
use bimop::rational::{int, rat};
use bimop::{BiPoly, Error, Rational};

/// Random mixed systems can have a vanishing minor by coincidence. Such
/// draws are rejected; any other error is a bug.
pub fn regular<T>(result: bimop::Result<T>) -> Result<T, TestCaseError> {
    match result {
        Err(Error::Breakdown { index }) => Err(TestCaseError::reject(format!("singular draw at {index}"))),
        other => Ok(other.expect("only breakdowns are expected")),
    }
}

/// Exponent pairs `(a, b)` of `x^a y^b` in graded-lex order, by walking
/// total degrees.
pub fn monomials(count: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(count);
    let mut deg = 0;
    while out.len() < count {
        for b in 0..=deg {
            out.push((deg - b, b));
        }
        deg += 1;
    }
    out.truncate(count);
    out
}

/// Position of `x^a y^b` by linear search in the enumeration.
pub fn position(list: &[(usize, usize)], e: (usize, usize)) -> Option<usize> {
    list.iter().position(|&m| m == e)
}

/// Where row `n` of the block shift operator puts its 1: monomial `n / r`
/// multiplied by `x_k`, same component.
pub fn n_plus_oracle(list: &[(usize, usize)], n: usize, r: usize, k: usize) -> usize {
    let (a, b) = list[n / r];
    let shifted = if k == 1 { (a + 1, b) } else { (a, b + 1) };
    position(list, shifted).expect("enumeration long enough") * r + n % r
}

/// `image -> preimage` of the shift map for rows `0 .. rows`.
pub fn image_oracle(list: &[(usize, usize)], rows: usize, r: usize, k: usize) -> BTreeMap<usize, usize> {
    (0..rows).map(|m| (n_plus_oracle(list, m, r, k), m)).collect()
}

/// Preimage of the first image point at or after `n`.
pub fn n_minus_big_oracle(image: &BTreeMap<usize, usize>, n: usize) -> usize {
    *image.range(n..).next().expect("image covers n").1
}

/// `Lambda_{[r];k}` truncated to `size x size`, assembled from `r x r`
/// identity blocks placed at (monomial, shifted monomial).
pub fn shift_matrix_oracle(size: usize, r: usize, k: usize) -> Vec<Vec<Rational>> {
    let list = monomials(2 * size + 8);
    let mut m = vec![vec![Rational::zero(); size]; size];
    for (bi, &(a, b)) in list.iter().enumerate().take(size.div_ceil(r)) {
        let e = if k == 1 { (a + 1, b) } else { (a, b + 1) };
        let bj = position(&list, e).unwrap();
        for c in 0..r {
            let (row, col) = (bi * r + c, bj * r + c);
            if row < size && col < size {
                m[row][col] = Rational::one();
            }
        }
    }
    m
}

fn power(x: &Rational, e: usize) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * x)
}

/// `∫ x^s y^t dμ` from the measure description.
pub fn moment_oracle(spec: &MeasureSpec, s: usize, t: usize) -> Rational {
    match spec {
        MeasureSpec::Discrete { atoms } => atoms
            .iter()
            .map(|Atom { x, y, w }| w * power(x, s) * power(y, t))
            .fold(Rational::zero(), |a, b| a + b),
        MeasureSpec::RectDensity { x1_lo, x1_hi, x2_lo, x2_hi, density } => {
            let list = monomials(density.terms().map(|(k, _)| k + 1).max().unwrap_or(1));
            let line = |lo: &Rational, hi: &Rational, e: usize| {
                (power(hi, e + 1) - power(lo, e + 1)) / int(e as i64 + 1)
            };
            density
                .terms()
                .map(|(k, c)| {
                    let (a, b) = list[k];
                    c * line(x1_lo, x1_hi, s + a) * line(x2_lo, x2_hi, t + b)
                })
                .fold(Rational::zero(), |a, b| a + b)
        }
        MeasureSpec::MomentTable { moments, .. } => moments[&(s, t)].clone(),
    }
}

/// `M[m][n] = ∫ mono(m / q) dμ_{m mod q, n mod p} mono(n / p)`.
/// Each distinct moment is computed once.
pub fn moment_matrix_oracle(mm: &MeasureMatrix, depth: usize) -> Vec<Vec<Rational>> {
    let (q, p) = (mm.q(), mm.p());
    let list = monomials(depth);
    let mut memo: BTreeMap<(usize, usize, usize, usize), Rational> = BTreeMap::new();
    (0..depth)
        .map(|m| {
            (0..depth)
                .map(|n| {
                    let (a1, b1) = list[m / q];
                    let (a2, b2) = list[n / p];
                    let key = (m % q, n % p, a1 + a2, b1 + b2);
                    memo.entry(key)
                        .or_insert_with(|| moment_oracle(mm.get(key.0, key.1), key.2, key.3))
                        .clone()
                })
                .collect()
        })
        .collect()
}

/// Schoolbook product.
pub fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner)
                        .filter(|&k| !row[k].is_zero() && !b[k][j].is_zero())
                        .map(|k| &row[k] * &b[k][j])
                        .fold(Rational::zero(), |x, y| x + y)
                })
                .collect()
        })
        .collect()
}

pub fn leading(m: &[Vec<Rational>], d: usize) -> Vec<Vec<Rational>> {
    m[..d].iter().map(|row| row[..d].to_vec()).collect()
}

pub fn transpose(m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn is_identity(m: &[Vec<Rational>]) -> bool {
    m.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, v)| if i == j { v.is_one() } else { v.is_zero() })
    })
}

/// Solves `a x = b` by Gaussian elimination with row exchanges.
pub fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &a[col][col];
            for c in col..n {
                let d = &f * &a[col][c];
                a[r][c] -= d;
            }
            let d = &f * &b[col];
            b[r] -= d;
        }
    }
    let mut x = vec![Rational::zero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc -= &a[r][c] * &x[c];
        }
        x[r] = acc / &a[r][r];
    }
    Some(x)
}

/// Inverse by solving against each unit vector.
pub fn inverse_oracle(a: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<Rational> = (0..n).map(|i| if i == j { int(1) } else { int(0) }).collect();
        cols.push(solve(a.to_vec(), e)?);
    }
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}

/// Coefficient rows from the defining linear conditions:
/// row `n` of `S` is `e_n + x` with `x M_{<n,<n} = -M_{n,<n}`, row `n` of
/// `Sbar` solves the transposed system, and `H_n = (S M)_{n,n}`.
pub struct DenseFamilies {
    pub s: Vec<Vec<Rational>>,
    pub sbar: Vec<Vec<Rational>>,
    pub h: Vec<Rational>,
}

pub fn dense_families(m: &[Vec<Rational>], depth: usize) -> Option<DenseFamilies> {
    let mut s = Vec::new();
    let mut sbar = Vec::new();
    let mut h = Vec::new();
    for n in 0..depth {
        let lead_t: Vec<Vec<Rational>> = (0..n).map(|i| (0..n).map(|j| m[j][i].clone()).collect()).collect();
        let lead: Vec<Vec<Rational>> = (0..n).map(|i| m[i][..n].to_vec()).collect();
        let rhs_s: Vec<Rational> = (0..n).map(|j| -m[n][j].clone()).collect();
        let rhs_sb: Vec<Rational> = (0..n).map(|i| -m[i][n].clone()).collect();
        let mut row_s = solve(lead_t, rhs_s)?;
        let mut row_sb = solve(lead, rhs_sb)?;
        row_s.push(int(1));
        row_sb.push(int(1));
        row_s.resize(depth, int(0));
        row_sb.resize(depth, int(0));
        let hn = (0..=n).map(|j| &row_s[j] * &m[j][n]).fold(Rational::zero(), |a, b| a + b);
        if hn.is_zero() {
            return None;
        }
        s.push(row_s);
        sbar.push(row_sb);
        h.push(hn);
    }
    Some(DenseFamilies { s, sbar, h })
}

/// Vector polynomial with `width` components.
pub type VecPoly = Vec<BiPoly>;

fn unit(width: usize, n: usize) -> VecPoly {
    let mut v = vec![BiPoly::zero(); width];
    v[n % width] = BiPoly::monomial(n / width);
    v
}

/// `sum_{b,a} ∫ f_b dμ_{b,a} g_a` through [`moment_oracle`].
pub fn pairing(mm: &MeasureMatrix, f: &VecPoly, g: &VecPoly) -> Rational {
    let list = monomials(
        f.iter().chain(g.iter()).filter_map(|p| p.grlex_pos()).max().unwrap_or(0) + 1,
    );
    let mut total = Rational::zero();
    for (b, fb) in f.iter().enumerate() {
        for (a, ga) in g.iter().enumerate() {
            for (i, ci) in fb.terms() {
                for (j, cj) in ga.terms() {
                    let (s1, t1) = list[i];
                    let (s2, t2) = list[j];
                    total += ci * cj * moment_oracle(mm.get(b, a), s1 + s2, t1 + t2);
                }
            }
        }
    }
    total
}

fn axpy(y: &mut VecPoly, c: &Rational, x: &VecPoly) {
    for (yi, xi) in y.iter_mut().zip(x) {
        yi.add_scaled(xi, c);
    }
}

/// Biorthogonal Gram-Schmidt over graded-lex monomial vectors:
/// `A_n = X_n - sum <B_m, X_n> A_m`, `B_n = (X_n - sum <X_n, A_m> B_m) / h_n`.
pub fn gram_schmidt(mm: &MeasureMatrix, depth: usize) -> Option<(Vec<VecPoly>, Vec<VecPoly>)> {
    let (q, p) = (mm.q(), mm.p());
    let mut a_fam: Vec<VecPoly> = Vec::new();
    let mut b_fam: Vec<VecPoly> = Vec::new();
    for n in 0..depth {
        let xa = unit(p, n);
        let xb = unit(q, n);
        let mut an = xa.clone();
        let mut bn = xb.clone();
        for m in 0..n {
            axpy(&mut an, &-pairing(mm, &b_fam[m], &xa), &a_fam[m]);
            axpy(&mut bn, &-pairing(mm, &xb, &a_fam[m]), &b_fam[m]);
        }
        let h = pairing(mm, &bn, &an);
        if h.is_zero() {
            return None;
        }
        let inv = h.recip();
        bn = bn.iter().map(|c| c.scale(&inv)).collect();
        a_fam.push(an);
        b_fam.push(bn);
    }
    Some((a_fam, b_fam))
}

/// A fixed generic `q x p` system of rectangle densities, distinct boxes
/// and densities per entry.
pub fn generic_system(q: usize, p: usize) -> MeasureMatrix {
    let specs = (0..q * p)
        .map(|i| {
            let i = i as i64;
            let dens = BiPoly::from_terms([(0, int(1 + i)), (1, rat(1, 3 + i)), (2, rat(-1, 4)), (4, rat(1, 5 + i))]);
            MeasureSpec::rect((rat(-1, 2 + i), int(1 + i)), (rat(-2, 3 + i), rat(3 + i, 2)), dens).unwrap()
        })
        .collect();
    MeasureMatrix::new(q, p, specs).unwrap()
}

pub fn to_rows(m: &bimop::QMatrix) -> Vec<Vec<Rational>> {
    m.to_rows()
}
