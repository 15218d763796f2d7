//! Bivariate polynomials over the graded-lex monomial basis.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::index::{exponents_of, pair_of, pos_of, position_of_exponents, Axis, GradedIndex};
use crate::matrix::QMatrix;
use crate::rational::{format_rational, parse_rational, pow, Rational};

/// Multiplies the monomial at position `pos` by `x_k`.
pub fn shift_monomial(pos: usize, axis: Axis) -> usize {
    let GradedIndex { i, j } = pair_of(pos);
    match axis {
        Axis::X1 => pos_of(i + 1, j),
        Axis::X2 => pos_of(i + 1, j + 1),
    }
    .expect("shifted pair is valid")
}

/// Sparse map from graded-lex position to a nonzero rational coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BiPoly {
    coeffs: BTreeMap<usize, Rational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn one() -> Self {
        BiPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        BiPoly::monomial_with(0, c)
    }

    pub fn monomial(pos: usize) -> Self {
        BiPoly::monomial_with(pos, Rational::one())
    }

    pub fn monomial_with(pos: usize, c: Rational) -> Self {
        let mut p = BiPoly::zero();
        p.add_term(pos, c);
        p
    }

    /// Builds from `(position, coefficient)` pairs; repeated positions add up.
    pub fn from_terms<I: IntoIterator<Item = (usize, Rational)>>(terms: I) -> Self {
        let mut p = BiPoly::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    pub fn add_term(&mut self, pos: usize, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(pos) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coeff(&self, pos: usize) -> Rational {
        self.coeffs.get(&pos).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest stored position; `None` for the zero polynomial.
    pub fn grlex_pos(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn grlex_deg(&self) -> Option<GradedIndex> {
        self.grlex_pos().map(pair_of)
    }

    pub fn total_deg(&self) -> Option<usize> {
        self.coeffs.keys().map(|&k| pair_of(k).i).max()
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.values().next_back()
    }

    pub fn eval(&self, x1: &Rational, x2: &Rational) -> Rational {
        let Some(deg) = self.total_deg() else {
            return Rational::zero();
        };
        let p1: Vec<Rational> = (0..=deg).map(|e| pow(x1, e)).collect();
        let p2: Vec<Rational> = (0..=deg).map(|e| pow(x2, e)).collect();
        let mut acc = Rational::zero();
        for (&k, c) in &self.coeffs {
            let (e1, e2) = exponents_of(k);
            acc += c * &p1[e1] * &p2[e2];
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly {
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn mul_by_variable(&self, axis: Axis) -> BiPoly {
        BiPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, v)| (shift_monomial(*k, axis), v.clone()))
                .collect(),
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &BiPoly, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.coeffs {
            self.add_term(*k, v * c);
        }
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (k, v) in &rhs.coeffs {
            out.add_term(*k, v.clone());
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (k, v) in &rhs.coeffs {
            out.add_term(*k, -v.clone());
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly {
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, -v.clone())).collect(),
        }
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&ka, va) in &self.coeffs {
            let (a1, a2) = exponents_of(ka);
            for (&kb, vb) in &rhs.coeffs {
                let (b1, b2) = exponents_of(kb);
                out.add_term(position_of_exponents(a1 + b1, a2 + b2), va * vb);
            }
        }
        out
    }
}

impl Serialize for BiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.coeffs.len()))?;
        for (k, v) in &self.coeffs {
            map.serialize_entry(&k.to_string(), &format_rational(v))?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for BiPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct PolyVisitor;
        impl<'de> Visitor<'de> for PolyVisitor {
            type Value = BiPoly;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str(r#"a map {"K": "num/den"} keyed by graded-lex position"#)
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<BiPoly, A::Error> {
                let mut p = BiPoly::zero();
                while let Some((k, v)) = map.next_entry::<String, String>()? {
                    let pos: usize = k
                        .trim()
                        .parse()
                        .map_err(|_| de::Error::custom(format!("bad monomial position {k:?}")))?;
                    let c = parse_rational(&v).map_err(de::Error::custom)?;
                    p.add_term(pos, c);
                }
                Ok(p)
            }
        }
        d.deserialize_map(PolyVisitor)
    }
}

/// Dense `rows x cols` grid of polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BiPoly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            entries: vec![BiPoly::zero(); rows * cols],
        }
    }

    /// `x^(i-j) y^j I` for the monomial at `pos`.
    pub fn monomial_identity(size: usize, pos: usize) -> Self {
        let mut m = PolyMatrix::zeros(size, size);
        for d in 0..size {
            *m.get_mut(d, d) = BiPoly::monomial(pos);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BiPoly {
        &self.entries[r * self.cols + c]
    }

    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut BiPoly {
        &mut self.entries[r * self.cols + c]
    }

    pub fn eval(&self, x1: &Rational, x2: &Rational) -> QMatrix {
        QMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c).eval(x1, x2))
    }

    /// Largest graded-lex position over all entries.
    pub fn grlex_pos(&self) -> Option<usize> {
        self.entries.iter().filter_map(BiPoly::grlex_pos).max()
    }

    /// Square, leading coefficient the identity at its top position, and
    /// nothing else at that position.
    pub fn is_monic(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let Some(top) = self.grlex_pos() else {
            return false;
        };
        (0..self.rows).all(|r| {
            (0..self.cols).all(|c| {
                let want = if r == c { Rational::one() } else { Rational::zero() };
                self.get(r, c).coeff(top) == want
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn eval_examples() {
        let xy = BiPoly::monomial(4);
        assert_eq!(xy.eval(&rat(1, 2), &rat(1, 3)), rat(1, 6));
        assert_eq!(BiPoly::zero().eval(&int(3), &int(9)), int(0));
        let p = &BiPoly::one() + &BiPoly::monomial(1);
        assert_eq!(p.eval(&int(2), &int(5)), int(3));
    }

    #[test]
    fn shift_examples() {
        assert_eq!(shift_monomial(0, Axis::X1), 1);
        assert_eq!(shift_monomial(1, Axis::X2), 4);
        // x * (xy) = x^2 y sits at pos_of(3,1)
        assert_eq!(shift_monomial(4, Axis::X1), pos_of(3, 1).unwrap());
        assert_eq!(shift_monomial(4, Axis::X1), 7);
    }

    #[test]
    fn ring_ops_normalize() {
        let x = BiPoly::monomial(1);
        assert_eq!(BiPoly::one().mul_by_variable(Axis::X1), x);
        let zero = &x - &x;
        assert!(zero.is_zero());
        assert_eq!(zero.len(), 0);
        assert_eq!(x.mul_by_variable(Axis::X2), BiPoly::monomial(4));
        assert!(x.scale(&int(0)).is_zero());
    }

    #[test]
    fn degrees() {
        let p = BiPoly::from_terms([(2, int(1)), (3, rat(1, 2))]);
        assert_eq!(p.grlex_pos(), Some(3));
        assert_eq!(p.grlex_deg(), Some(GradedIndex { i: 2, j: 0 }));
        assert_eq!(p.total_deg(), Some(2));
        assert_eq!(BiPoly::zero().grlex_pos(), None);
    }

    #[test]
    fn product_matches_exponents() {
        // (x + y)(x - y) = x^2 - y^2
        let a = BiPoly::from_terms([(1, int(1)), (2, int(1))]);
        let b = BiPoly::from_terms([(1, int(1)), (2, int(-1))]);
        assert_eq!(&a * &b, BiPoly::from_terms([(3, int(1)), (5, int(-1))]));
    }

    #[test]
    fn json_shape() {
        let p = BiPoly::from_terms([(0, int(1)), (4, rat(-2, 3))]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"0":"1","4":"-2/3"}"#);
        let back: BiPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<BiPoly>(r#"{"x":"1"}"#).is_err());
    }

    #[test]
    fn monic_detection() {
        let mut m = PolyMatrix::monomial_identity(2, 3);
        assert!(m.is_monic());
        m.get_mut(0, 1).add_term(1, int(5));
        assert!(m.is_monic());
        m.get_mut(1, 0).add_term(3, int(1));
        assert!(!m.is_monic());
    }
}
