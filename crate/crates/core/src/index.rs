//! Integer index machinery for the step-line.
//!
//! Monomials `x^(i-j) y^j` are enumerated in graded-lexicographic order
//! `(0,0), (1,0), (1,1), (2,0), ...`; the scalar position of `(i,j)` is
//! `i(i+1)/2 + j`. A monomial vector with `r x r` identity blocks puts
//! monomial `K` on rows `K*r .. K*r + r - 1`, and multiplication by `x_k`
//! moves row `n` to row [`n_plus`]`(n, r, k)`. The rows hit by that map are
//! exactly the rows whose monomial carries a positive power of `x_k`; the
//! remaining rows form the exceptional set `J_{r;k}`.

use num_integer::{Integer, Roots};
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Multiplication direction: `x_1` or `x_2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    X1,
    X2,
}

impl Axis {
    pub const BOTH: [Axis; 2] = [Axis::X1, Axis::X2];

    /// 1 for `x_1`, 2 for `x_2`.
    pub fn k(self) -> usize {
        match self {
            Axis::X1 => 1,
            Axis::X2 => 2,
        }
    }

    pub fn from_k(k: usize) -> Option<Axis> {
        match k {
            1 => Some(Axis::X1),
            2 => Some(Axis::X2),
            _ => None,
        }
    }

    /// Picks the matching coordinate of a point.
    pub fn coord<'a, T>(self, x1: &'a T, x2: &'a T) -> &'a T {
        match self {
            Axis::X1 => x1,
            Axis::X2 => x2,
        }
    }
}

/// Largest `i` with `i(i+1)/2 <= n`, by exact integer square root.
pub fn floor_f_int(n: usize) -> usize {
    let n = n as u128;
    let i = ((8 * n + 1).sqrt() - 1) / 2;
    i as usize
}

/// `F(x) = floor(-1/2 + sqrt(1 + 8x)/2)` for a nonnegative rational `x`.
///
/// Triangular numbers are integers, so `F(x) = F(floor(x))`.
pub fn floor_f(x: &Rational) -> Result<usize> {
    if x.is_negative() {
        return Err(Error::NegativeArgument(x.to_string()));
    }
    let fl = x.floor().to_integer();
    let n = fl
        .to_usize()
        .ok_or_else(|| Error::NegativeArgument(x.to_string()))?;
    Ok(floor_f_int(n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FVariant {
    Plus1,
    Plus2,
    Minus1,
    Minus2,
}

pub fn f_variant(x: &Rational, which: FVariant) -> Result<usize> {
    let f = floor_f(x)?;
    Ok(match which {
        FVariant::Plus1 => f + 1,
        FVariant::Plus2 => f + 2,
        FVariant::Minus1 => f,
        FVariant::Minus2 => {
            let one = Rational::from_integer(1.into());
            if *x < one {
                return Err(Error::MinusTwoDomain(x.to_string()));
            }
            floor_f(&(x - one))? + 1
        }
    })
}

/// `F(n/r)` without building a rational.
fn f_ratio(n: usize, r: usize) -> usize {
    floor_f_int(n / r)
}

/// `F_k^-(n/r)`; `None` when `k = 2` and `n < r`.
fn f_minus_ratio(n: usize, r: usize, axis: Axis) -> Option<usize> {
    match axis {
        Axis::X1 => Some(f_ratio(n, r)),
        Axis::X2 => (n >= r).then(|| f_ratio(n - r, r) + 1),
    }
}

/// A monomial pair `(i,j)`, `0 <= j <= i`, standing for `x^(i-j) y^j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GradedIndex {
    pub i: usize,
    pub j: usize,
}

impl GradedIndex {
    pub fn new(i: usize, j: usize) -> Result<Self> {
        if j > i {
            return Err(Error::InvalidGradedIndex { i, j });
        }
        Ok(GradedIndex { i, j })
    }

    pub fn position(self) -> usize {
        self.i * (self.i + 1) / 2 + self.j
    }

    pub fn from_position(pos: usize) -> Self {
        let i = floor_f_int(pos);
        GradedIndex {
            i,
            j: pos - i * (i + 1) / 2,
        }
    }

    /// Exponents `(i-j, j)` of `x_1` and `x_2`.
    pub fn exponents(self) -> (usize, usize) {
        (self.i - self.j, self.j)
    }

    pub fn from_exponents(e1: usize, e2: usize) -> Self {
        GradedIndex { i: e1 + e2, j: e2 }
    }
}

pub fn pos_of(i: usize, j: usize) -> Result<usize> {
    Ok(GradedIndex::new(i, j)?.position())
}

pub fn pair_of(pos: usize) -> GradedIndex {
    GradedIndex::from_position(pos)
}

/// Exponents of `x_1`, `x_2` in the monomial at graded-lex position `pos`.
pub fn exponents_of(pos: usize) -> (usize, usize) {
    pair_of(pos).exponents()
}

pub fn position_of_exponents(e1: usize, e2: usize) -> usize {
    GradedIndex::from_exponents(e1, e2).position()
}

/// Column of the single 1 in row `n` of the shift operator with block size
/// `r` in direction `k`: `n + r F(n/r) + k r`.
pub fn n_plus(n: usize, r: usize, axis: Axis) -> usize {
    debug_assert!(r > 0);
    n + r * f_ratio(n, r) + axis.k() * r
}

/// Inverse of [`n_plus`] on its image; `None` off the image.
pub fn n_plus_inverse(n: usize, r: usize, axis: Axis) -> Option<usize> {
    debug_assert!(r > 0);
    if n < axis.k() * r {
        return None;
    }
    let m = n.checked_sub(r * f_minus_ratio(n, r, axis)?)?;
    (n_plus(m, r, axis) == n).then_some(m)
}

/// `true` iff `n` lies outside the exceptional set `J_{r;k}`.
pub fn in_complement_j(n: usize, r: usize, axis: Axis) -> bool {
    n_plus_inverse(n, r, axis).is_some()
}

/// `N^-_{r;k}`: the inverse image of the first row `N >= n` outside `J_{r;k}`.
pub fn n_minus_big(n: usize, r: usize, axis: Axis) -> usize {
    // J is made of blocks of at most 2r consecutive integers, so this
    // terminates within 2r steps.
    (n..)
        .find_map(|m| n_plus_inverse(m, r, axis))
        .expect("complement of J is infinite")
}

/// Enumeration map of the sequence `s_r`: `(i,j) -> r i(i-1)/2 + j`,
/// for `i >= 1`, `0 <= j < i r`.
pub fn n_minus_of_pair(i: usize, j: usize, r: usize) -> usize {
    debug_assert!(i >= 1 && j < i * r);
    r * i * (i - 1) / 2 + j
}

/// Inverse of [`n_minus_of_pair`].
pub fn pair_of_n_minus(n: usize, r: usize) -> (usize, usize) {
    let i = f_ratio(n, r) + 1;
    (i, n - r * i * (i - 1) / 2)
}

/// Position of a 1 in the shift operator `Lambda_{[r];k}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShiftPosition {
    pub n: usize,
    pub r: usize,
    pub axis: Axis,
    pub target: usize,
}

impl ShiftPosition {
    pub fn new(n: usize, r: usize, axis: Axis) -> Self {
        ShiftPosition {
            n,
            r,
            axis,
            target: n_plus(n, r, axis),
        }
    }
}

/// `ceil(a / b)` for possibly negative `a` and positive `b`.
pub(crate) fn ceil_div(a: i64, b: i64) -> i64 {
    Integer::div_ceil(&a, &b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn floor_f_examples() {
        assert_eq!(floor_f(&int(0)).unwrap(), 0);
        assert_eq!(floor_f(&int(3)).unwrap(), 2);
        assert_eq!(floor_f(&rat(3, 2)).unwrap(), 1);
        assert!(floor_f(&rat(-1, 3)).is_err());
    }

    #[test]
    fn floor_f_large_is_exact() {
        let i: usize = 3_000_000_000;
        let t = i * (i + 1) / 2;
        assert_eq!(floor_f_int(t), i);
        assert_eq!(floor_f_int(t - 1), i - 1);
    }

    #[test]
    fn f_variant_examples() {
        assert_eq!(f_variant(&int(3), FVariant::Plus1).unwrap(), 3);
        assert_eq!(f_variant(&int(0), FVariant::Plus2).unwrap(), 2);
        assert_eq!(f_variant(&int(3), FVariant::Minus2).unwrap(), 2);
        assert_eq!(f_variant(&int(3), FVariant::Minus1).unwrap(), 2);
        assert!(f_variant(&rat(1, 2), FVariant::Minus2).is_err());
    }

    #[test]
    fn positions() {
        assert_eq!(pos_of(0, 0).unwrap(), 0);
        assert_eq!(pos_of(2, 1).unwrap(), 4);
        assert_eq!(pos_of(3, 1).unwrap(), 7);
        assert!(pos_of(1, 2).is_err());
        assert_eq!(pair_of(0), GradedIndex { i: 0, j: 0 });
        assert_eq!(pair_of(4), GradedIndex { i: 2, j: 1 });
        assert_eq!(pair_of(7), GradedIndex { i: 3, j: 1 });
    }

    #[test]
    fn shift_maps() {
        assert_eq!(n_plus(2, 1, Axis::X1), 4);
        assert_eq!(n_plus(1, 1, Axis::X2), 4);
        assert_eq!(n_plus(0, 2, Axis::X1), 2);
        assert_eq!(ShiftPosition::new(3, 1, Axis::X1).target, 6);
    }

    #[test]
    fn complement_membership() {
        assert!(!in_complement_j(2, 1, Axis::X1));
        assert!(in_complement_j(3, 1, Axis::X1));
        assert!(!in_complement_j(4, 2, Axis::X1));
        assert!(!in_complement_j(0, 3, Axis::X2));
    }

    #[test]
    fn n_minus_examples() {
        assert_eq!(n_minus_big(4, 2, Axis::X1), 2);
        assert_eq!(n_minus_big(3, 1, Axis::X1), 1);
        assert_eq!(n_minus_big(3, 2, Axis::X1), 1);
        // rows inside J look ahead: J_{2;1} = {0,1,4,5,10,11,...}
        assert_eq!(n_minus_big(5, 2, Axis::X1), 2);
        assert_eq!(n_minus_big(10, 2, Axis::X1), 6);
        assert_eq!(n_minus_big(0, 1, Axis::X2), 0);
    }

    #[test]
    fn ceil_div_signs() {
        assert_eq!(ceil_div(-1, 2), 0);
        assert_eq!(ceil_div(0, 3), 0);
        assert_eq!(ceil_div(5, 2), 3);
        assert_eq!(ceil_div(-3, 2), -1);
    }
}
