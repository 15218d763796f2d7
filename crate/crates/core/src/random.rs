//! Seeded generators of small rationals, measures and monic matrix
//! polynomials. Denominators stay at most 16, and measure data sits on a
//! dyadic grid, so exact arithmetic stays cheap at depth.

use num_traits::Zero;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::measure::{Atom, MeasureMatrix, MeasureSpec};
use crate::poly::{BiPoly, PolyMatrix};
use crate::rational::{rat, Rational};

pub type Point = (Rational, Rational);

pub const MAX_DEN: i64 = 16;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform over `num/den` with `|num/den| <= bound` and `den <= 16`.
pub fn small_rational<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    let den = rng.gen_range(1..=MAX_DEN);
    let num = rng.gen_range(-bound * den..=bound * den);
    rat(num, den)
}

/// Uniform over `num/den` with `|num/den| <= bound` and `den` in 1, 2, 4.
/// Moments of grid data share small denominators.
pub fn grid_rational<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    let den = 1 << rng.gen_range(0..=2);
    let num = rng.gen_range(-bound * den..=bound * den);
    rat(num, den)
}

pub fn nonzero_rational<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    loop {
        let v = small_rational(rng, bound);
        if !v.is_zero() {
            return v;
        }
    }
}

pub fn points<R: Rng>(rng: &mut R, count: usize) -> Vec<Point> {
    (0..count)
        .map(|_| (small_rational(rng, 2), small_rational(rng, 2)))
        .collect()
}

pub fn point_pairs<R: Rng>(rng: &mut R, count: usize) -> Vec<(Point, Point)> {
    (0..count)
        .map(|_| {
            let x = (small_rational(rng, 2), small_rational(rng, 2));
            let y = (small_rational(rng, 2), small_rational(rng, 2));
            (x, y)
        })
        .collect()
}

/// Side of the quarter grid on `[-2, 2]`.
const GRID_SIDE: usize = 17;

/// `atoms` distinct weighted atoms on the quarter grid in `[-2, 2]^2` with
/// integer weights in `1..=4`. Distinct atoms keep the rank of the moment
/// matrix at `atoms`.
pub fn discrete_measure<R: Rng>(rng: &mut R, atoms: usize) -> MeasureSpec {
    assert!(atoms <= GRID_SIDE * GRID_SIDE, "at most {} grid atoms", GRID_SIDE * GRID_SIDE);
    let coord = |i: usize| rat(i as i64 - 8, 4);
    MeasureSpec::discrete(
        sample(rng, GRID_SIDE * GRID_SIDE, atoms)
            .into_iter()
            .map(|cell| Atom {
                x: coord(cell / GRID_SIDE),
                y: coord(cell % GRID_SIDE),
                w: rat(rng.gen_range(1..=4), 1),
            })
            .collect(),
    )
}

/// A random grid box inside `[-2, 2]^2` and a density with up to six
/// dyadic coefficients. The constant term dominates, so the density is
/// positive on the box.
pub fn rect_measure<R: Rng>(rng: &mut R) -> MeasureSpec {
    let side = |rng: &mut R| loop {
        let (a, b) = (grid_rational(rng, 2), grid_rational(rng, 2));
        if a < b {
            return (a, b);
        }
        if b < a {
            return (b, a);
        }
    };
    let x1 = side(rng);
    let x2 = side(rng);
    let mut density = BiPoly::constant(rat(rng.gen_range(1..=4), 1));
    for k in 1..6 {
        if rng.gen_bool(0.5) {
            // five terms of size at most 4/32 stay below the constant
            density.add_term(k, grid_rational(rng, 1) / rat(32, 1));
        }
    }
    MeasureSpec::rect(x1, x2, density).expect("ordered sides")
}

/// A mix of atom and rectangle measures. Discrete entries get `atoms`
/// atoms, which should exceed the depth so the moment matrix can be regular.
pub fn measure_matrix<R: Rng>(rng: &mut R, q: usize, p: usize, atoms: usize) -> MeasureMatrix {
    let entries = (0..q * p)
        .map(|_| {
            if rng.gen_bool(0.5) {
                discrete_measure(rng, atoms)
            } else {
                rect_measure(rng)
            }
        })
        .collect();
    MeasureMatrix::new(q, p, entries).expect("shape matches")
}

/// `q = p` and `mu_{b,a} = mu_{a,b}`, so the moment matrix is symmetric.
pub fn symmetric_measure_matrix<R: Rng>(rng: &mut R, q: usize, atoms: usize) -> MeasureMatrix {
    let mut grid: Vec<Vec<Option<MeasureSpec>>> = vec![vec![None; q]; q];
    for b in 0..q {
        for a in b..q {
            let m = if rng.gen_bool(0.5) {
                discrete_measure(rng, atoms)
            } else {
                rect_measure(rng)
            };
            grid[a][b] = Some(m.clone());
            grid[b][a] = Some(m);
        }
    }
    MeasureMatrix::from_grid(
        grid.into_iter()
            .map(|row| row.into_iter().map(|m| m.expect("filled")).collect())
            .collect(),
    )
    .expect("square grid")
}

/// Monic `size x size` matrix polynomial with top position `pos`.
pub fn monic_poly_matrix<R: Rng>(rng: &mut R, size: usize, pos: usize) -> PolyMatrix {
    let mut m = PolyMatrix::monomial_identity(size, pos);
    for r in 0..size {
        for c in 0..size {
            for k in 0..pos {
                if rng.gen_bool(0.6) {
                    m.get_mut(r, c).add_term(k, small_rational(rng, 2));
                }
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn deterministic() {
        let a = points(&mut rng(7), 5);
        let b = points(&mut rng(7), 5);
        assert_eq!(a, b);
        assert_ne!(a, points(&mut rng(8), 5));
    }

    #[test]
    fn bounded() {
        let mut r = rng(1);
        for _ in 0..200 {
            let v = small_rational(&mut r, 2);
            assert!(v.abs() <= rat(2, 1));
            assert!(*v.denom() <= MAX_DEN.into());
        }
    }

    #[test]
    fn monic() {
        let m = monic_poly_matrix(&mut rng(3), 2, 4);
        assert!(m.is_monic());
        assert_eq!(m.grlex_pos(), Some(4));
    }

    #[test]
    fn symmetric_grid() {
        let mm = symmetric_measure_matrix(&mut rng(2), 2, 4);
        assert_eq!(mm.get(0, 1), mm.get(1, 0));
    }
}
