mod common;

use proptest::prelude::*;

use bimop::index::{
    f_variant, floor_f, floor_f_int, in_complement_j, n_minus_big, n_plus, n_plus_inverse, pair_of, pos_of,
    FVariant, GradedIndex, ShiftPosition,
};
use bimop::rational::rat;
use bimop::{Axis, Error};

use common::{image_oracle, monomials, n_minus_big_oracle, n_plus_oracle};

fn axis() -> impl Strategy<Value = Axis> {
    prop_oneof![Just(Axis::X1), Just(Axis::X2)]
}

proptest! {
    #[test]
    fn pair_position_round_trip(pos in 0usize..2_000_000) {
        let g = pair_of(pos);
        prop_assert!(g.j <= g.i);
        prop_assert_eq!(pos_of(g.i, g.j).unwrap(), pos);
        prop_assert_eq!(GradedIndex::from_exponents(g.i - g.j, g.j), g);
    }

    #[test]
    fn floor_f_brackets(n in 0usize..10_000_000) {
        let f = floor_f_int(n);
        prop_assert!(f * (f + 1) / 2 <= n && n < (f + 1) * (f + 2) / 2);
    }

    #[test]
    fn floor_f_ignores_fraction(n in 0i64..100_000, num in 0i64..7) {
        prop_assert_eq!(floor_f(&rat(7 * n + num, 7)).unwrap(), floor_f_int(n as usize));
    }

    #[test]
    fn n_plus_is_increasing_and_invertible(n in 0usize..100_000, r in 1usize..6, k in axis()) {
        let a = n_plus(n, r, k);
        prop_assert!(a < n_plus(n + 1, r, k));
        prop_assert_eq!(n_plus_inverse(a, r, k), Some(n));
        prop_assert!(in_complement_j(a, r, k));
        prop_assert_eq!(n_minus_big(a, r, k), n);
    }

    #[test]
    fn n_minus_big_is_the_next_image(n in 0usize..100_000, r in 1usize..6, k in axis()) {
        let m = n_minus_big(n, r, k);
        let image = n_plus(m, r, k);
        prop_assert!(image >= n);
        // nothing in between lies in the image
        prop_assert!((n..image).all(|v| !in_complement_j(v, r, k)));
        prop_assert!(image - n <= 2 * r);
    }

    #[test]
    fn shift_position_matches(n in 0usize..10_000, r in 1usize..4, k in axis()) {
        let s = ShiftPosition::new(n, r, k);
        prop_assert_eq!(s.target, n_plus(n, r, k));
    }
}

#[test]
fn matches_monomial_walk() {
    let list = monomials(800);
    for r in 1..=4 {
        for k in Axis::BOTH {
            let image = image_oracle(&list, 600, r, k.k());
            for n in 0..600 {
                assert_eq!(n_plus(n, r, k), n_plus_oracle(&list, n, r, k.k()));
                assert_eq!(in_complement_j(n, r, k), image.contains_key(&n));
                assert_eq!(n_minus_big(n, r, k), n_minus_big_oracle(&image, n));
            }
        }
    }
}

#[test]
fn f_variants() {
    assert_eq!(f_variant(&rat(3, 1), FVariant::Plus1).unwrap(), 3);
    assert_eq!(f_variant(&rat(3, 1), FVariant::Plus2).unwrap(), 4);
    assert_eq!(f_variant(&rat(3, 1), FVariant::Minus1).unwrap(), 2);
    assert_eq!(f_variant(&rat(3, 1), FVariant::Minus2).unwrap(), 2);
    assert!(matches!(f_variant(&rat(1, 2), FVariant::Minus2), Err(Error::MinusTwoDomain(_))));
    assert!(matches!(floor_f(&rat(-1, 3)), Err(Error::NegativeArgument(_))));
    assert!(matches!(pos_of(1, 2), Err(Error::InvalidGradedIndex { i: 1, j: 2 })));
}
