mod common;

use proptest::prelude::*;

use bimop::kernel::{
    cd_blocks, check_abc, check_cd_formula, check_cd_grid, check_cd_identity, check_projection,
    check_projection_dual, check_reproduction, kernel_eval, kernel_increment, Point,
};
use bimop::random::{measure_matrix, monic_poly_matrix, point_pairs, points, rng};
use bimop::rational::int;
use bimop::recurrence::required_depth;
use bimop::workspace::Workspace;
use bimop::{Axis, Error, PolyMatrix};

use common::{inverse_oracle, leading, regular, to_rows};

fn shape() -> impl Strategy<Value = (usize, usize)> {
    prop_oneof![Just((1, 1)), Just((1, 2)), Just((2, 1)), Just((2, 2))]
}

fn workspace(q: usize, p: usize, seed: u64, depth: usize) -> Result<Workspace, TestCaseError> {
    let mm = measure_matrix(&mut rng(seed), q, p, required_depth(depth, q, p) + 4);
    regular(Workspace::build(mm, depth))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn christoffel_darboux((q, p) in shape(), seed in any::<u64>(), n in 0usize..5) {
        let ws = workspace(q, p, seed, 14)?;
        let pairs = point_pairs(&mut rng(seed ^ 7), 3);
        for axis in Axis::BOTH {
            let t = ws.t(axis).unwrap();
            let blocks = cd_blocks(t, &ws.a, &ws.b, n).unwrap();
            for (x, y) in &pairs {
                prop_assert!(check_cd_formula(&blocks, &ws.a, &ws.b, x, y).passed());
            }
            prop_assert!(check_cd_grid(t, &ws.a, &ws.b, n).unwrap().passed());
            prop_assert!(check_cd_identity(t, &ws.a, &ws.b, n).unwrap().passed());
        }
    }

    #[test]
    fn abc_and_reproduction((q, p) in shape(), seed in any::<u64>(), n in 0usize..8) {
        let ws = workspace(q, p, seed, 10)?;
        let pairs = point_pairs(&mut rng(seed ^ 3), 3);
        let m = ws.moments.data.leading(n + 1);
        prop_assert!(check_abc(&ws.moments.data, &ws.a, &ws.b, n, &pairs).unwrap().passed());
        // the library inverse agrees with the test-side one
        prop_assert_eq!(to_rows(&m.inverse().unwrap()), inverse_oracle(&leading(&to_rows(&m), n + 1)).unwrap());
        let rep = check_reproduction(&ws.factorization, &ws.moments.data, &ws.a, &ws.b, &ws.cache, n, &pairs[..1]);
        prop_assert!(rep.passed());
    }

    #[test]
    fn projection_above_threshold((q, p) in shape(), seed in any::<u64>(), deg in 0usize..3) {
        let ws = workspace(q, p, seed, 12)?;
        let pts = points(&mut rng(seed ^ 5), 2);
        let mut g = rng(seed ^ 9);
        let poly = monic_poly_matrix(&mut g, p, deg);
        let n = deg * p + p - 1;
        prop_assert!(check_projection(&ws.a, &ws.b, &ws.cache, n, &poly, &pts).unwrap().passed());
        let poly = monic_poly_matrix(&mut g, q, deg);
        let n = deg * q + q - 1;
        prop_assert!(check_projection_dual(&ws.a, &ws.b, &ws.cache, n, &poly, &pts).unwrap().passed());
    }
}

#[test]
fn kernel_is_a_sum_of_increments() {
    let ws = workspace(2, 3, 4, 8).unwrap();
    let x: Point = (int(1), int(-2));
    let y: Point = (int(3), int(1));
    let mut acc = kernel_eval(&ws.a, &ws.b, 0, &x, &y);
    for n in 1..8 {
        let inc = kernel_increment(&ws.a, &ws.b, n, &x, &y);
        for r in 0..3 {
            for c in 0..2 {
                acc[(r, c)] += &inc[(r, c)];
            }
        }
        assert_eq!(acc, kernel_eval(&ws.a, &ws.b, n, &x, &y));
    }
}

#[test]
fn below_threshold_is_refused() {
    let ws = workspace(1, 2, 6, 8).unwrap();
    let poly = PolyMatrix::monomial_identity(2, 2);
    let err = check_projection(&ws.a, &ws.b, &ws.cache, 4, &poly, &[]).unwrap_err();
    assert!(matches!(err, Error::BelowThreshold { n: 4, threshold: 5 }));
    let not_monic = PolyMatrix::zeros(2, 2);
    assert!(check_projection(&ws.a, &ws.b, &ws.cache, 7, &not_monic, &[]).is_err());
}

#[test]
fn corrupted_recurrence_breaks_the_formula() {
    let ws = workspace(1, 2, 8, 14).unwrap();
    let mut t = ws.t(Axis::X1).unwrap().clone();
    t.data[(5, 3)] += int(1);
    assert!(!check_cd_grid(&t, &ws.a, &ws.b, 3).unwrap().passed());
    assert!(!check_cd_identity(&t, &ws.a, &ws.b, 3).unwrap().passed());
}
