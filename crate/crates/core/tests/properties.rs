//! Randomized invariants of the exact series, operator and polytope layers.

use proptest::prelude::*;

use period_engine::diffop::{pullback, Substitution};
use period_engine::series::{hypergeom_series, series_compose, series_elementary, series_reverse, Elementary};
use period_engine::toric::{lattice_points, polar_dual, LatticePolytope2D};
use period_engine::{catalog, rat, Rational, ThetaOperator, TruncatedSeries};

fn ratio() -> impl Strategy<Value = Rational> {
    (-40i64..40, 1i64..12).prop_map(|(n, d)| rat(n, d))
}

fn series(len: usize) -> impl Strategy<Value = TruncatedSeries> {
    proptest::collection::vec(ratio(), len).prop_map(TruncatedSeries::from_coeffs)
}

/// Series with zero constant term and the given linear coefficient.
fn tangent(len: usize) -> impl Strategy<Value = TruncatedSeries> {
    (prop_oneof![-5i64..=-1, 1i64..=5], proptest::collection::vec(ratio(), len - 2)).prop_map(|(a, rest)| {
        let mut c = vec![Rational::from_integer(0.into()), rat(a, 1)];
        c.extend(rest);
        TruncatedSeries::from_coeffs(c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn ring_axioms(a in series(10), b in series(10), c in series(10)) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a - &b) + &b, a);
    }

    #[test]
    fn reversion_is_inverse(f in tangent(10)) {
        let g = series_reverse(&f).unwrap();
        prop_assert_eq!(series_compose(&f, &g).unwrap(), TruncatedSeries::var(10));
        prop_assert_eq!(series_compose(&g, &f).unwrap(), TruncatedSeries::var(10));
    }

    #[test]
    fn log_inverts_exp(f in tangent(9)) {
        let ef = series_elementary(&f, &Elementary::Exp).unwrap();
        prop_assert_eq!(series_elementary(&ef, &Elementary::Log).unwrap(), f);
    }

    #[test]
    fn square_root_squares_back(f in tangent(9)) {
        let one = TruncatedSeries::one(9);
        let g = &one + &f;
        let r = series_elementary(&g, &Elementary::Pow(rat(1, 2))).unwrap();
        prop_assert_eq!(&r * &r, g);
    }

    #[test]
    fn hypergeometric_series_is_annihilated(a in 1i64..12, b in 1i64..12, d in 1i64..7) {
        let upper = [rat(a, d + 5), rat(b, d + 5)];
        let lower = [rat(1, 1)];
        let op = ThetaOperator::hypergeometric("z", &upper, &lower).unwrap();
        let f = hypergeom_series(&upper, &lower, 12).unwrap();
        prop_assert!(op.apply_series(&f).is_zero());
    }

    #[test]
    fn affine_pullback_round_trip(a in prop_oneof![-6i64..=-1, 1i64..=6], b in -6i64..6, d in 1i64..5) {
        let phi = Substitution::Affine(rat(a, d), rat(b, d));
        let inv = phi.inverse().unwrap();
        for op in [catalog::l_pf(), catalog::l_triangular()] {
            let there = pullback(&op, &phi).unwrap();
            prop_assert_eq!(pullback(&there, &inv).unwrap(), op);
        }
    }

    #[test]
    fn polar_duality_commutes_with_unimodular_maps(a in -3i64..4, b in -3i64..4, c in -3i64..4) {
        // g = [[1, a], [0, 1]]·[[1, 0], [b, 1]]·[[1, c], [0, 1]] has determinant 1
        let g = |v: (i64, i64)| {
            let v = (v.0 + c * v.1, v.1);
            let v = (v.0, b * v.0 + v.1);
            (v.0 + a * v.1, v.1)
        };
        let delta = [(2, -1), (-1, 2), (-1, -1)];
        let p = LatticePolytope2D::new(&delta.map(g)).unwrap();
        prop_assert_eq!(lattice_points(&p).len(), 10);
        let dual = polar_dual(&p).unwrap();
        prop_assert_eq!(lattice_points(&dual).len(), 4);
        prop_assert_eq!(polar_dual(&dual).unwrap(), p);
    }
}
