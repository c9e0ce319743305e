use proptest::prelude::*;
use sirdiv::analytic::{self, NormalizedParams, Threshold};
use sirdiv::cli::CurveTable;
use sirdiv::specfun::{diversity_poly, diversity_poly_bounds, diversity_poly_coefficients, DiversityOrder};

fn order(n: usize) -> DiversityOrder {
    DiversityOrder::new(n).unwrap()
}

fn th(t: f64) -> Threshold {
    Threshold::new(t).unwrap()
}

proptest! {
    #[test]
    fn diversity_bounds_hold(n in 2usize..5000, x in 0.001f64..0.999) {
        let d = diversity_poly(order(n), x).unwrap();
        let b = diversity_poly_bounds(order(n), x).unwrap();
        prop_assert!(b.lower < d * (1.0 + 1e-14));
        prop_assert!(d <= b.upper_asymptotic * (1.0 + 1e-12));
        prop_assert!(d <= b.upper_linear * (1.0 + 1e-12));
    }

    #[test]
    fn diversity_recursion(n in 1usize..3000, x in 0.0f64..=1.0) {
        let lhs = diversity_poly(order(n + 1), x).unwrap();
        let rhs = diversity_poly(order(n), x).unwrap() * (1.0 + x / n as f64);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs);
    }

    #[test]
    fn coefficients_agree_with_product(n in 1usize..=64, x in 0.0f64..=1.0) {
        let c = diversity_poly_coefficients(order(n)).unwrap();
        let direct = diversity_poly(order(n), x).unwrap();
        prop_assert!((c.evaluate(x) - direct).abs() <= 1e-12 * direct);
    }

    #[test]
    fn joint_success_ordering(
        c in 0.01f64..5.0, d in 0.05f64..0.95, t in 0.1f64..10.0, n in 1usize..200,
    ) {
        let p = NormalizedParams::new(c, d).unwrap();
        let pn = analytic::joint_success_prob(&p, order(n), th(t));
        let next = analytic::joint_success_prob(&p, order(n + 1), th(t));
        let indep = analytic::independent_joint_prob(&p, order(n), th(t));
        let b = analytic::joint_prob_bounds(&p, order(n), th(t));
        prop_assert!(next <= pn);
        prop_assert!(indep <= pn * (1.0 + 1e-12));
        prop_assert!(b.lower <= pn * (1.0 + 1e-12) && pn <= b.upper * (1.0 + 1e-12));
        let cond = analytic::conditional_success_prob(&p, order(n), th(t));
        prop_assert!((next - pn * cond).abs() <= 1e-12);
    }

    #[test]
    fn selection_combining_ordering(
        c in 0.01f64..3.0, d in 0.05f64..0.95, t in 0.1f64..10.0, n in 1usize..100,
    ) {
        let p = NormalizedParams::new(c, d).unwrap();
        let pn = analytic::selection_combining_prob(&p, order(n), th(t)).unwrap();
        let next = analytic::selection_combining_prob(&p, order(n + 1), th(t)).unwrap();
        let single = analytic::single_success_prob(&p, th(t));
        let indep = analytic::independent_selection_prob(&p, order(n), th(t));
        prop_assert!(single - 1e-12 <= pn && pn <= 1.0);
        prop_assert!(pn <= next + 1e-12);
        prop_assert!(pn <= indep + 1e-12);
    }

    #[test]
    fn correlation_in_unit_interval(c in 0.0f64..20.0, d in 0.01f64..0.99, t in 0.0f64..10.0) {
        let p = NormalizedParams::new(c, d).unwrap();
        let z = analytic::indicator_correlation(&p, th(t));
        prop_assert!((0.0..=1.0).contains(&z));
    }

    #[test]
    fn two_antenna_law(c in 0.01f64..5.0, d in 0.05f64..0.95, t1 in 0.01f64..10.0, t2 in 0.01f64..10.0) {
        let p = NormalizedParams::new(c, d).unwrap();
        let a = analytic::joint_two_antenna_success(&p, th(t1), th(t2));
        let b = analytic::joint_two_antenna_success(&p, th(t2), th(t1));
        prop_assert_eq!(a, b);
        let s1 = analytic::single_success_prob(&p, th(t1));
        let s2 = analytic::single_success_prob(&p, th(t2));
        prop_assert!(a <= s1.min(s2) * (1.0 + 1e-12));
        prop_assert!(analytic::independent_two_antenna_success(&p, th(t1), th(t2)) <= a * (1.0 + 1e-12));
        let cdf = analytic::joint_two_antenna_cdf(&p, th(t1), th(t2));
        prop_assert!((0.0..=1.0).contains(&cdf));
        let zero = analytic::joint_two_antenna_success(&p, th(t1), th(0.0));
        prop_assert!((zero - s1).abs() <= 1e-13);
    }

    #[test]
    fn curve_table_csv_round_trip(
        xs in prop::collection::btree_set(-1_000_000i64..1_000_000, 1..20),
        scale in 1e-12f64..1e12,
        seed in any::<u64>(),
    ) {
        let mut t = CurveTable::new("round trip", "x", vec!["a".into(), "b".into()]);
        t.param("seed", seed);
        for (i, x) in xs.iter().enumerate() {
            let x = *x as f64 * 1e-3;
            t.push_row(x, vec![x * scale, (i as f64 + 0.1).ln() / scale]).unwrap();
        }
        let back = CurveTable::from_csv(&t.to_csv()).unwrap();
        prop_assert_eq!(back, t);
    }
}
