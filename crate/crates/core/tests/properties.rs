use std::sync::Arc;

use proptest::prelude::*;
use wassalg::laws::checks::{check_sa, check_sc, check_wasserstein_condition};
use wassalg::transport::one_dim::cost_1d;
use wassalg::{
    brute_force_oracle, coupling_convex_sum, marginals, optimal_coupling, Barycentric, FiniteMetric, Measure,
    Order, Rational, RealLine, Scalar,
};

type Line = Measure<Rational, RealLine>;

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn line_measure(max_atoms: usize) -> impl Strategy<Value = Line> {
    prop::collection::vec((0i64..13, 1i64..10), 1..=max_atoms).prop_map(|pairs| {
        let total: i64 = pairs.iter().map(|p| p.1).sum();
        Measure::new(
            Arc::new(RealLine),
            pairs.iter().map(|p| q(p.0, 4)).collect(),
            pairs.iter().map(|p| q(p.1, total)).collect(),
        )
        .unwrap()
    })
}

fn unit() -> impl Strategy<Value = Rational> {
    (1i64..=16).prop_flat_map(|d| (0..=d).prop_map(move |n| q(n, d)))
}

fn order() -> impl Strategy<Value = Order> {
    prop::sample::select(vec![Order::ONE, Order::TWO, Order::THREE])
}

fn one() -> Rational {
    q(1, 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn skew_commutativity(x in line_measure(4), y in line_measure(4), r in unit()) {
        prop_assert!(check_sc(&x, &y, &r).unwrap().holds());
        prop_assert_eq!(x.mix(&y, &r).unwrap(), y.mix(&x, &(one() - r)).unwrap());
    }

    #[test]
    fn skew_associativity(x in line_measure(3), y in line_measure(3), z in line_measure(3), p in unit(), r in unit()) {
        let o = check_sa(&x, &y, &z, &p, &r).unwrap();
        prop_assert!(o.holds());
        prop_assert_eq!(o.lhs, q(0, 1));
    }

    #[test]
    fn mixtures_stay_normalized(x in line_measure(5), y in line_measure(5), r in unit()) {
        let m = x.convex_sum(&y, &r).unwrap();
        prop_assert_eq!(m.total_mass(), one());
        prop_assert!(m.weights().iter().all(|w| *w > q(0, 1)));
        prop_assert!(m.atoms().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn simplex_matches_vertex_enumeration(x in line_measure(4), y in line_measure(4), p in order()) {
        let fast = optimal_coupling(&x, &y, p).unwrap();
        let slow = brute_force_oracle(&x, &y, p).unwrap();
        prop_assert_eq!(&fast.cost_p, &slow.cost_p);
        let (a, b) = marginals(&fast.coupling).unwrap();
        prop_assert_eq!(&a, &x);
        prop_assert_eq!(&b, &y);
    }

    #[test]
    fn simplex_matches_quantile_formula(x in line_measure(12), y in line_measure(12), p in order()) {
        prop_assert_eq!(optimal_coupling(&x, &y, p).unwrap().cost_p, cost_1d(&x, &y, p).unwrap());
    }

    #[test]
    fn distance_is_symmetric(x in line_measure(6), y in line_measure(6), p in order()) {
        prop_assert_eq!(
            optimal_coupling(&x, &y, p).unwrap().cost_p,
            optimal_coupling(&y, &x, p).unwrap().cost_p
        );
    }

    #[test]
    fn condition_star(x in line_measure(3), x2 in line_measure(3), y in line_measure(3), y2 in line_measure(3), r in unit(), p in order()) {
        prop_assert!(check_wasserstein_condition(&x, &x2, &y, &y2, &r, p).unwrap().holds());
    }

    #[test]
    fn mixed_couplings_couple_the_mixtures(x in line_measure(3), y in line_measure(3), u in line_measure(3), v in line_measure(3), r in unit()) {
        let a = optimal_coupling(&x, &y, Order::ONE).unwrap().coupling;
        let b = optimal_coupling(&u, &v, Order::ONE).unwrap().coupling;
        let c = coupling_convex_sum(&a, &b, &r).unwrap();
        let (left, right) = marginals(&c).unwrap();
        prop_assert_eq!(left, x.convex_sum(&u, &r).unwrap());
        prop_assert_eq!(right, y.convex_sum(&v, &r).unwrap());
    }

    #[test]
    fn float_weights_tolerate_rounding(ws in prop::collection::vec(1u32..1000, 1..20)) {
        let total: u32 = ws.iter().sum();
        let weights: Vec<f64> = ws.iter().map(|&w| w as f64 / total as f64).collect();
        let atoms: Vec<f64> = (0..ws.len()).map(|i| i as f64).collect();
        let m = Measure::new(Arc::new(RealLine), atoms, weights).unwrap();
        prop_assert!((m.total_mass() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn matrix_spaces_agree_with_oracle(seed in 0u64..1000, p in order()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let space = Arc::new(wassalg::sampling::random_finite_metric::<Rational, _>(&mut rng, 5).unwrap());
        let x = wassalg::sampling::random_measure(&space, &mut rng, 4).unwrap();
        let y = wassalg::sampling::random_measure(&space, &mut rng, 4).unwrap();
        let _: &Measure<Rational, FiniteMetric<Rational>> = &x;
        prop_assert_eq!(optimal_coupling(&x, &y, p).unwrap().cost_p, brute_force_oracle(&x, &y, p).unwrap().cost_p);
    }
}
