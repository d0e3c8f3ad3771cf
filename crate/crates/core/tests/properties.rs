use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use trajmetric::analysis::{check_inequality_chain, d_infinity, d_zero, ospa, ospa2};
use trajmetric::random::{random_trajectory_set, RandomSetConfig};
use trajmetric::{exact_metric, gospa, lp_metric, MetricParams, TrajectorySet, WeightSchedule};

fn point() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..10.0f64, 2)
}

fn target_set() -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(point(), 0..=4)
}

fn params() -> impl Strategy<Value = MetricParams> {
    (prop::sample::select(vec![1.0, 2.0, 5.0]), prop::sample::select(vec![1.0, 2.0]), 0.1..5.0f64)
        .prop_map(|(c, p, gamma)| MetricParams::new(c, p, gamma).unwrap())
}

/// Trajectory sets drawn from a seed, all sharing one window.
fn sets(count: usize) -> impl Strategy<Value = Vec<TrajectorySet>> {
    (any::<u64>(), 1..=5usize).prop_map(move |(seed, window)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let config = RandomSetConfig::small(window);
        (0..count).map(|_| random_trajectory_set(&mut rng, "t", &config)).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn gospa_is_a_metric(x in target_set(), y in target_set(), z in target_set(), params in params()) {
        let xy = gospa(&x, &y, &params).unwrap().total;
        prop_assert!((xy - gospa(&y, &x, &params).unwrap().total).abs() <= 1e-9);
        prop_assert_eq!(gospa(&x, &x, &params).unwrap().total, 0.0);
        let xz = gospa(&x, &z, &params).unwrap().total;
        let zy = gospa(&z, &y, &params).unwrap().total;
        prop_assert!(xy <= xz + zy + 1e-9);
    }

    #[test]
    fn gospa_grows_with_cutoff(x in target_set(), y in target_set(), p in 1.0..3.0f64, c in 0.5..5.0f64) {
        let small = gospa(&x, &y, &MetricParams::new(c, p, 1.0).unwrap()).unwrap().total;
        let large = gospa(&x, &y, &MetricParams::new(2.0 * c, p, 1.0).unwrap()).unwrap().total;
        prop_assert!(small <= large + 1e-9);
    }

    #[test]
    fn ospa_is_a_metric(x in target_set(), y in target_set(), z in target_set(), params in params()) {
        let xy = ospa(&x, &y, &params).unwrap();
        prop_assert!(xy <= params.c + 1e-12);
        prop_assert!((xy - ospa(&y, &x, &params).unwrap()).abs() <= 1e-9);
        prop_assert!(xy <= ospa(&x, &z, &params).unwrap() + ospa(&z, &y, &params).unwrap() + 1e-9);
    }

    #[test]
    fn trajectory_metrics_are_symmetric(s in sets(2), params in params()) {
        let weights = WeightSchedule::uniform(s[0].window()).unwrap();
        for f in [exact_metric, lp_metric] {
            let a = f(&s[0], &s[1], &params, &weights).unwrap().total;
            let b = f(&s[1], &s[0], &params, &weights).unwrap().total;
            prop_assert!((a - b).abs() <= 1e-9, "{} vs {}", a, b);
        }
        let a = ospa2(&s[0], &s[1], &params).unwrap();
        prop_assert!((a - ospa2(&s[1], &s[0], &params).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn trajectory_metrics_satisfy_the_triangle_inequality(s in sets(3), params in params()) {
        let weights = WeightSchedule::uniform(s[0].window()).unwrap();
        for f in [exact_metric, lp_metric, d_infinity] {
            let xy = f(&s[0], &s[1], &params, &weights).unwrap().total;
            let xz = f(&s[0], &s[2], &params, &weights).unwrap().total;
            let zy = f(&s[2], &s[1], &params, &weights).unwrap().total;
            prop_assert!(xy <= xz + zy + 1e-9, "{} > {} + {}", xy, xz, zy);
        }
        let xy = ospa2(&s[0], &s[1], &params).unwrap();
        prop_assert!(xy <= ospa2(&s[0], &s[2], &params).unwrap() + ospa2(&s[2], &s[1], &params).unwrap() + 1e-9);
    }

    #[test]
    fn distance_to_self_is_zero(s in sets(1), params in params()) {
        let weights = WeightSchedule::uniform(s[0].window()).unwrap();
        for f in [exact_metric, lp_metric, d_zero, d_infinity] {
            prop_assert!(f(&s[0], &s[0], &params, &weights).unwrap().total.abs() <= 1e-9);
        }
        prop_assert_eq!(ospa2(&s[0], &s[0], &params).unwrap(), 0.0);
    }

    #[test]
    fn scaling_weights_scales_by_root(s in sets(2), params in params(), lambda in 0.1..10.0f64) {
        let weights = WeightSchedule::uniform(s[0].window()).unwrap();
        let scaled = weights.scaled(lambda).unwrap();
        for f in [exact_metric, lp_metric, d_zero, d_infinity] {
            let a = f(&s[0], &s[1], &params, &weights).unwrap().total;
            let b = f(&s[0], &s[1], &params, &scaled).unwrap().total;
            prop_assert!((b - lambda.powf(1.0 / params.p) * a).abs() <= 1e-8 * (1.0 + b));
        }
    }

    #[test]
    fn exact_metric_grows_with_cutoff(s in sets(2), params in params()) {
        let weights = WeightSchedule::uniform(s[0].window()).unwrap();
        let mut wider = params;
        wider.c *= 2.0;
        let a = exact_metric(&s[0], &s[1], &params, &weights).unwrap().total;
        let b = exact_metric(&s[0], &s[1], &wider, &weights).unwrap().total;
        prop_assert!(a <= b + 1e-9);
    }

    #[test]
    fn bounds_are_ordered(s in sets(2), params in params()) {
        let weights = WeightSchedule::uniform(s[0].window()).unwrap();
        prop_assert!(check_inequality_chain(&s[0], &s[1], &params, &weights).is_ok());
    }

    #[test]
    fn decomposition_closes(s in sets(2), params in params()) {
        let weights = WeightSchedule::uniform(s[0].window()).unwrap();
        for f in [exact_metric, lp_metric, d_zero, d_infinity] {
            let r = f(&s[0], &s[1], &params, &weights).unwrap();
            let c = r.components();
            let sum = c.loc + c.miss + c.false_target + c.switch;
            prop_assert!((r.total.powf(params.p) - sum).abs() <= 1e-9 * (1.0 + sum));
        }
    }
}
