//! Property tests for the algebraic invariants of the estimators.

use heavytail::analysis::log_spaced_sizes;
use heavytail::distributions::{SampleSet, SlowlyVarying, TailModel};
use heavytail::moments::{
    implied_alpha, summarize, theoretical_limit, LimitKind, MomentRequest,
};
use heavytail::tailfit::{empirical_survival, hill};
use proptest::prelude::*;

fn positive_data() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.001f64..1e6, 5..120)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn semivariances_decompose_absolute_moments(values in positive_data(), h in 0.5f64..4.0) {
        let req = MomentRequest { raw: vec![1.0], central: vec![], semivariance: vec![h] };
        let s = summarize(&values, &req).unwrap();
        let mean = s.mean();
        let n = values.len() as f64;
        let absolute: f64 =
            values.iter().map(|&x| (x - mean).abs().powf(h)).sum::<f64>() / n;
        let total = s.lower_semivariance(h).unwrap() + s.upper_semivariance(h).unwrap();
        prop_assert!((total - absolute).abs() <= 1e-12 * absolute.max(1.0),
            "lower + upper = {total} vs direct {absolute}");
        // Side counts partition the sample.
        prop_assert_eq!(s.n_lower + s.n_upper, values.len());
    }

    #[test]
    fn variance_splits_into_semivariances(values in positive_data()) {
        let req = MomentRequest { raw: vec![1.0], central: vec![2.0], semivariance: vec![2.0] };
        let s = summarize(&values, &req).unwrap();
        let v = s.variance().unwrap();
        let split = s.lower_semivariance(2.0).unwrap() + s.upper_semivariance(2.0).unwrap();
        prop_assert!((v - split).abs() <= 1e-12 * v.abs().max(1.0));
    }

    #[test]
    fn moments_are_scale_covariant(values in positive_data(), lambda in 0.01f64..100.0) {
        let req = MomentRequest { raw: vec![1.0, 2.0], central: vec![2.0], semivariance: vec![2.0] };
        let base = summarize(&values, &req).unwrap();
        let scaled_values: Vec<f64> = values.iter().map(|&x| lambda * x).collect();
        let scaled = summarize(&scaled_values, &req).unwrap();
        let tol = 1e-11;
        let close = |a: f64, b: f64| (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300);
        prop_assert!(close(scaled.mean(), lambda * base.mean()));
        prop_assert!(close(scaled.raw_moment(2.0).unwrap(), lambda * lambda * base.raw_moment(2.0).unwrap()));
        prop_assert!(close(scaled.variance().unwrap(), lambda * lambda * base.variance().unwrap()));
        prop_assert_eq!(scaled.n_lower, base.n_lower);
        prop_assert_eq!(scaled.n_upper, base.n_upper);
    }

    #[test]
    fn hill_is_scale_invariant(values in prop::collection::vec(0.1f64..1e5, 10..100), lambda in 0.01f64..1e4) {
        let k = values.len() / 2;
        let base = SampleSet::from_data(values.clone(), "prop");
        let scaled = SampleSet::from_data(values.iter().map(|&x| lambda * x).collect(), "prop");
        match (hill(&base, k), hill(&scaled, k)) {
            (Ok(a), Ok(b)) => prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "{a} vs {b}"),
            // Degenerate (tied top values) must be degenerate for both.
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "scale changed the outcome: {a:?} vs {b:?}"),
        }
    }

    #[test]
    fn survival_is_monotone_and_normalized(
        alpha in 0.1f64..0.95,
        which in 0usize..3,
        steps in prop::collection::vec(1.001f64..4.0, 12),
    ) {
        // x_min = 40 sits past the rising stretch of every family here for
        // alpha >= 0.1 (PowLog(1/3) turns over at exp(1/(3 alpha)) <= e^3.4).
        let sv = match which {
            0 => SlowlyVarying::Constant(2.0),
            1 => SlowlyVarying::PowLog(1.0 / 3.0),
            _ => SlowlyVarying::ExpLogBeta { positive: false, beta: 0.5 },
        };
        let model = TailModel::new(alpha, sv, 40.0).unwrap();
        prop_assert!((model.survival(model.x_min()) - 1.0).abs() <= 1e-12);
        let mut x = model.x_min();
        let mut prev = 1.0f64;
        for step in steps {
            x *= step;
            let s = model.survival(x);
            prop_assert!(s <= prev + 1e-15, "survival rose from {prev} to {s} at x = {x}");
            prop_assert!(s > 0.0);
            prev = s;
        }
    }

    #[test]
    fn implied_alpha_inverts_variance_limit(alpha in 0.01f64..0.99) {
        let r = theoretical_limit(LimitKind::Variance, alpha).unwrap();
        let back = implied_alpha(r).unwrap();
        prop_assert!((back - alpha).abs() <= 1e-12, "{alpha} -> {r} -> {back}");
    }

    #[test]
    fn size_grids_are_monotone_with_exact_endpoints(
        n_min in 1usize..5_000,
        span in 1usize..200_000,
        count in 2usize..64,
    ) {
        let n_max = n_min + span;
        let sizes = log_spaced_sizes(n_min, n_max, count).unwrap();
        prop_assert_eq!(sizes.len(), count);
        prop_assert_eq!(sizes[0], n_min);
        prop_assert_eq!(sizes[count - 1], n_max);
        prop_assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn empirical_survival_is_a_decreasing_probability(values in positive_data()) {
        let data = SampleSet::from_data(values, "prop");
        let pairs = empirical_survival(&data).unwrap();
        prop_assert!(pairs.windows(2).all(|w| w[0].0 < w[1].0), "values not ascending");
        prop_assert!(pairs.windows(2).all(|w| w[0].1 > w[1].1), "log survival not decreasing");
        // Log survival of a point strictly inside the sample is in (-inf, 0).
        for (_, log_s) in &pairs {
            prop_assert!(log_s.is_finite() && *log_s < 0.0);
        }
    }
}
