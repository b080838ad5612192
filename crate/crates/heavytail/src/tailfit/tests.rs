use approx::assert_relative_eq;
use rand_distr::Distribution;

use super::*;
use crate::distributions::sample_pareto;
use crate::error::Error;
use crate::rng::{substream, StreamClass};
use crate::special::ln_gamma;

fn set(values: Vec<f64>) -> SampleSet<f64> {
    SampleSet::from_data(values, "test")
}

#[test]
fn hill_hand_example() {
    // Logs 0, 1, 2, 3 at k = 3: mean excess (3 + 2 + 1)/3 = 2, estimate 1/2.
    let data = set(vec![1.0, 1f64.exp(), 2f64.exp(), 3f64.exp()]);
    let est = hill(&data, 3).unwrap();
    assert!((est - 0.5).abs() < 1e-12, "estimate {est}");
}

#[test]
fn hill_validates_inputs() {
    let data = set(vec![1.0, 2.0, 3.0, 4.0]);
    assert!(matches!(hill(&data, 0), Err(Error::InvalidParameter { .. })));
    assert!(matches!(hill(&data, 4), Err(Error::InvalidParameter { .. })));
    assert!(hill(&set(vec![2.0]), 1).is_err());
    assert!(matches!(hill(&set(vec![1.0, 0.0, 2.0]), 1), Err(Error::InvalidData(_))));
    assert!(matches!(hill(&set(vec![3.0; 6]), 2), Err(Error::Undefined(_))));
}

#[test]
fn hill_is_scale_invariant() {
    let base = set(vec![1.3, 2.7, 3.14, 8.0, 20.0, 120.0]);
    let scaled = set(base.values.iter().map(|v| v * 5.0e6).collect());
    for k in 1..=5 {
        let a = hill(&base, k).unwrap();
        let b = hill(&scaled, k).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-12);
    }
}

#[test]
fn hill_recovers_pareto_tail_index() {
    // On exact Pareto the estimator is unbiased with sd about alpha/sqrt(k).
    let n = 100_000;
    let k = (n as f64).powf(0.8).ceil() as usize;
    for (i, alpha) in [0.4f64, 0.7].into_iter().enumerate() {
        let data = sample_pareto(1.0, alpha, n, 777, i as u64).unwrap();
        let est = hill(&data, k).unwrap();
        assert!((est - alpha).abs() < 0.03, "alpha {alpha}: estimate {est}");
    }
}

#[test]
fn hill_inverse_spread_matches_exponential_theory() {
    // 1/estimate is a mean of k i.i.d. exponentials with rate alpha, so its
    // sd across replicates should be close to (1/alpha)/sqrt(k).
    let (alpha, n, k, reps) = (0.5f64, 10_000, 100, 200);
    let inv: Vec<f64> = (0..reps)
        .map(|r| 1.0 / hill(&sample_pareto(1.0, alpha, n, 2024, r).unwrap(), k).unwrap())
        .collect();
    let mean = inv.iter().sum::<f64>() / reps as f64;
    let var = inv.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (reps - 1) as f64;
    let sd = var.sqrt();
    let theory = (1.0 / alpha) / (k as f64).sqrt();
    assert!((sd - theory).abs() / theory < 0.25, "sd {sd} vs theory {theory}");
}

#[test]
fn alt_hill_k_rule_and_clamp() {
    let data = sample_pareto(1.0, 0.5, 100, 5, 0).unwrap();
    let curve = alt_hill_curve(&data, &[0.5, 1.0], 0, 0.95, 1).unwrap();
    assert_eq!(curve.ks, vec![10, 99]);
    assert_eq!(curve.n, 100);
    assert!(curve.ci_low.iter().all(Option::is_none));
}

#[test]
fn alt_hill_constant_curve_smooths_to_itself() {
    // Build logs backwards so the mean log-excess is the same at every k;
    // the Hill curve is then flat and smoothing must reproduce it.
    let (n, c) = (12usize, 0.8f64);
    let mut logs = vec![0.0; n];
    logs[n - 1] = 5.0;
    let mut sum = logs[n - 1];
    for j in (0..n - 1).rev() {
        logs[j] = sum / (n - 1 - j) as f64 - c;
        sum += logs[j];
    }
    let data = set(logs.iter().map(|l| l.exp()).collect());
    let curve = alt_hill_curve(&data, &[0.2, 0.5, 0.9], 0, 0.95, 1).unwrap();
    for (est, smooth) in curve.estimates.iter().zip(&curve.smoothed) {
        assert_relative_eq!(est.unwrap(), 1.0 / c, max_relative = 1e-10);
        assert_relative_eq!(smooth.unwrap(), 1.0 / c, max_relative = 1e-10);
    }
}

#[test]
fn alt_hill_flags_degenerate_points_without_failing() {
    // Top two values tied: k = 2 has zero mean log-excess.
    let data = set(vec![1.0, 1.0, 2.0, 2.0, 2.0]);
    let curve = alt_hill_curve(&data, &[0.4, 0.5], 0, 0.95, 1).unwrap();
    assert_eq!(curve.ks, vec![2, 3]);
    assert!(curve.estimates[0].is_none());
    assert!(curve.estimates[1].is_some());
    // The smoothing window at the degenerate point still averages the
    // non-degenerate neighbors.
    assert!(curve.smoothed[0].is_some());
}

#[test]
fn alt_hill_bootstrap_bands_are_ordered_and_reproducible() {
    let data = sample_pareto(1.0, 0.5, 2_000, 9, 0).unwrap();
    let a = alt_hill_curve(&data, &[0.6, 0.7, 0.8], 200, 0.95, 31).unwrap();
    let b = alt_hill_curve(&data, &[0.6, 0.7, 0.8], 200, 0.95, 31).unwrap();
    for i in 0..3 {
        let (lo, hi) = (a.ci_low[i].unwrap(), a.ci_high[i].unwrap());
        assert!(lo > 0.0 && lo < hi, "band ({lo}, {hi})");
        assert_eq!(lo, b.ci_low[i].unwrap());
        assert_eq!(hi, b.ci_high[i].unwrap());
        // The point estimate should sit inside a 95% percentile band.
        let est = a.estimates[i].unwrap();
        assert!(lo < est && est < hi, "estimate {est} outside ({lo}, {hi})");
    }
    let c = alt_hill_curve(&data, &[0.6, 0.7, 0.8], 200, 0.95, 32).unwrap();
    assert_ne!(a.ci_low[0].unwrap(), c.ci_low[0].unwrap());
}

#[test]
fn alt_hill_validates_grid_and_level() {
    let data = sample_pareto(1.0, 0.5, 100, 5, 0).unwrap();
    assert!(alt_hill_curve(&data, &[], 0, 0.95, 1).is_err());
    assert!(alt_hill_curve(&data, &[0.7, 0.5], 0, 0.95, 1).is_err());
    assert!(alt_hill_curve(&data, &[0.0, 0.5], 0, 0.95, 1).is_err());
    assert!(alt_hill_curve(&data, &[0.5, 1.1], 0, 0.95, 1).is_err());
    assert!(alt_hill_curve(&data, &[0.5], 10, 1.0, 1).is_err());
    assert!(alt_hill_curve(&data, &[0.5], 0, 1.0, 1).is_ok()); // level unused without bootstrap
}

#[test]
fn pareto_ls_exact_line() {
    // Values chosen so (log x, log survival) lie exactly on a slope -1/2
    // line through the origin.
    let n = 50usize;
    let values: Vec<f64> = (1..=n).map(|i| ((n - i) as f64 / n as f64).powi(-2)).collect();
    // The top value would have infinite log; i = n gives (n-n)/n = 0, so
    // replace it with a duplicate of the largest finite point.
    let mut values = values;
    values[n - 1] = values[n - 2];
    let fit = fit_pareto_ls(&set(values)).unwrap();
    let (x_min, alpha) = match fit.params {
        FitParams::ParetoLs { x_min, alpha } => (x_min, alpha),
        ref other => panic!("unexpected family {other:?}"),
    };
    assert_relative_eq!(alpha, 0.5, max_relative = 1e-10);
    assert!(x_min > 0.999 && x_min < 1.001, "x_min {x_min}");
    assert!(fit.loglik_or_sse < 1e-20, "sse {}", fit.loglik_or_sse);
    assert_eq!(fit.implied_tail_index, Some(alpha));
}

#[test]
fn pareto_ls_recovers_pareto() {
    let data = sample_pareto::<f64>(1.0, 0.5, 100_000, 12, 0).unwrap();
    let fit = fit_pareto_ls(&data).unwrap();
    let alpha = match fit.params {
        FitParams::ParetoLs { alpha, .. } => alpha,
        ref other => panic!("unexpected family {other:?}"),
    };
    assert!((alpha - 0.5).abs() < 0.02, "alpha {alpha}");
    let hill_est = hill(&data, (100_000f64.powf(0.8)).ceil() as usize).unwrap();
    assert!((alpha - hill_est).abs() < 0.05, "LS {alpha} vs Hill {hill_est}");
}

#[test]
fn pareto_ls_needs_three_distinct_values() {
    assert!(matches!(fit_pareto_ls(&set(vec![1.0, 1.0, 2.0, 2.0])), Err(Error::Domain(_))));
    assert!(fit_pareto_ls(&set(vec![1.0, 2.0])).is_err());
}

#[test]
fn gpd_exponential_excesses_give_near_zero_shape() {
    // Exponential data are the xi = 0 member of the family.
    let mut rng = substream(99, StreamClass::Sample, 0);
    let scale = 2.0f64;
    let values: Vec<f64> = (0..100_000)
        .map(|_| {
            let e: f64 = rand_distr::Exp1.sample(&mut rng);
            scale * e
        })
        .collect();
    let fit = fit_gpd_mle(&set(values), 0.0).unwrap();
    match fit.params {
        FitParams::Gpd { threshold, shape, scale: sigma } => {
            assert_eq!(threshold, 0.0);
            assert!(shape.abs() <= 0.02, "shape {shape}");
            assert_relative_eq!(sigma, scale, max_relative = 0.03);
        }
        ref other => panic!("unexpected family {other:?}"),
    }
}

#[test]
fn gpd_recovers_heavy_shape_and_tail_index() {
    // Inverse-CDF draws from a GPD with xi = 2, sigma = 1.
    let mut rng = substream(7, StreamClass::Sample, 0);
    let (xi, sigma) = (2.0f64, 1.0f64);
    let values: Vec<f64> = (0..20_000)
        .map(|_| {
            let u: f64 = rand::RngExt::random(&mut rng);
            sigma * ((1.0 - u).powf(-xi) - 1.0) / xi
        })
        .collect();
    let fit = fit_gpd_mle(&set(values), 0.0).unwrap();
    match fit.params {
        FitParams::Gpd { shape, .. } => assert!((shape - xi).abs() < 0.1, "shape {shape}"),
        ref other => panic!("unexpected family {other:?}"),
    }
    let implied = fit.implied_tail_index.unwrap();
    assert!((implied - 0.5).abs() < 0.03, "implied tail index {implied}");
}

#[test]
fn gpd_optimum_beats_surrounding_grid() {
    let data = sample_pareto(1.0, 0.8, 2_000, 15, 0).unwrap();
    let threshold = 2.0;
    let fit = fit_gpd_mle(&data, threshold).unwrap();
    let (shape, scale) = match fit.params {
        FitParams::Gpd { shape, scale, .. } => (shape, scale),
        ref other => panic!("unexpected family {other:?}"),
    };
    let excesses: Vec<f64> = data.values.iter().filter(|&&x| x > threshold).map(|x| x - threshold).collect();
    let slack = 1e-6 * fit.loglik_or_sse.abs().max(1.0);
    for i in 0..50 {
        for j in 0..50 {
            let xi = shape - 0.2 + 0.4 * i as f64 / 49.0;
            let sigma = scale * (-0.5 + 1.0 * j as f64 / 49.0).exp();
            let ll = gpd_loglik(&excesses, xi, sigma);
            assert!(
                ll <= fit.loglik_or_sse + slack,
                "grid point (xi {xi}, sigma {sigma}) has loglik {ll} above optimum {}",
                fit.loglik_or_sse
            );
        }
    }
}

#[test]
fn gpd_rejects_thin_exceedance_sets() {
    let data = set((1..=100).map(|i| i as f64).collect());
    assert!(matches!(fit_gpd_mle(&data, 1e9), Err(Error::Domain(_))));
    assert!(matches!(fit_gpd_mle(&data, 71.5), Err(Error::Domain(_)))); // 29 exceedances
    // Just enough exceedances on genuinely heavy-tailed data.
    let heavy = sample_pareto(1.0, 0.5, 60, 3, 0).unwrap();
    let sorted = {
        let mut v = heavy.values.clone();
        v.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        v
    };
    let threshold = sorted[60 - 31]; // strict exceedance keeps exactly 30
    assert!(fit_gpd_mle(&heavy, threshold).is_ok());
}

#[test]
fn negbin_recovers_simulated_parameters() {
    // Negative binomial via the Poisson-Gamma mixture.
    let (r, m, n) = (2.0f64, 5.0f64, 100_000usize);
    let mut rng = substream(55, StreamClass::Sample, 0);
    let gamma = rand_distr::Gamma::new(r, m / r).unwrap();
    let values: Vec<f64> = (0..n)
        .map(|_| {
            let lambda = gamma.sample(&mut rng);
            rand_distr::Poisson::new(lambda.max(1e-12)).unwrap().sample(&mut rng)
        })
        .collect();
    let fit = fit_negbinomial(&set(values)).unwrap();
    match fit.params {
        FitParams::NegBinomial { size, mean } => {
            assert!((size - r).abs() < 0.1, "size {size}");
            assert!((mean - m).abs() < 0.05, "mean {mean}");
        }
        ref other => panic!("unexpected family {other:?}"),
    }
    assert!(fit.implied_tail_index.is_none());
}

#[test]
fn negbin_fit_is_a_local_likelihood_maximum() {
    let mut rng = substream(56, StreamClass::Sample, 0);
    let gamma = rand_distr::Gamma::<f64>::new(0.5, 20.0).unwrap();
    let values: Vec<f64> = (0..20_000)
        .map(|_| {
            let lambda = gamma.sample(&mut rng);
            rand_distr::Poisson::new(lambda.max(1e-12)).unwrap().sample(&mut rng)
        })
        .collect();
    let fit = fit_negbinomial(&set(values.clone())).unwrap();
    let (size, mean) = match fit.params {
        FitParams::NegBinomial { size, mean } => (size, mean),
        ref other => panic!("unexpected family {other:?}"),
    };
    let loglik = |r: f64, m: f64| -> f64 {
        values
            .iter()
            .map(|&x| {
                ln_gamma(x + r) - ln_gamma(x + 1.0) - ln_gamma(r)
                    + r * (r / (r + m)).ln()
                    + x * (m / (r + m)).ln()
            })
            .sum()
    };
    let at_fit = loglik(size, mean);
    assert_relative_eq!(at_fit, fit.loglik_or_sse, max_relative = 1e-9);
    for (dr, dm) in [(1.02, 1.0), (0.98, 1.0), (1.0, 1.01), (1.0, 0.99)] {
        assert!(loglik(size * dr, mean * dm) < at_fit, "perturbation ({dr}, {dm}) not worse");
    }
}

#[test]
fn negbin_poisson_like_data_give_large_size() {
    // Mild overdispersion: variance m + m^2/r with r = 50 is 5.5 at m = 5.
    let (r, m) = (50.0f64, 5.0f64);
    let mut rng = substream(57, StreamClass::Sample, 0);
    let gamma = rand_distr::Gamma::new(r, m / r).unwrap();
    let values: Vec<f64> = (0..50_000)
        .map(|_| {
            let lambda = gamma.sample(&mut rng);
            rand_distr::Poisson::new(lambda.max(1e-12)).unwrap().sample(&mut rng)
        })
        .collect();
    let fit = fit_negbinomial(&set(values)).unwrap();
    match fit.params {
        FitParams::NegBinomial { size, mean } => {
            assert!(size > 20.0, "size {size}");
            assert!((mean - m).abs() < 0.06, "mean {mean}");
        }
        ref other => panic!("unexpected family {other:?}"),
    }
}

#[test]
fn negbin_rejects_bad_inputs() {
    assert!(matches!(fit_negbinomial(&set(vec![5.0; 10])), Err(Error::Domain(_))));
    assert!(matches!(fit_negbinomial(&set(vec![1.0, 2.0, 3.0])), Err(Error::Domain(_))));
    assert!(matches!(fit_negbinomial(&set(vec![1.5, 2.0, 3.0, 100.0])), Err(Error::InvalidData(_))));
    assert!(matches!(fit_negbinomial(&set(vec![-1.0, 2.0, 3.0, 100.0])), Err(Error::InvalidData(_))));
    assert!(matches!(fit_negbinomial(&set(vec![0.0; 8])), Err(Error::InvalidData(_))));
}

#[test]
fn empirical_survival_hand_examples() {
    let pts = empirical_survival(&set(vec![1.0, 2.0, 3.0])).unwrap();
    assert_eq!(pts.len(), 2);
    assert_eq!(pts[0].0, 1.0);
    assert_relative_eq!(pts[0].1, (2.0f64 / 3.0).ln());
    assert_eq!(pts[1].0, 2.0);
    assert_relative_eq!(pts[1].1, (1.0f64 / 3.0).ln());

    // Ties collapse to one step; the maximum is always excluded.
    let tied = empirical_survival(&set(vec![1.0, 1.0, 2.0])).unwrap();
    assert_eq!(tied.len(), 1);
    assert_relative_eq!(tied[0].1, (1.0f64 / 3.0).ln());

    let shuffled = empirical_survival(&set(vec![3.0, 1.0, 2.0])).unwrap();
    assert_eq!(shuffled, pts);
}

#[test]
fn empirical_survival_tracks_pareto_cdf() {
    let alpha = 0.5f64;
    let data = sample_pareto(1.0, alpha, 10_000, 21, 0).unwrap();
    let d = ks_one_sample(&data.values, |x: f64| 1.0 - x.powf(-alpha)).unwrap();
    assert!(d < 1.36 / (10_000f64).sqrt(), "KS statistic {d}");
}

#[test]
fn ks_two_sample_basics() {
    let a: Vec<f64> = (1..=100).map(|i| i as f64).collect();
    assert_eq!(ks_two_sample(&a, &a).unwrap(), 0.0);
    let b: Vec<f64> = a.iter().map(|v| v + 1000.0).collect();
    assert_relative_eq!(ks_two_sample(&a, &b).unwrap(), 1.0);
    assert!(ks_two_sample(&a, &[]).is_err());
}
