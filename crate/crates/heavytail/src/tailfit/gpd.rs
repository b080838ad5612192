//! Generalized Pareto fit over a threshold by profile maximum likelihood.

use super::{FitParams, FitResult};
use crate::distributions::SampleSet;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sum::kbn_mean;

const MIN_EXCEEDANCES: usize = 30;
/// Shapes closer to zero than this use the exponential limit of the
/// likelihood.
const XI_EPS: f64 = 1e-8;
/// Search range for the shape. Below -1 the likelihood is unbounded, so the
/// lower end stays well inside (-1, 0); the upper end covers tail indices
/// down to 0.1.
const XI_LO: f64 = -0.9;
const XI_HI: f64 = 10.0;

/// Generalized Pareto log-likelihood of positive excesses at shape `xi` and
/// scale `sigma`. Returns `-inf` outside the support (`sigma <= 0`, or some
/// excess at or past `-sigma/xi` when `xi < 0`).
pub fn gpd_loglik<F: Real>(excesses: &[F], xi: F, sigma: F) -> F {
    let m = F::of_usize(excesses.len());
    if !(sigma > F::zero()) {
        return F::neg_infinity();
    }
    if xi.abs().as_f64() < XI_EPS {
        let sum: F = excesses.iter().map(|&y| y / sigma).sum();
        return -m * sigma.ln() - sum;
    }
    let mut sum_log = F::zero();
    for &y in excesses {
        let t = F::one() + xi * y / sigma;
        if !(t > F::zero()) {
            return F::neg_infinity();
        }
        sum_log += t.ln();
    }
    -m * sigma.ln() - (F::one() + xi.recip()) * sum_log
}

/// Fit a generalized Pareto distribution to the excesses of `data` above
/// `threshold` (strict exceedances) by maximum likelihood.
///
/// The scale is profiled out: for each candidate shape `xi` the likelihood
/// is maximized over `log sigma` (it is strictly concave there, solved by a
/// bracketed Newton step on the derivative), and the resulting profile is
/// searched over `xi` with a coarse grid followed by golden-section
/// refinement. A shape estimate on the search boundary ([-0.9, 10]) is
/// reported as non-convergence rather than a fit.
///
/// When the fitted shape is positive the implied tail index `1/xi` is
/// reported; the excess distribution then has survival exponent `1/xi`.
pub fn fit_gpd_mle<F: Real>(data: &SampleSet<F>, threshold: F) -> Result<FitResult<F>> {
    if !threshold.is_finite() {
        return Err(Error::invalid_parameter("threshold", "must be finite".to_string()));
    }
    if data.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidData("sample contains non-finite values".to_string()));
    }
    let excesses: Vec<F> = data.values.iter().filter(|&&x| x > threshold).map(|&x| x - threshold).collect();
    let m = excesses.len();
    if m < MIN_EXCEEDANCES {
        return Err(Error::Domain(format!(
            "generalized Pareto fit needs at least {MIN_EXCEEDANCES} exceedances above the threshold, found {m}"
        )));
    }
    let y_max = excesses.iter().copied().fold(F::zero(), F::max);
    let y_mean = kbn_mean(&excesses);

    let profile = |xi: F| -> (F, F) {
        if xi.abs().as_f64() < XI_EPS {
            // Exponential limit: the scale MLE is the mean excess.
            return (y_mean, -F::of_usize(m) * (y_mean.ln() + F::one()));
        }
        // Bracket log sigma; for negative shapes the support needs
        // sigma > -xi * y_max.
        let mut t_lo = y_mean.min(y_max).ln() - F::of(12.0);
        let t_hi = y_mean.max(y_max).ln() + F::of(12.0);
        if xi < F::zero() {
            t_lo = ((-xi) * y_max).ln() + F::of(1e-9);
        }
        let sigma = best_sigma(&excesses, xi, t_lo, t_hi).exp();
        (sigma, gpd_loglik(&excesses, xi, sigma))
    };

    // Outer search over the shape: coarse grid (zero included so the
    // exponential branch is always a candidate), then golden refinement
    // between the best point's neighbors.
    let n_grid = 25usize;
    let mut grid: Vec<F> = (0..n_grid)
        .map(|i| F::of(XI_LO + (XI_HI - XI_LO) * i as f64 / (n_grid - 1) as f64))
        .collect();
    grid.push(F::zero());
    grid.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    let scores: Vec<F> = grid.iter().map(|&xi| profile(xi).1).collect();
    let best = scores
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).expect("comparable log-likelihoods"))
        .map(|(i, _)| i)
        .expect("nonempty grid");
    if best == 0 || best == grid.len() - 1 {
        return Err(Error::NoConvergence {
            iterations: grid.len(),
            context: format!(
                "profile likelihood maximized at the shape search boundary xi = {}; \
                 the excess distribution is outside the supported shape range",
                grid[best].as_f64()
            ),
        });
    }
    let (xi_hat, _) = golden_max(|xi| profile(xi).1, grid[best - 1], grid[best + 1], 48);
    let (sigma_hat, loglik) = profile(xi_hat);

    let implied = (xi_hat.as_f64() > XI_EPS).then(|| xi_hat.recip());
    Ok(FitResult {
        params: FitParams::Gpd { threshold, shape: xi_hat, scale: sigma_hat },
        implied_tail_index: implied,
        loglik_or_sse: loglik,
    })
}

/// Maximize `t -> loglik(xi, e^t)` over `[t_lo, t_hi]` for fixed `xi != 0`.
///
/// With `u_i = xi y_i e^{-t}`, the derivative is
/// `g(t) = -m + (1 + 1/xi) sum u_i/(1 + u_i)` and
/// `g'(t) = -(1 + 1/xi) sum u_i/(1 + u_i)^2 < 0` on the whole bracket, so
/// `g` is strictly decreasing with `g(t_lo) > 0 > g(t_hi)` and a bracketed
/// Newton iteration on `g` converges to the unique maximizer.
fn best_sigma<F: Real>(excesses: &[F], xi: F, t_lo: F, t_hi: F) -> F {
    let m = F::of_usize(excesses.len());
    let coef = F::one() + xi.recip();
    let g_and_slope = |t: F| -> (F, F) {
        let inv_sigma = (-t).exp();
        let mut s1 = F::zero();
        let mut s2 = F::zero();
        for &y in excesses {
            let u = xi * y * inv_sigma;
            let one_plus = F::one() + u;
            s1 += u / one_plus;
            s2 += u / (one_plus * one_plus);
        }
        (-m + coef * s1, -coef * s2)
    };
    let (mut a, mut b) = (t_lo, t_hi);
    let mut t = (a + b) / F::of(2.0);
    for _ in 0..80 {
        let (g, slope) = g_and_slope(t);
        if g.abs() <= F::of(1e-10) * m || (b - a) <= F::of(1e-13) {
            break;
        }
        if g > F::zero() {
            a = t;
        } else {
            b = t;
        }
        let newton = t - g / slope;
        t = if slope < F::zero() && newton > a && newton < b { newton } else { (a + b) / F::of(2.0) };
    }
    t
}

/// Golden-section maximization of a unimodal function on `[lo, hi]`.
fn golden_max<F: Real>(mut f: impl FnMut(F) -> F, mut lo: F, mut hi: F, iters: usize) -> (F, F) {
    let inv_phi = F::of(0.618_033_988_749_894_9);
    let mut x1 = hi - (hi - lo) * inv_phi;
    let mut x2 = lo + (hi - lo) * inv_phi;
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - (hi - lo) * inv_phi;
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + (hi - lo) * inv_phi;
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}
