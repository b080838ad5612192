//! Least-squares Pareto fit on the empirical survival function.

use super::{sorted_logs, FitParams, FitResult};
use crate::distributions::SampleSet;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sum::{kbn_mean, kbn_sum};

/// Fit a Pareto tail by ordinary least squares of log empirical survival on
/// log value over the order statistics.
///
/// The survival at `X_(i)` is taken as `(n - i)/n`, so the top order
/// statistic (zero survival) is dropped. The slope of the fitted line is
/// `-alpha` and the intercept is `alpha * log(x_min)`.
pub fn fit_pareto_ls<F: Real>(data: &SampleSet<F>) -> Result<FitResult<F>> {
    let n = data.len();
    if n < 3 {
        return Err(Error::InvalidData("need at least 3 observations".to_string()));
    }
    let logs = sorted_logs(&data.values)?;
    let distinct = 1 + logs.windows(2).filter(|w| w[1] > w[0]).count();
    if distinct < 3 {
        return Err(Error::Domain(format!(
            "Pareto least squares needs at least 3 distinct values, found {distinct}"
        )));
    }
    let nf = F::of_usize(n);
    let xs = &logs[..n - 1];
    let ys: Vec<F> = (1..n).map(|i| (F::of_usize(n - i) / nf).ln()).collect();

    let x_bar = kbn_mean(xs);
    let y_bar = kbn_mean(&ys);
    let sxx = kbn_sum(xs.iter().map(|&x| (x - x_bar) * (x - x_bar)));
    let sxy = kbn_sum(xs.iter().zip(&ys).map(|(&x, &y)| (x - x_bar) * (y - y_bar)));
    // At least two distinct x remain after dropping only the top point, and
    // y is strictly decreasing, so sxx > 0 and the slope is negative.
    let slope = sxy / sxx;
    let intercept = y_bar - slope * x_bar;
    let sse = kbn_sum(xs.iter().zip(&ys).map(|(&x, &y)| {
        let r = y - (intercept + slope * x);
        r * r
    }));

    let alpha = -slope;
    let x_min = (intercept / alpha).exp();
    Ok(FitResult {
        params: FitParams::ParetoLs { x_min, alpha },
        implied_tail_index: Some(alpha),
        loglik_or_sse: sse,
    })
}
