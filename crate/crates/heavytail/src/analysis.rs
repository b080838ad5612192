//! The mean-variance scaling pipeline: log-spaced size grids, subsampled
//! log-log moment points, an OLS fit with t-based intervals, and a
//! convergence diagnostic of observed log-moment ratios against their
//! theoretical limits.

use rand::seq::index;
use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::{sample_process, ProcessSpec, SampleSet};
use crate::error::{Error, Result};
use crate::moments::{
    implied_alpha, summarize, taylor_ratio, theoretical_limit, LimitKind, MomentRequest,
};
use crate::rng::{substream, StreamClass};
use crate::scalar::Real;
use crate::special::student_t_quantile;
use crate::sum::kbn_sum;

/// `count` sizes spaced uniformly in log10 between `n_min` and `n_max`,
/// rounded to integers. Endpoints are exact; duplicates introduced by
/// rounding are kept, since near-replicate points are harmless to the fit.
pub fn log_spaced_sizes(n_min: usize, n_max: usize, count: usize) -> Result<Vec<usize>> {
    if n_min < 1 {
        return Err(Error::invalid_parameter("n_min", "smallest size must be at least 1".to_string()));
    }
    if n_max < n_min {
        return Err(Error::invalid_parameter("n_max", format!("{n_max} is below n_min = {n_min}")));
    }
    if count < 2 {
        return Err(Error::invalid_parameter("count", format!("{count} sizes cannot span a range")));
    }
    let lo = (n_min as f64).log10();
    let step = ((n_max as f64).log10() - lo) / (count - 1) as f64;
    let mut sizes = Vec::with_capacity(count);
    sizes.push(n_min);
    for i in 1..count - 1 {
        sizes.push(10f64.powf(lo + step * i as f64).round() as usize);
    }
    sizes.push(n_max);
    Ok(sizes)
}

/// One subsample's coordinates on the log-log moment plot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TaylorPoint<F> {
    pub size: usize,
    pub log_mean: F,
    pub log_variance: F,
}

/// Output of [`taylor_points`]: plot coordinates plus a count of subsamples
/// dropped because their variance (hence log-variance) was degenerate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaylorPoints<F> {
    pub points: Vec<TaylorPoint<F>>,
    pub skipped_zero_variance: usize,
    pub log_base: F,
}

impl<F: Real> TaylorPoints<F> {
    /// Fit the scaling regression to these points.
    pub fn fit(&self) -> Result<TaylorRegression<F>> {
        ols_fit(&self.points, self.log_base)
    }
}

/// [`taylor_points_in_base`] with the plot-conventional base 10.
pub fn taylor_points<F: Real>(
    data: &SampleSet<F>,
    sizes: &[usize],
    seed: u64,
) -> Result<TaylorPoints<F>> {
    taylor_points_in_base(data, sizes, seed, F::of(10.0))
}

/// For each size, draw a uniform subsample without replacement (seeded
/// independently per size position) and emit its log mean and log variance
/// in the given base. A size equal to the full sample reproduces the
/// full-sample statistics exactly. Subsamples with zero variance carry no
/// log-log point and are only counted.
pub fn taylor_points_in_base<F: Real>(
    data: &SampleSet<F>,
    sizes: &[usize],
    seed: u64,
    log_base: F,
) -> Result<TaylorPoints<F>> {
    let n = data.len();
    if n == 0 {
        return Err(Error::InvalidData("empty sample".into()));
    }
    if sizes.is_empty() {
        return Err(Error::invalid_parameter("sizes", "empty size list".to_string()));
    }
    if !(log_base > F::one() && log_base.is_finite()) {
        return Err(Error::invalid_parameter("log_base", format!("{log_base} not above 1")));
    }
    if let Some(&bad) = sizes.iter().find(|&&s| s == 0 || s > n) {
        return Err(Error::invalid_parameter(
            "sizes",
            format!("size {bad} outside 1..={n} (the sample length)"),
        ));
    }

    let ln_base = log_base.ln();
    let request = MomentRequest::for_kind(LimitKind::Variance);
    let rows: Vec<Result<Option<TaylorPoint<F>>>> = sizes
        .par_iter()
        .enumerate()
        .map(|(i, &size)| {
            let mut rng = substream(seed, StreamClass::Subsample, i as u64);
            let picked = index::sample(&mut rng, n, size);
            let sub: Vec<F> = picked.iter().map(|j| data.values[j]).collect();
            let summary = summarize(&sub, &request)?;
            let mean = summary.mean();
            let variance = summary.variance()?;
            if !(variance > F::zero() && mean > F::zero()) {
                return Ok(None);
            }
            Ok(Some(TaylorPoint {
                size,
                log_mean: mean.ln() / ln_base,
                log_variance: variance.ln() / ln_base,
            }))
        })
        .collect();

    let mut points = Vec::with_capacity(sizes.len());
    let mut skipped = 0usize;
    for row in rows {
        match row? {
            Some(p) => points.push(p),
            None => skipped += 1,
        }
    }
    Ok(TaylorPoints { points, skipped_zero_variance: skipped, log_base })
}

/// Simple linear regression of log variance on log mean, with t-based
/// coefficient intervals and the tail index implied by the slope.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaylorRegression<F> {
    pub points: Vec<TaylorPoint<F>>,
    pub slope: F,
    pub intercept: F,
    pub slope_ci95: (F, F),
    pub slope_ci99: (F, F),
    pub intercept_ci95: (F, F),
    pub intercept_ci99: (F, F),
    pub r_squared: F,
    pub adj_r_squared: F,
    /// Tail index solving `slope = (2 - alpha)/(1 - alpha)`.
    pub implied_alpha: F,
    pub n_points: usize,
    pub log_base: F,
}

/// Ordinary least squares on the log-log points. Needs at least 3 points
/// (the intervals use n - 2 degrees of freedom) and non-collinear
/// abscissas. The slope, R2 values, and implied tail index do not depend
/// on the log base; the intercept and its intervals are in base units.
pub fn ols_fit<F: Real>(points: &[TaylorPoint<F>], log_base: F) -> Result<TaylorRegression<F>> {
    let n = points.len();
    if n < 3 {
        return Err(Error::Domain(format!(
            "{n} points cannot support confidence intervals; need at least 3 for positive degrees of freedom"
        )));
    }
    if points.iter().any(|p| !p.log_mean.is_finite() || !p.log_variance.is_finite()) {
        return Err(Error::InvalidData("log-log points must be finite".into()));
    }
    let nf = F::of_usize(n);
    let x_bar = kbn_sum(points.iter().map(|p| p.log_mean)) / nf;
    let y_bar = kbn_sum(points.iter().map(|p| p.log_variance)) / nf;
    let sxx = kbn_sum(points.iter().map(|p| (p.log_mean - x_bar) * (p.log_mean - x_bar)));
    let sxy = kbn_sum(points.iter().map(|p| (p.log_mean - x_bar) * (p.log_variance - y_bar)));
    let syy = kbn_sum(points.iter().map(|p| (p.log_variance - y_bar) * (p.log_variance - y_bar)));
    if !(sxx > F::zero()) {
        return Err(Error::Domain("log-mean values are collinear; the slope is unidentified".into()));
    }
    if !(syy > F::zero()) {
        return Err(Error::Domain("log-variance values are constant; R2 is undefined".into()));
    }

    let slope = sxy / sxx;
    let intercept = y_bar - slope * x_bar;
    let sse = (syy - slope * sxy).max(F::zero());
    let df = nf - F::of(2.0);
    let resid_var = sse / df;
    let se_slope = (resid_var / sxx).sqrt();
    let se_intercept = (resid_var * (nf.recip() + x_bar * x_bar / sxx)).sqrt();
    let t95 = F::of(student_t_quantile(0.975, (n - 2) as f64));
    let t99 = F::of(student_t_quantile(0.995, (n - 2) as f64));
    let band = |est: F, se: F, t: F| (est - t * se, est + t * se);

    let r_squared = F::one() - sse / syy;
    let adj_r_squared = F::one() - (F::one() - r_squared) * (nf - F::one()) / df;
    Ok(TaylorRegression {
        points: points.to_vec(),
        slope,
        intercept,
        slope_ci95: band(slope, se_slope, t95),
        slope_ci99: band(slope, se_slope, t99),
        intercept_ci95: band(intercept, se_intercept, t95),
        intercept_ci99: band(intercept, se_intercept, t99),
        r_squared,
        adj_r_squared,
        implied_alpha: implied_alpha(slope)?,
        n_points: n,
        log_base,
    })
}

/// Spread of the observed log-moment ratio around its limit at one size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeviationSummary<F> {
    pub n: usize,
    /// Median of `taylor_ratio - limit` over the replicates.
    pub median: F,
    /// Interquartile range of the deviations.
    pub iqr: F,
}

/// Report of [`convergence_diagnostic`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceDiagnostic<F> {
    pub kind: LimitKind<F>,
    pub limit: F,
    pub replicates: usize,
    pub points: Vec<DeviationSummary<F>>,
}

/// Simulate the process at each size and summarize how far the observed
/// log-moment ratio sits from its theoretical limit: per-size median and
/// IQR of the deviation over independent replicates.
pub fn convergence_diagnostic<F: Real>(
    spec: &ProcessSpec<F>,
    kind: LimitKind<F>,
    n_grid: &[usize],
    replicates: usize,
    seed: u64,
) -> Result<ConvergenceDiagnostic<F>> {
    spec.validate()?;
    if replicates == 0 {
        return Err(Error::invalid_parameter("replicates", "at least one replicate is required".to_string()));
    }
    if n_grid.is_empty() {
        return Err(Error::invalid_parameter("n_grid", "empty size grid".to_string()));
    }
    if n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid_parameter("n_grid", "sizes must be strictly increasing".to_string()));
    }
    if n_grid[0] < 2 {
        return Err(Error::invalid_parameter("n_grid", "sizes below 2 have no variance".to_string()));
    }
    let limit = theoretical_limit(kind, spec.nominal_alpha())?;
    let request = MomentRequest::for_kind(kind);

    let mut points = Vec::with_capacity(n_grid.len());
    for (i, &n) in n_grid.iter().enumerate() {
        // Replicate ids disjoint across sizes, so every sequence is fresh.
        let base = (i * replicates) as u64;
        let rows: Vec<Result<F>> = (0..replicates)
            .into_par_iter()
            .map(|r| {
                let sample = sample_process(spec, n, seed, base + r as u64)?;
                let summary = summarize(&sample.values, &request)?;
                Ok(taylor_ratio(&summary, kind)? - limit)
            })
            .collect();
        let mut deviations = Vec::with_capacity(replicates);
        for row in rows {
            deviations.push(row?);
        }
        deviations.sort_by(|a, b| a.partial_cmp(b).expect("deviations are finite"));
        let median = quantile_sorted(&deviations, F::of(0.5));
        let iqr = quantile_sorted(&deviations, F::of(0.75)) - quantile_sorted(&deviations, F::of(0.25));
        points.push(DeviationSummary { n, median, iqr });
    }
    Ok(ConvergenceDiagnostic { kind, limit, replicates, points })
}

/// Quantile by linear interpolation between order statistics.
fn quantile_sorted<F: Real>(sorted: &[F], q: F) -> F {
    let m = sorted.len();
    if m == 1 {
        return sorted[0];
    }
    let pos = q * F::of_usize(m - 1);
    let idx = pos.floor().as_f64() as usize;
    if idx + 1 >= m {
        return sorted[m - 1];
    }
    let frac = pos - pos.floor();
    sorted[idx] + frac * (sorted[idx + 1] - sorted[idx])
}
