//! Tail-index estimation and parametric tail fits.
//!
//! The estimators here work on the upper order statistics of a positive
//! sample: the Hill estimator and its smoothed alternative-Hill curve with
//! bootstrap bands, a least-squares Pareto fit on the empirical survival
//! function, a generalized Pareto fit over a threshold by profile maximum
//! likelihood, and a negative binomial fit for count data. All of them
//! return plain structs; nothing here draws randomness except the bootstrap,
//! which takes an explicit seed.

mod gpd;
mod hill;
mod ls;
mod negbin;

use serde::Serialize;

use crate::distributions::SampleSet;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sum::kbn_sum;

pub use gpd::{fit_gpd_mle, gpd_loglik};
pub use hill::{alt_hill_curve, hill};
pub use ls::fit_pareto_ls;
pub use negbin::fit_negbinomial;

/// Alternative Hill plot: Hill estimates indexed by the exponent `theta`
/// through `k = ceil(n^theta)` upper order statistics, with a smoothed
/// track and optional bootstrap confidence bands.
///
/// Degenerate points (zero mean log-excess, which happens when all top
/// values are tied) are `None` rather than errors, so one flat stretch of a
/// discrete sample does not kill the whole curve.
#[derive(Debug, Clone, Serialize)]
pub struct HillCurve<F> {
    pub n: usize,
    pub thetas: Vec<F>,
    /// `k(theta) = ceil(n^theta)` clamped to `[1, n - 1]`.
    pub ks: Vec<usize>,
    pub estimates: Vec<Option<F>>,
    /// Average of the estimates at k(theta), k(theta)+1, ...,
    /// min(k(theta) + ceil(n^theta) - 1, n - 1).
    pub smoothed: Vec<Option<F>>,
    pub ci_low: Vec<Option<F>>,
    pub ci_high: Vec<Option<F>>,
    /// Confidence level of the bootstrap bands, e.g. 0.99.
    pub level: F,
}

/// Parameters of a fitted tail family, tagged by family name.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FitParams<F> {
    ParetoLs { x_min: F, alpha: F },
    Gpd { threshold: F, shape: F, scale: F },
    NegBinomial { size: F, mean: F },
}

/// Result of a parametric fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult<F> {
    pub params: FitParams<F>,
    /// Tail index the fit implies: `alpha` for the Pareto fit, `1/shape`
    /// for a generalized Pareto fit with positive shape, absent otherwise.
    pub implied_tail_index: Option<F>,
    /// Log-likelihood for the likelihood fits, sum of squared residuals
    /// for the least-squares fit.
    pub loglik_or_sse: F,
}

/// Points `(value, log survival)` of the empirical survival function at the
/// distinct order statistics. The largest value has empirical survival zero
/// and is excluded, so every returned log is finite.
pub fn empirical_survival<F: Real>(data: &SampleSet<F>) -> Result<Vec<(F, F)>> {
    let n = data.len();
    if n == 0 {
        return Err(Error::InvalidData("empty sample".to_string()));
    }
    ensure_finite(&data.values)?;
    let mut sorted = data.values.clone();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let nf = F::of_usize(n);
    let mut out = Vec::new();
    for i in 0..n {
        // Emit each distinct value once, with survival taken past its last
        // occurrence so ties collapse to a single step.
        if i + 1 < n && sorted[i + 1] == sorted[i] {
            continue;
        }
        let above = n - (i + 1);
        if above == 0 {
            break;
        }
        out.push((sorted[i], (F::of_usize(above) / nf).ln()));
    }
    Ok(out)
}

/// Kolmogorov-Smirnov statistic of a sample against a reference CDF.
pub fn ks_one_sample<F: Real>(data: &[F], cdf: impl Fn(F) -> F) -> Result<F> {
    if data.is_empty() {
        return Err(Error::InvalidData("empty sample".to_string()));
    }
    ensure_finite(data)?;
    let mut sorted = data.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let n = F::of_usize(sorted.len());
    let mut d = F::zero();
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let hi = F::of_usize(i + 1) / n - f;
        let lo = f - F::of_usize(i) / n;
        d = d.max(hi.abs()).max(lo.abs());
    }
    Ok(d)
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_two_sample<F: Real>(a: &[F], b: &[F]) -> Result<F> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidData("empty sample".to_string()));
    }
    ensure_finite(a)?;
    ensure_finite(b)?;
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    sa.sort_unstable_by(|x, y| x.partial_cmp(y).expect("finite values"));
    sb.sort_unstable_by(|x, y| x.partial_cmp(y).expect("finite values"));
    let (na, nb) = (F::of_usize(sa.len()), F::of_usize(sb.len()));
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = F::zero();
    while i < sa.len() && j < sb.len() {
        let t = sa[i].min(sb[j]);
        while i < sa.len() && sa[i] <= t {
            i += 1;
        }
        while j < sb.len() && sb[j] <= t {
            j += 1;
        }
        let gap = (F::of_usize(i) / na - F::of_usize(j) / nb).abs();
        d = d.max(gap);
    }
    Ok(d)
}

fn ensure_finite<F: Real>(values: &[F]) -> Result<()> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidData("sample contains non-finite values".to_string()));
    }
    Ok(())
}

/// Validate positivity and return the sorted natural logs of the sample.
fn sorted_logs<F: Real>(values: &[F]) -> Result<Vec<F>> {
    if values.iter().any(|v| !(v.is_finite() && *v > F::zero())) {
        return Err(Error::InvalidData(
            "log-based tail estimation needs strictly positive, finite observations".to_string(),
        ));
    }
    let mut logs: Vec<F> = values.iter().map(|v| v.ln()).collect();
    logs.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite logs"));
    Ok(logs)
}

/// Sample mean and unbiased variance in one pass.
fn mean_and_variance<F: Real>(values: &[F]) -> (F, F) {
    let n = F::of_usize(values.len());
    let mean = kbn_sum(values.iter().copied()) / n;
    let var = kbn_sum(values.iter().map(|&v| (v - mean) * (v - mean))) / (n - F::one());
    (mean, var)
}

#[cfg(test)]
mod tests;
