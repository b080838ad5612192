//! Hill estimator and the alternative Hill plot.

use rand::RngExt;
use rayon::prelude::*;

use super::{sorted_logs, HillCurve};
use crate::distributions::SampleSet;
use crate::error::{Error, Result};
use crate::rng::{substream, StreamClass};
use crate::scalar::Real;
use crate::sum::{kbn_sum, KbnSum};

/// Hill tail-index estimate from the top `k` order statistics: the
/// reciprocal mean log-excess of `X_(n), ..., X_(n-k+1)` over `X_(n-k)`.
///
/// The estimate is scale invariant, and on exact Pareto data `1/alpha_hat`
/// is a mean of `k` i.i.d. exponentials, so its spread shrinks like
/// `1/sqrt(k)` while bias grows with `k` when the tail is only
/// asymptotically Pareto; the choice of `k` trades the two off.
pub fn hill<F: Real>(data: &SampleSet<F>, k: usize) -> Result<F> {
    let n = data.len();
    if n < 2 {
        return Err(Error::InvalidData("need at least 2 observations".to_string()));
    }
    if k < 1 || k > n - 1 {
        return Err(Error::invalid_parameter("k", format!("{k} outside 1..={}", n - 1)));
    }
    let logs = sorted_logs(&data.values)?;
    match hill_at(&logs, k) {
        Some(est) => Ok(est),
        None => Err(Error::Undefined(format!(
            "zero mean log-excess at k = {k}: the top {} values are all equal",
            k + 1
        ))),
    }
}

/// Hill estimate at one `k` from ascending sorted logs; `None` when the top
/// `k + 1` values are tied.
fn hill_at<F: Real>(logs: &[F], k: usize) -> Option<F> {
    let n = logs.len();
    let reference = logs[n - k - 1];
    let mean_excess = kbn_sum(logs[n - k..].iter().map(|&l| l - reference)) / F::of_usize(k);
    (mean_excess > F::zero()).then(|| mean_excess.recip())
}

/// Hill estimates for every `k` in `1..=k_max` via a running suffix sum;
/// index `k - 1` holds the estimate at `k`.
fn hill_all<F: Real>(logs: &[F], k_max: usize) -> Vec<Option<F>> {
    let n = logs.len();
    debug_assert!(k_max < n);
    let mut top = KbnSum::new();
    let mut out = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        top.add(logs[n - k]);
        let mean_excess = top.total() / F::of_usize(k) - logs[n - k - 1];
        out.push((mean_excess > F::zero()).then(|| mean_excess.recip()));
    }
    out
}

/// `ceil(n^theta)` with a guard for floating powers that land within a part
/// in 1e9 of an integer, so a grid point like `theta = 0.5` on `n = 100`
/// gives exactly 10.
fn ceil_pow(n: usize, theta: f64) -> usize {
    let v = (n as f64).powf(theta);
    let nearest = v.round();
    let k = if (v - nearest).abs() <= 1e-9 * nearest.max(1.0) { nearest } else { v.ceil() };
    k as usize
}

/// Alternative Hill plot over a `theta` grid with `k(theta) = ceil(n^theta)`
/// order statistics, smoothed by averaging the Hill estimates at the next
/// `ceil(n^theta)` values of `k`, with optional bootstrap percentile bands.
///
/// `bootstrap_b = 0` skips the bootstrap and leaves the bands empty. The
/// bootstrap resamples the data with replacement on per-replicate
/// substreams of `seed`, so the bands are reproducible and do not depend on
/// thread count.
pub fn alt_hill_curve<F: Real>(
    data: &SampleSet<F>,
    thetas: &[F],
    bootstrap_b: usize,
    level: F,
    seed: u64,
) -> Result<HillCurve<F>> {
    let n = data.len();
    if n < 3 {
        return Err(Error::InvalidData("need at least 3 observations".to_string()));
    }
    if thetas.is_empty() {
        return Err(Error::invalid_parameter("thetas", "empty grid".to_string()));
    }
    if thetas.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::invalid_parameter("thetas", "grid must be ascending".to_string()));
    }
    if thetas.iter().any(|&t| !(t > F::zero() && t <= F::one())) {
        return Err(Error::invalid_parameter("thetas", "grid values must lie in (0, 1]".to_string()));
    }
    if bootstrap_b > 0 && !(level > F::zero() && level < F::one()) {
        return Err(Error::invalid_parameter("level", format!("{level} not in (0, 1)")));
    }
    let logs = sorted_logs(&data.values)?;

    let raw_widths: Vec<usize> = thetas.iter().map(|&t| ceil_pow(n, t.as_f64())).collect();
    let ks: Vec<usize> = raw_widths.iter().map(|&w| w.clamp(1, n - 1)).collect();
    // Windows [k, k + width - 1] capped at n - 1 decide how far up the
    // whole-curve pass must go.
    let window_ends: Vec<usize> =
        ks.iter().zip(&raw_widths).map(|(&k, &w)| (k + w - 1).min(n - 1)).collect();
    let k_need = window_ends.iter().copied().max().expect("nonempty grid");

    let all = hill_all(&logs, k_need);
    let estimates: Vec<Option<F>> = ks.iter().map(|&k| all[k - 1]).collect();
    let smoothed: Vec<Option<F>> = ks
        .iter()
        .zip(&window_ends)
        .map(|(&k, &end)| {
            let window: Vec<F> = all[k - 1..end].iter().flatten().copied().collect();
            if window.is_empty() {
                None
            } else {
                Some(kbn_sum(window.iter().copied()) / F::of_usize(window.len()))
            }
        })
        .collect();

    let (ci_low, ci_high) = if bootstrap_b == 0 {
        (vec![None; ks.len()], vec![None; ks.len()])
    } else {
        let k_boot = *ks.iter().max().expect("nonempty grid");
        let rows: Vec<Vec<Option<F>>> = (0..bootstrap_b)
            .into_par_iter()
            .map(|b| {
                let mut rng = substream(seed, StreamClass::Bootstrap, b as u64);
                let mut resampled: Vec<F> = (0..n).map(|_| logs[rng.random_range(0..n)]).collect();
                resampled.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite logs"));
                let boot = hill_all(&resampled, k_boot);
                ks.iter().map(|&k| boot[k - 1]).collect()
            })
            .collect();
        let p_lo = (F::one() - level) / F::of(2.0);
        let p_hi = F::one() - p_lo;
        let mut lows = Vec::with_capacity(ks.len());
        let mut highs = Vec::with_capacity(ks.len());
        for i in 0..ks.len() {
            let mut draws: Vec<F> = rows.iter().filter_map(|row| row[i]).collect();
            if draws.len() < 2 {
                lows.push(None);
                highs.push(None);
                continue;
            }
            draws.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite estimates"));
            lows.push(Some(percentile(&draws, p_lo)));
            highs.push(Some(percentile(&draws, p_hi)));
        }
        (lows, highs)
    };

    Ok(HillCurve { n, thetas: thetas.to_vec(), ks, estimates, smoothed, ci_low, ci_high, level })
}

/// Empirical quantile with linear interpolation between order statistics.
fn percentile<F: Real>(sorted: &[F], p: F) -> F {
    let m = sorted.len();
    debug_assert!(m >= 1);
    let h = p * F::of_usize(m - 1);
    let lo = h.floor().to_usize().unwrap_or(0).min(m - 1);
    let hi = (lo + 1).min(m - 1);
    sorted[lo] + (sorted[hi] - sorted[lo]) * (h - F::of_usize(lo))
}
