//! Negative binomial fit for overdispersed count data.

use std::collections::HashMap;

use super::{mean_and_variance, FitParams, FitResult};
use crate::distributions::SampleSet;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::{digamma, ln_gamma, trigamma};
use crate::sum::kbn_sum;

const MAX_ITER: usize = 200;

/// Fit a negative binomial distribution (size `r`, mean `m`) to nonnegative
/// integer counts by maximum likelihood.
///
/// The mean MLE is the sample mean; the size solves the profile score
/// equation by Newton iterations started at the method-of-moments value
/// `r0 = mean^2 / (variance - mean)`. Counts barely more dispersed than
/// Poisson give a large fitted `r`; underdispersed counts (variance at or
/// below the mean) are rejected because no negative binomial matches them.
pub fn fit_negbinomial<F: Real>(data: &SampleSet<F>) -> Result<FitResult<F>> {
    let n = data.len();
    if n < 2 {
        return Err(Error::InvalidData("need at least 2 observations".to_string()));
    }
    // Counts are validated and folded to f64 once; integers of this size are
    // exact in f64 and the special functions work in f64 anyway.
    let mut grouped: HashMap<u64, u64> = HashMap::new();
    for &v in &data.values {
        let x = v.as_f64();
        if !(x.is_finite() && x >= 0.0 && x.fract() == 0.0) {
            return Err(Error::InvalidData(format!("counts must be nonnegative integers, found {x}")));
        }
        *grouped.entry(x as u64).or_insert(0) += 1;
    }
    let (mean, var) = mean_and_variance(&data.values);
    let (mean, var) = (mean.as_f64(), var.as_f64());
    if mean <= 0.0 {
        return Err(Error::InvalidData("all counts are zero".to_string()));
    }
    if var <= mean {
        return Err(Error::Domain(format!(
            "negative binomial needs overdispersion: variance {var} does not exceed mean {mean}"
        )));
    }

    // Unique values with multiplicities keep the digamma sums cheap on
    // count data with many ties.
    let mut unique: Vec<(f64, f64)> = grouped.iter().map(|(&x, &c)| (x as f64, c as f64)).collect();
    unique.sort_unstable_by(|a, b| a.0.partial_cmp(&b.0).expect("finite counts"));
    let nf = n as f64;

    let score = |r: f64| -> (f64, f64) {
        let mut g = 0.0;
        let mut dg = 0.0;
        for &(x, c) in &unique {
            g += c * digamma(x + r);
            dg += c * trigamma(x + r);
        }
        g += -nf * digamma(r) + nf * (r / (r + mean)).ln();
        dg += -nf * trigamma(r) + nf * (1.0 / r - 1.0 / (r + mean));
        (g, dg)
    };

    let mut r = mean * mean / (var - mean);
    let mut converged = false;
    for _ in 0..MAX_ITER {
        let (g, dg) = score(r);
        if !(g.is_finite() && dg.is_finite()) || dg == 0.0 {
            break;
        }
        let mut next = r - g / dg;
        // Keep the iterate positive and damp wild steps.
        if next <= 0.0 {
            next = r / 2.0;
        } else if next > 10.0 * r {
            next = 10.0 * r;
        }
        let moved = (next - r).abs();
        r = next;
        if moved <= 1e-12 * r.abs() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            iterations: MAX_ITER,
            context: format!("negative binomial size solver stalled at r = {r}"),
        });
    }

    let loglik = kbn_sum(unique.iter().map(|&(x, c)| c * (ln_gamma(x + r) - ln_gamma(x + 1.0))))
        - nf * ln_gamma(r)
        + nf * r * (r / (r + mean)).ln()
        + nf * mean * (mean / (r + mean)).ln();
    Ok(FitResult {
        params: FitParams::NegBinomial { size: F::of(r), mean: F::of(mean) },
        implied_tail_index: None,
        loglik_or_sse: F::of(loglik),
    })
}
