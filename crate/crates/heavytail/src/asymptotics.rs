//! Truncation thresholds, truncated-moment theory, and a Monte Carlo probe
//! of the covariance-sum condition behind the dependent limit theorems.
//!
//! For a tail model with survival `x^(-alpha) l(x)` and a slowly growing
//! sequence `c_n`, two truncation levels organize the asymptotics: the
//! upper level `t_n` solving `n c_n l(t)/t^alpha = 1` and the lower level
//! `v_n` solving `n l(v)/v^alpha = c_n`. Sample moments truncated at these
//! levels concentrate around `(alpha/(p - alpha)) t^(p-alpha) l(t)`, which
//! is what drives the log-moment-ratio limits. For dependent sequences the
//! limits additionally require the truncated covariance sum
//! `sum_{i != j} Cov(X_i^p 1(X_i < v_n), X_j^p 1(X_j < v_n))` to vanish
//! relative to `v_n^(2p) c_n^2`; [`condition_a_probe`] estimates that ratio
//! by simulation.

use serde::Serialize;

use crate::distributions::{sample_process, ProcessSpec, TailModel};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sum::{kbn_sum, KbnSum};

/// Slowly growing normalization sequence `c_n`: positive, with `n c_n`
/// increasing and `log c_n = o(log n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CSequence<F> {
    /// `c_n = log n`, the default.
    LogN,
    /// `c_n = (log n)^q` for a fixed `q > 0`, a named family standing in
    /// for arbitrary admissible sequences.
    LogPow { q: F },
}

impl<F: Real> CSequence<F> {
    /// Evaluate `c_n`. Needs `n >= 2` so the value is positive.
    pub fn value(&self, n: usize) -> Result<F> {
        if n < 2 {
            return Err(Error::invalid_parameter("n", format!("{n} too small: c_n must be positive")));
        }
        let ln_n = F::of_usize(n).ln();
        match self {
            CSequence::LogN => Ok(ln_n),
            CSequence::LogPow { q } => {
                if !(*q > F::zero() && q.is_finite()) {
                    return Err(Error::invalid_parameter("q", format!("{q} not in (0, inf)")));
                }
                Ok(ln_n.powf(*q))
            }
        }
    }
}

/// Which truncation level to solve for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ThresholdTarget {
    /// `t_n`: root of `n c_n survival(t) = 1`.
    UpperT,
    /// `v_n`: root of `n survival(v) = c_n`.
    LowerV,
}

/// Solve for a truncation threshold with an explicit `c_n` value.
///
/// Bisection on `log x`: the bracket starts at `[x_min, 2 x_min]` and the
/// upper end doubles (in log space) until the residual changes sign, then
/// bisects until the relative residual is at most 1e-10.
pub fn solve_threshold_with<F: Real>(
    model: &TailModel<F>,
    n: usize,
    c_n: F,
    target: ThresholdTarget,
) -> Result<F> {
    if n == 0 {
        return Err(Error::invalid_parameter("n", "sample size must be positive".to_string()));
    }
    if !(c_n > F::zero() && c_n.is_finite()) {
        return Err(Error::invalid_parameter("c_n", format!("{c_n} not in (0, inf)")));
    }
    let nf = F::of_usize(n);
    // Both targets are "survival(x) = level" with a decreasing left side.
    let level = match target {
        ThresholdTarget::UpperT => (nf * c_n).recip(),
        ThresholdTarget::LowerV => c_n / nf,
    };
    if !(level < F::one()) {
        return Err(Error::Domain(format!(
            "threshold target level {} is not below 1; n is too small for this c_n",
            level.as_f64()
        )));
    }
    let tol = F::of(1e-10);
    let residual = |ln_x: F| model.survival(ln_x.exp()) / level - F::one();

    let mut lo = model.x_min().ln();
    let mut step = F::of(2f64.ln());
    let mut hi = lo + step;
    let mut doublings = 0usize;
    while residual(hi) > F::zero() {
        lo = hi;
        step = step + step;
        hi = lo + step;
        doublings += 1;
        if doublings > 1000 {
            return Err(Error::NoConvergence {
                iterations: doublings,
                context: "no sign change while expanding the threshold bracket".to_string(),
            });
        }
    }
    for iterations in 0.. {
        let mid = (lo + hi) / F::of(2.0);
        let r = residual(mid);
        if r.abs() <= tol {
            return Ok(mid.exp());
        }
        if iterations >= 200 {
            break;
        }
        if r > F::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence {
        iterations: 200,
        context: format!("threshold bisection stalled for n = {n}, target {target:?}"),
    })
}

/// Solve for a truncation threshold under a `c_n` rule.
pub fn solve_threshold<F: Real>(
    model: &TailModel<F>,
    n: usize,
    c_rule: &CSequence<F>,
    target: ThresholdTarget,
) -> Result<F> {
    solve_threshold_with(model, n, c_rule.value(n)?, target)
}

/// Leading-order theoretical truncated moment
/// `E[X^p 1(X < t)] ~ (alpha/(p - alpha)) t^(p-alpha) l(t)` for `p` above
/// the tail index.
pub fn truncated_moment_theory<F: Real>(model: &TailModel<F>, p: F, t: F) -> Result<F> {
    let alpha = model.alpha();
    if !(p > alpha) {
        return Err(Error::Domain(format!(
            "truncated moment of order {} diverges relative to this scale: need p > alpha = {}",
            p.as_f64(),
            alpha.as_f64()
        )));
    }
    if !(t > model.x_min()) {
        return Err(Error::invalid_parameter("t", "truncation level must exceed x_min".to_string()));
    }
    Ok(alpha / (p - alpha) * t.powf(p - alpha) * model.slowly_varying_factor(t))
}

/// Truncation context for one sample size: both thresholds, the
/// lower-bound exponent, and the derived scales of the tail lemmas.
#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticContext<F> {
    pub model: TailModel<F>,
    pub c_rule: CSequence<F>,
    pub n: usize,
    pub c_n: F,
    pub t_n: F,
    pub v_n: F,
    /// Exponent of the lower-bound rate `c_n^(-delta')`; must exceed
    /// `2 (p/alpha - 1)`.
    pub delta_prime: F,
    /// Theoretical truncated mean at `t_n`.
    pub d_n1: F,
    /// `d_{n,1} / c_n^(2 delta')`.
    pub b_n: F,
    /// `d_{n,1} * c_n`.
    pub b_tilde_n: F,
}

impl<F: Real> AsymptoticContext<F> {
    /// Build the context for moment order `p`, with the default
    /// `delta' = 1.1 * 2 (p/alpha - 1)`.
    pub fn new(model: &TailModel<F>, c_rule: CSequence<F>, n: usize, p: F) -> Result<Self> {
        let alpha = model.alpha();
        if !(p > alpha) {
            return Err(Error::Domain(format!(
                "context needs p > alpha, got p = {} with alpha = {}",
                p.as_f64(),
                alpha.as_f64()
            )));
        }
        let delta_prime = F::of(2.2) * (p / alpha - F::one());
        Self::with_delta_prime(model, c_rule, n, delta_prime)
    }

    /// Build the context with an explicit `delta'`.
    pub fn with_delta_prime(
        model: &TailModel<F>,
        c_rule: CSequence<F>,
        n: usize,
        delta_prime: F,
    ) -> Result<Self> {
        if !(delta_prime > F::zero() && delta_prime.is_finite()) {
            return Err(Error::invalid_parameter("delta_prime", format!("{delta_prime} not in (0, inf)")));
        }
        let c_n = c_rule.value(n)?;
        let t_n = solve_threshold_with(model, n, c_n, ThresholdTarget::UpperT)?;
        let v_n = solve_threshold_with(model, n, c_n, ThresholdTarget::LowerV)?;
        let d_n1 = truncated_moment_theory(model, F::one(), t_n)?;
        let two = F::of(2.0);
        Ok(AsymptoticContext {
            model: model.clone(),
            c_rule,
            n,
            c_n,
            t_n,
            v_n,
            delta_prime,
            d_n1,
            b_n: d_n1 / c_n.powf(two * delta_prime),
            b_tilde_n: d_n1 * c_n,
        })
    }
}

/// One sample size of the covariance-sum probe.
#[derive(Debug, Clone, Serialize)]
pub struct ProbePoint<F> {
    pub n: usize,
    pub c_n: F,
    pub v_n: F,
    /// Estimated `sum_{i != j} Cov(X_i^p 1(X_i < v_n), X_j^p 1(X_j < v_n))`.
    pub estimate: F,
    /// Monte Carlo standard error of `estimate`.
    pub se: F,
    /// `estimate / (v_n^(2p) c_n^2)`, the quantity that must vanish.
    pub ratio: F,
    pub ratio_se: F,
}

/// Trend read off the probe ratios.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProbeVerdict {
    /// Ratios are statistically zero everywhere or clearly shrinking.
    ConsistentWithVanishing,
    /// Ratios neither shrink nor grow cleanly at these sizes.
    Inconclusive,
    /// Ratios do not shrink; the covariance condition looks violated.
    NotVanishing,
}

/// Report of [`condition_a_probe`].
#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport<F> {
    pub p: F,
    pub replicates: usize,
    pub points: Vec<ProbePoint<F>>,
    pub verdict: ProbeVerdict,
}

/// Estimate, for each `n` in the grid, how large the pairwise covariance
/// sum of the `v_n`-truncated `p`-th powers is next to `v_n^(2p) c_n^2`,
/// using the default `c_n = log n` rule. See [`condition_a_probe_with`].
pub fn condition_a_probe<F: Real>(
    spec: &ProcessSpec<F>,
    p: F,
    n_grid: &[usize],
    replicates: usize,
    seed: u64,
) -> Result<ProbeReport<F>> {
    condition_a_probe_with(spec, p, &CSequence::LogN, n_grid, replicates, seed)
}

/// [`condition_a_probe`] with an explicit `c_n` rule.
///
/// For each `n`: the marginal tail approximation of the process places
/// `v_n` (its scale folds into the solver level), `replicates` independent
/// length-`n` sequences are generated on substreams of `seed`, and the
/// covariance sum is estimated as the variance of the truncated row sums
/// minus the summed per-coordinate variances. Both passes regenerate the
/// same substreams, so memory stays at O(n + replicates) and the result is
/// independent of thread count.
pub fn condition_a_probe_with<F: Real>(
    spec: &ProcessSpec<F>,
    p: F,
    c_rule: &CSequence<F>,
    n_grid: &[usize],
    replicates: usize,
    seed: u64,
) -> Result<ProbeReport<F>> {
    spec.validate()?;
    if replicates < 10 {
        return Err(Error::invalid_parameter(
            "replicates",
            format!("{replicates} gives no usable covariance precision; need at least 10"),
        ));
    }
    if n_grid.is_empty() {
        return Err(Error::invalid_parameter("n_grid", "empty size grid".to_string()));
    }
    if n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid_parameter("n_grid", "sizes must be strictly increasing".to_string()));
    }
    if !(p > spec.nominal_alpha()) {
        return Err(Error::Domain(format!(
            "probe order p = {} must exceed the marginal tail index {}",
            p.as_f64(),
            spec.nominal_alpha().as_f64()
        )));
    }

    let mut points = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let marginal = spec.marginal_tail(n)?;
        let c_n = c_rule.value(n)?;
        // P(X > x) ~ scale * survival(x), so the level comparisons shift by
        // the scale: n * scale * survival(v) = c_n.
        let v_n =
            solve_threshold_with(&marginal.model, n, c_n / marginal.scale, ThresholdTarget::LowerV)?;
        points.push(probe_at(spec, p, n, c_n, v_n, replicates, seed)?);
    }

    let verdict = read_trend(&points);
    Ok(ProbeReport { p, replicates, points, verdict })
}

fn probe_at<F: Real>(
    spec: &ProcessSpec<F>,
    p: F,
    n: usize,
    c_n: F,
    v_n: F,
    replicates: usize,
    seed: u64,
) -> Result<ProbePoint<F>> {
    use rayon::prelude::*;

    let truncated_row = |r: usize| -> Result<Vec<F>> {
        let sample = sample_process(spec, n, seed, r as u64)?;
        Ok(sample
            .values
            .iter()
            .map(|&x| if x < v_n { x.powf(p) } else { F::zero() })
            .collect())
    };

    // Pass 1: per-coordinate means and per-replicate row sums, accumulated
    // in chunks so the reduction order is fixed no matter the thread count.
    let mut coord_sum = vec![F::zero(); n];
    let mut row_sums: Vec<F> = Vec::with_capacity(replicates);
    let ids: Vec<usize> = (0..replicates).collect();
    for chunk in ids.chunks(32) {
        let rows: Vec<Result<Vec<F>>> = chunk.par_iter().map(|&r| truncated_row(r)).collect();
        for row in rows {
            let row = row?;
            for (acc, &y) in coord_sum.iter_mut().zip(&row) {
                *acc += y;
            }
            row_sums.push(kbn_sum(row.iter().copied()));
        }
    }
    let rf = F::of_usize(replicates);
    let coord_mean: Vec<F> = coord_sum.iter().map(|&s| s / rf).collect();
    let grand_mean = kbn_sum(row_sums.iter().copied()) / rf;

    // Pass 2: regenerate each replicate and form
    // D_r = (T_r - mean T)^2 - sum_i (y_i - mean y_i)^2,
    // whose average times R/(R-1) estimates the off-diagonal covariance sum.
    let d: Vec<Result<F>> = ids
        .par_iter()
        .map(|&r| {
            let row = truncated_row(r)?;
            let mut within = KbnSum::new();
            for (&y, &mu) in row.iter().zip(&coord_mean) {
                let dev = y - mu;
                within.add(dev * dev);
            }
            let t_dev = row_sums[r] - grand_mean;
            Ok(t_dev * t_dev - within.total())
        })
        .collect();
    let mut d_vals = Vec::with_capacity(replicates);
    for v in d {
        d_vals.push(v?);
    }

    let scale = rf / (rf - F::one());
    let d_mean = kbn_sum(d_vals.iter().copied()) / rf;
    let estimate = scale * d_mean;
    let d_var = kbn_sum(d_vals.iter().map(|&v| (v - d_mean) * (v - d_mean))) / (rf - F::one());
    let se = scale * (d_var / rf).sqrt();

    let denom = v_n.powf(p + p) * c_n * c_n;
    Ok(ProbePoint { n, c_n, v_n, estimate, se, ratio: estimate / denom, ratio_se: se / denom })
}

/// Classify the ratio sequence: statistically zero everywhere or clearly
/// shrinking counts as vanishing, clear growth as a violation, anything
/// else as inconclusive. One inversion is tolerated on the way down, since
/// each point carries Monte Carlo noise.
fn read_trend<F: Real>(points: &[ProbePoint<F>]) -> ProbeVerdict {
    let three = F::of(3.0);
    if points.iter().all(|pt| pt.ratio.abs() <= three * pt.ratio_se) {
        return ProbeVerdict::ConsistentWithVanishing;
    }
    if points.len() < 2 {
        return ProbeVerdict::Inconclusive;
    }
    let mags: Vec<F> = points.iter().map(|pt| pt.ratio.abs()).collect();
    let inversions = mags.windows(2).filter(|w| w[1] > w[0]).count();
    let first = mags[0];
    let last = mags[mags.len() - 1];
    if inversions <= 1 && last <= first / F::of(2.0) {
        ProbeVerdict::ConsistentWithVanishing
    } else if last >= first {
        ProbeVerdict::NotVanishing
    } else {
        ProbeVerdict::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;
    use crate::distributions::ProcessSpec;

    fn pareto_half() -> TailModel<f64> {
        TailModel::pareto(1.0, 0.5).unwrap()
    }

    #[test]
    fn thresholds_match_closed_forms_for_pure_pareto() {
        // With l identically 1: t_n = (n c_n)^(1/alpha), v_n = (n/c_n)^(1/alpha).
        let model = pareto_half();
        let rule = CSequence::LogN;
        let n = 100usize;
        let c = (100f64).ln();
        let t = solve_threshold(&model, n, &rule, ThresholdTarget::UpperT).unwrap();
        assert_relative_eq!(t, (n as f64 * c).powf(2.0), max_relative = 1e-8);
        let v = solve_threshold(&model, n, &rule, ThresholdTarget::LowerV).unwrap();
        assert_relative_eq!(v, (n as f64 / c).powf(2.0), max_relative = 1e-8);
        // Residual contract straight from the solver definition.
        assert!((n as f64 * c * model.survival(t) - 1.0).abs() <= 1e-9);
        assert!((n as f64 * model.survival(v) / c - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn thresholds_solve_for_slowly_varying_families() {
        for model in [
            TailModel::log_corrected(0.5f64).unwrap(),
            // x_min past the rising stretch: ln x_min > beta/alpha = 15/7.
            TailModel::new(0.7, crate::distributions::SlowlyVarying::PowLog(1.5), 10.0).unwrap(),
        ] {
            for n in [1_000usize, 10_000, 100_000] {
                let c = CSequence::LogN.value(n).unwrap();
                let t = solve_threshold_with(&model, n, c, ThresholdTarget::UpperT).unwrap();
                let v = solve_threshold_with(&model, n, c, ThresholdTarget::LowerV).unwrap();
                let rt = n as f64 * c * model.survival(t);
                let rv = n as f64 * model.survival(v) / c;
                assert!((rt - 1.0).abs() <= 1e-9, "t residual {rt}");
                assert!((rv - 1.0).abs() <= 1e-9, "v residual {rv}");
                assert!(v <= t, "v_n {v} above t_n {t} at n = {n}");
            }
        }
    }

    #[test]
    fn threshold_rejects_unreachable_targets() {
        let model = pareto_half();
        // Level at or above 1 means the root would sit below x_min.
        assert!(solve_threshold_with(&model, 1, 0.5, ThresholdTarget::UpperT).is_err());
        assert!(solve_threshold_with(&model, 2, 5.0, ThresholdTarget::LowerV).is_err());
        assert!(solve_threshold_with(&model, 0, 1.0, ThresholdTarget::UpperT).is_err());
        assert!(solve_threshold_with(&model, 10, -1.0, ThresholdTarget::UpperT).is_err());
    }

    #[test]
    fn truncated_moment_formula_and_exact_pareto_ratio() {
        let model = pareto_half();
        let theory = truncated_moment_theory(&model, 1.0, 1e4).unwrap();
        assert_relative_eq!(theory, 100.0, max_relative = 1e-12);
        // Exact truncated mean of Pareto(1, 1/2): integral alpha/(1-alpha) (t^(1-alpha) - 1).
        let exact = |t: f64| t.sqrt() - 1.0;
        assert_relative_eq!(exact(1e4) / theory, 0.99, max_relative = 1e-12);
        // The ratio climbs to 1 as the truncation level grows.
        let mut prev = 0.0;
        for t in [1e4, 1e6, 1e8, 1e10] {
            let ratio = exact(t) / truncated_moment_theory(&model, 1.0, t).unwrap();
            assert!(ratio > prev && ratio < 1.0, "ratio {ratio} at t = {t}");
            prev = ratio;
        }
    }

    #[test]
    fn truncated_moment_rejects_divergent_orders() {
        let model = pareto_half();
        assert!(matches!(truncated_moment_theory(&model, 0.5, 1e4), Err(Error::Domain(_))));
        assert!(matches!(truncated_moment_theory(&model, 0.3, 1e4), Err(Error::Domain(_))));
        assert!(truncated_moment_theory(&model, 1.0, 0.5).is_err()); // below x_min
    }

    #[test]
    fn log_moment_exponent_approaches_p_minus_alpha() {
        // log theory / log t = (p - alpha) + log(constant * l(t))/log t. The
        // deviation shrinks along a geometric grid for every built-in
        // family, and vanishes identically when the constant and l are 1
        // (Pareto with alpha = 1/2 at p = 1).
        let cases: Vec<(TailModel<f64>, f64)> = vec![
            (pareto_half(), 2.0),
            (TailModel::log_corrected(0.5).unwrap(), 1.0),
            (TailModel::new(0.6, crate::distributions::SlowlyVarying::PowLog(2.0), 30.0).unwrap(), 1.4),
        ];
        for (model, p) in cases {
            let target = p - model.alpha();
            let mut prev_dev = f64::INFINITY;
            for exp10 in [4, 6, 8, 10, 12] {
                let t = 10f64.powi(exp10);
                let theory = truncated_moment_theory(&model, p, t).unwrap();
                let dev = (theory.ln() / t.ln() - target).abs();
                assert!(dev < prev_dev, "deviation {dev} not shrinking at t = 1e{exp10}");
                prev_dev = dev;
            }
        }
        // Exact cancellation case: alpha/(p - alpha) = 1 and l = 1.
        let t = 1e12;
        let theory = truncated_moment_theory(&pareto_half(), 1.0, t).unwrap();
        assert!((theory.ln() / t.ln() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn context_assembles_consistent_scales() {
        let model = pareto_half();
        let ctx = AsymptoticContext::new(&model, CSequence::LogN, 10_000, 1.0).unwrap();
        assert_relative_eq!(ctx.delta_prime, 2.2, max_relative = 1e-12);
        assert!(ctx.v_n <= ctx.t_n);
        assert_relative_eq!(ctx.d_n1, ctx.t_n.sqrt(), max_relative = 1e-8);
        assert_relative_eq!(ctx.b_tilde_n, ctx.d_n1 * ctx.c_n, max_relative = 1e-12);
        assert_relative_eq!(ctx.b_n, ctx.d_n1 / ctx.c_n.powf(4.4), max_relative = 1e-12);
        assert!(AsymptoticContext::new(&model, CSequence::LogN, 10_000, 0.4).is_err());
    }

    #[test]
    fn v_below_t_across_models_at_thousand_plus() {
        let models: Vec<TailModel<f64>> = vec![
            TailModel::pareto(1.0, 0.3).unwrap(),
            TailModel::pareto(2.0, 0.8).unwrap(),
            TailModel::log_corrected(0.4).unwrap(),
            TailModel::new(0.5, crate::distributions::SlowlyVarying::PowLog(1.0), 8.0).unwrap(),
        ];
        for model in &models {
            for n in [1_000usize, 31_623, 1_000_000] {
                let c = CSequence::LogN.value(n).unwrap();
                let t = solve_threshold_with(model, n, c, ThresholdTarget::UpperT).unwrap();
                let v = solve_threshold_with(model, n, c, ThresholdTarget::LowerV).unwrap();
                assert!(v <= t, "ordering violated for {model:?} at n = {n}");
            }
        }
    }

    #[test]
    fn probe_validates_inputs() {
        let spec = ProcessSpec::Iid(pareto_half());
        assert!(condition_a_probe(&spec, 1.0, &[100, 200], 5, 1).is_err());
        assert!(condition_a_probe(&spec, 1.0, &[], 50, 1).is_err());
        assert!(condition_a_probe(&spec, 1.0, &[200, 100], 50, 1).is_err());
        assert!(condition_a_probe(&spec, 0.4, &[100, 200], 50, 1).is_err());
    }

    #[test]
    fn probe_reads_iid_as_vanishing() {
        let spec = ProcessSpec::Iid(pareto_half());
        let report = condition_a_probe(&spec, 1.0, &[200, 600], 64, 99).unwrap();
        assert_eq!(report.points.len(), 2);
        for pt in &report.points {
            assert!(
                pt.ratio.abs() <= 3.0 * pt.ratio_se,
                "iid ratio {} at n = {} larger than 3 se {}",
                pt.ratio,
                pt.n,
                pt.ratio_se
            );
        }
        assert_eq!(report.verdict, ProbeVerdict::ConsistentWithVanishing);
    }

    #[test]
    fn probe_is_reproducible() {
        let spec = ProcessSpec::ar1(0.8, pareto_half());
        let a = condition_a_probe(&spec, 1.0, &[300], 32, 7).unwrap();
        let b = condition_a_probe(&spec, 1.0, &[300], 32, 7).unwrap();
        assert_eq!(a.points[0].estimate, b.points[0].estimate);
        assert_eq!(a.points[0].se, b.points[0].se);
    }
}
