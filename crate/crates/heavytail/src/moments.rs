//! Sample moments, semivariances, and log-moment ratios.
//!
//! For a nonnegative sample `X_1..X_n` with mean `M_1`:
//!
//! - raw moment of order `h`: `M_h = (1/n) sum X_i^h`;
//! - central moment of integer order `k >= 2`: `Mc_k = (1/n) sum (X_i - M_1)^k`
//!   (signed);
//! - lower/upper semivariances of order `h`:
//!   `L_h = (1/n) sum ((M_1 - X_i)_+)^h` over `X_i <= M_1` and
//!   `U_h = (1/n) sum ((X_i - M_1)_+)^h` over `X_i > M_1`, with local
//!   variants dividing by the side counts `N-` and `N+` instead of `n`
//!   (ties sit on the lower side);
//! - the variance is `V_n = Mc_2 = L_2 + U_2`.
//!
//! Under a tail index `alpha` in `(0, 1)` the log-ratios of these
//! statistics converge to simple rational functions of `alpha`; see
//! [`theoretical_limit`]. Sums are compensated and sequential, so the same
//! input yields the same bits on any thread count.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sum::kbn_sum_by;

/// Which moments [`summarize`] should compute.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentRequest<F> {
    /// Raw moment orders (> 0). Order 1 is always computed.
    pub raw: Vec<F>,
    /// Central moment orders (integers >= 2).
    pub central: Vec<F>,
    /// Semivariance orders (> 0); each produces lower/upper and local
    /// lower/upper entries.
    pub semivariance: Vec<F>,
}

impl<F: Real> Default for MomentRequest<F> {
    fn default() -> Self {
        MomentRequest {
            raw: vec![F::one(), F::of(2.0)],
            central: vec![F::of(2.0)],
            semivariance: vec![F::of(2.0)],
        }
    }
}

impl<F: Real> MomentRequest<F> {
    /// Everything [`taylor_ratio`] could need for the given kind.
    pub fn for_kind(kind: LimitKind<F>) -> Self {
        let mut req = MomentRequest { raw: vec![F::one()], central: vec![], semivariance: vec![] };
        match kind {
            LimitKind::Variance => req.central.push(F::of(2.0)),
            LimitKind::MomentRatio { h, k } => {
                req.raw.push(h);
                req.raw.push(k);
            }
            LimitKind::CentralVsMean { k } => req.central.push(k),
            LimitKind::CentralVsCentral { h, k } => {
                req.central.push(h);
                req.central.push(k);
            }
            LimitKind::LowerVsMean { h }
            | LimitKind::UpperVsMean { h }
            | LimitKind::LocalLowerVsMean { h }
            | LimitKind::LocalUpperVsMean { h } => req.semivariance.push(h),
        }
        req
    }
}

/// Moment and semivariance summary of one sample.
///
/// Entries are `(order, value)` pairs in request order. Local upper
/// moments are only present when `n_upper > 0`; [`MomentSummary::upper_local`]
/// reports the undefined case as an error rather than a NaN.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentSummary<F> {
    pub n: usize,
    pub raw: Vec<(F, F)>,
    pub central: Vec<(F, F)>,
    pub lower: Vec<(F, F)>,
    pub upper: Vec<(F, F)>,
    pub lower_local: Vec<(F, F)>,
    pub upper_local: Vec<(F, F)>,
    /// Count of `X_i <= M_1` (ties included here).
    pub n_lower: usize,
    /// Count of `X_i > M_1`.
    pub n_upper: usize,
}

impl<F: Real> MomentSummary<F> {
    pub fn mean(&self) -> F {
        lookup(&self.raw, F::one()).expect("order 1 always computed")
    }

    /// `V_n = Mc_2`; requires central order 2 in the request.
    pub fn variance(&self) -> Result<F> {
        self.central_moment(F::of(2.0))
    }

    pub fn raw_moment(&self, h: F) -> Result<F> {
        lookup(&self.raw, h).ok_or_else(|| missing("raw moment", h))
    }

    pub fn central_moment(&self, k: F) -> Result<F> {
        lookup(&self.central, k).ok_or_else(|| missing("central moment", k))
    }

    pub fn lower_semivariance(&self, h: F) -> Result<F> {
        lookup(&self.lower, h).ok_or_else(|| missing("lower semivariance", h))
    }

    pub fn upper_semivariance(&self, h: F) -> Result<F> {
        lookup(&self.upper, h).ok_or_else(|| missing("upper semivariance", h))
    }

    pub fn lower_local(&self, h: F) -> Result<F> {
        lookup(&self.lower_local, h).ok_or_else(|| missing("local lower semivariance", h))
    }

    /// Errors with [`Error::Undefined`] when the sample has no values above
    /// its mean.
    pub fn upper_local(&self, h: F) -> Result<F> {
        if self.n_upper == 0 {
            return Err(Error::Undefined(
                "local upper semivariance: no values exceed the sample mean".into(),
            ));
        }
        lookup(&self.upper_local, h).ok_or_else(|| missing("local upper semivariance", h))
    }

    /// False when no value exceeds the mean, in which case local upper
    /// statistics are undefined.
    pub fn upper_defined(&self) -> bool {
        self.n_upper > 0
    }
}

fn missing<F: Real>(what: &str, order: F) -> Error {
    Error::MissingStatistic(format!("{what} of order {order} was not requested"))
}

fn lookup<F: Real>(entries: &[(F, F)], order: F) -> Option<F> {
    let tol = F::of(1e-12) * order.abs().max(F::one());
    entries.iter().find(|(h, _)| (*h - order).abs() <= tol).map(|(_, v)| *v)
}

/// Power with an exact fast path for small integer orders.
fn pow_order<F: Real>(x: F, order: F, as_int: Option<i32>) -> F {
    match as_int {
        Some(k) => x.powi(k),
        None => x.powf(order),
    }
}

fn int_order<F: Real>(order: F) -> Option<i32> {
    let rounded = order.round();
    if (order - rounded).abs() <= F::of(1e-12) && rounded.abs() <= F::of(127.0) {
        rounded.to_i32()
    } else {
        None
    }
}

/// Compute the requested moments of a nonnegative sample in a fixed
/// sequential order with compensated summation.
pub fn summarize<F: Real>(values: &[F], request: &MomentRequest<F>) -> Result<MomentSummary<F>> {
    if values.is_empty() {
        return Err(Error::InvalidData("empty sample".into()));
    }
    if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v < F::zero()) {
        return Err(Error::InvalidData(format!("values must be finite and nonnegative, found {bad}")));
    }
    for &h in request.raw.iter().chain(&request.semivariance) {
        if !(h > F::zero()) || !h.is_finite() {
            return Err(Error::invalid_parameter("order", format!("{h} not in (0, inf)")));
        }
    }
    for &k in &request.central {
        match int_order(k) {
            Some(ki) if ki >= 2 => {}
            _ => {
                return Err(Error::invalid_parameter(
                    "order",
                    format!("central moments need integer order >= 2, got {k}"),
                ))
            }
        }
    }

    let n = F::of_usize(values.len());
    let mut raw_orders: Vec<F> = vec![F::one()];
    for &h in &request.raw {
        if lookup_order(&raw_orders, h).is_none() {
            raw_orders.push(h);
        }
    }
    let mut raw = Vec::with_capacity(raw_orders.len());
    for &h in &raw_orders {
        let hi = int_order(h);
        raw.push((h, kbn_sum_by(values, |x| pow_order(x, h, hi)) / n));
    }
    let mean = raw[0].1;

    let mut central = Vec::with_capacity(request.central.len());
    for &k in &request.central {
        if lookup(&central, k).is_some() {
            continue;
        }
        let ki = int_order(k);
        central.push((k, kbn_sum_by(values, |x| pow_order(x - mean, k, ki)) / n));
    }

    let n_lower = values.iter().filter(|x| **x <= mean).count();
    let n_upper = values.len() - n_lower;
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut lower_local = Vec::new();
    let mut upper_local = Vec::new();
    for &h in &request.semivariance {
        if lookup(&lower, h).is_some() {
            continue;
        }
        let hi = int_order(h);
        let zero = F::zero();
        let low_sum = kbn_sum_by(values, |x| if x <= mean { pow_order(mean - x, h, hi) } else { zero });
        let up_sum = kbn_sum_by(values, |x| if x > mean { pow_order(x - mean, h, hi) } else { zero });
        lower.push((h, low_sum / n));
        upper.push((h, up_sum / n));
        lower_local.push((h, low_sum / F::of_usize(n_lower.max(1))));
        if n_upper > 0 {
            upper_local.push((h, up_sum / F::of_usize(n_upper)));
        }
    }

    Ok(MomentSummary {
        n: values.len(),
        raw,
        central,
        lower,
        upper,
        lower_local,
        upper_local,
        n_lower,
        n_upper,
    })
}

fn lookup_order<F: Real>(orders: &[F], order: F) -> Option<usize> {
    let tol = F::of(1e-12) * order.abs().max(F::one());
    orders.iter().position(|h| (*h - order).abs() <= tol)
}

/// Which log-moment ratio to form, and which limit it converges to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum LimitKind<F> {
    /// `ln V_n / ln M_1 -> (2 - alpha) / (1 - alpha)`.
    Variance,
    /// `ln M_h / ln M_k -> (h - alpha) / (k - alpha)`.
    MomentRatio { h: F, k: F },
    /// `ln |Mc_k| / ln M_1 -> (k - alpha) / (1 - alpha)`.
    CentralVsMean { k: F },
    /// `ln |Mc_h| / ln |Mc_k| -> (h - alpha) / (k - alpha)`.
    CentralVsCentral { h: F, k: F },
    /// `ln L_h / ln M_1 -> h`: the lower tail is bounded by the mean, so
    /// the ratio carries no tail information.
    LowerVsMean { h: F },
    /// `ln U_h / ln M_1 -> (h - alpha) / (1 - alpha)` for `h > 1`.
    UpperVsMean { h: F },
    /// Local lower ratio; same limit `h` as the global lower ratio.
    LocalLowerVsMean { h: F },
    /// `ln U*_h / ln M_1 -> (h - alpha^2) / (1 - alpha)` for `h > 1`.
    /// Dividing by `N+ ~ n * survival(M_1) ~ n * M_1^(-alpha)` instead of
    /// `n` adds `alpha` to the upper ratio, and
    /// `(h - alpha)/(1 - alpha) + alpha = (h - alpha^2)/(1 - alpha)`.
    LocalUpperVsMean { h: F },
}

/// Observed log-moment ratio of the given kind.
pub fn taylor_ratio<F: Real>(summary: &MomentSummary<F>, kind: LimitKind<F>) -> Result<F> {
    let (num, num_name, den, den_name): (F, &str, F, &str) = match kind {
        LimitKind::Variance => (summary.variance()?, "variance", summary.mean(), "mean"),
        LimitKind::MomentRatio { h, k } => {
            (summary.raw_moment(h)?, "raw moment", summary.raw_moment(k)?, "raw moment")
        }
        LimitKind::CentralVsMean { k } => {
            (summary.central_moment(k)?.abs(), "central moment", summary.mean(), "mean")
        }
        LimitKind::CentralVsCentral { h, k } => (
            summary.central_moment(h)?.abs(),
            "central moment",
            summary.central_moment(k)?.abs(),
            "central moment",
        ),
        LimitKind::LowerVsMean { h } => (summary.lower_semivariance(h)?, "lower semivariance", summary.mean(), "mean"),
        LimitKind::UpperVsMean { h } => (summary.upper_semivariance(h)?, "upper semivariance", summary.mean(), "mean"),
        LimitKind::LocalLowerVsMean { h } => {
            (summary.lower_local(h)?, "local lower semivariance", summary.mean(), "mean")
        }
        LimitKind::LocalUpperVsMean { h } => {
            (summary.upper_local(h)?, "local upper semivariance", summary.mean(), "mean")
        }
    };
    if !(num > F::zero()) {
        return Err(Error::Domain(format!("{num_name} is {num}; log-ratio needs a positive value")));
    }
    if !(den > F::zero()) {
        return Err(Error::Domain(format!("{den_name} is {den}; log-ratio needs a positive value")));
    }
    let den_log = den.ln();
    if den_log.abs() < F::of(1e-12) {
        return Err(Error::IllConditioned(format!(
            "log of {den_name} is {den_log}; the ratio denominator is numerically zero"
        )));
    }
    Ok(num.ln() / den_log)
}

/// Limit of [`taylor_ratio`] under tail index `alpha`, as an exact rational
/// function of `alpha`. Errors when `(kind, alpha)` is outside the regime
/// where the limit holds.
pub fn theoretical_limit<F: Real>(kind: LimitKind<F>, alpha: F) -> Result<F> {
    let one = F::one();
    let needs_unit_alpha = !matches!(kind, LimitKind::MomentRatio { .. } | LimitKind::CentralVsCentral { .. });
    if needs_unit_alpha && !(alpha > F::zero() && alpha < one) {
        return Err(Error::Domain(format!("limit requires alpha in (0, 1), got {alpha}")));
    }
    if !(alpha > F::zero()) || !alpha.is_finite() {
        return Err(Error::Domain(format!("limit requires alpha > 0, got {alpha}")));
    }
    match kind {
        LimitKind::Variance => Ok((F::of(2.0) - alpha) / (one - alpha)),
        LimitKind::MomentRatio { h, k } => {
            if !(h > alpha && k > alpha) {
                return Err(Error::Domain(format!(
                    "raw-moment ratio limit requires orders above alpha; got h = {h}, k = {k}, alpha = {alpha}"
                )));
            }
            Ok((h - alpha) / (k - alpha))
        }
        LimitKind::CentralVsMean { k } => {
            require_int_order(k, F::of(2.0))?;
            Ok((k - alpha) / (one - alpha))
        }
        LimitKind::CentralVsCentral { h, k } => {
            require_int_order(h, F::of(2.0))?;
            require_int_order(k, F::of(2.0))?;
            if !(alpha < one) {
                return Err(Error::Domain(format!("central-moment ratio limit requires alpha in (0, 1), got {alpha}")));
            }
            Ok((h - alpha) / (k - alpha))
        }
        LimitKind::LowerVsMean { h } | LimitKind::LocalLowerVsMean { h } => {
            if !(h > F::zero()) {
                return Err(Error::Domain(format!("lower semivariance limit requires h > 0, got {h}")));
            }
            Ok(h)
        }
        LimitKind::UpperVsMean { h } => {
            if !(h > one) {
                return Err(Error::Domain(format!("upper semivariance limit requires h > 1, got {h}")));
            }
            Ok((h - alpha) / (one - alpha))
        }
        LimitKind::LocalUpperVsMean { h } => {
            if !(h > one) {
                return Err(Error::Domain(format!("local upper semivariance limit requires h > 1, got {h}")));
            }
            Ok((h - alpha * alpha) / (one - alpha))
        }
    }
}

fn require_int_order<F: Real>(k: F, at_least: F) -> Result<()> {
    let rounded = k.round();
    if (k - rounded).abs() > F::of(1e-12) || k < at_least {
        return Err(Error::Domain(format!("central moments need integer order >= {at_least}, got {k}")));
    }
    Ok(())
}

/// Invert the variance-ratio limit: a regression slope `r` implies
/// `alpha = (2 - r) / (1 - r)`.
pub fn implied_alpha<F: Real>(slope: F) -> Result<F> {
    if !slope.is_finite() {
        return Err(Error::Domain(format!("slope {slope} is not finite")));
    }
    if (slope - F::one()).abs() < F::of(1e-9) {
        return Err(Error::IllConditioned("slope 1 is the singularity of (2 - r)/(1 - r)".into()));
    }
    Ok((F::of(2.0) - slope) / (F::one() - slope))
}
