//! Draw routines behind the process sampler.
//!
//! All uniform and normal inputs are generated as `f64` and converted, so
//! the random stream is the same for every scalar instantiation.

use rand::{Rng, RngExt};
use rand_distr::Distribution;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Pareto quantile function: `x_min * (1 - u)^(-1/alpha)` for `u` in
/// `[0, 1)`.
pub fn pareto_quantile<F: Real>(x_min: F, alpha: F, u: F) -> F {
    x_min * (F::one() - u).powf(-F::one() / alpha)
}

pub(crate) fn standard_normal<F: Real, R: Rng>(rng: &mut R) -> F {
    F::of(rand_distr::StandardNormal.sample(rng))
}

/// Uniform draw in `[0, 1)` as `F`. The clamp matters for narrow scalars:
/// a `f64` just below 1 can round up to exactly 1 in `f32`, which would
/// push inverse-CDF maps to infinity.
pub(crate) fn uniform_std<F: Real, R: Rng>(rng: &mut R) -> F {
    let u = F::of(rng.random::<f64>());
    u.min(F::one() - F::epsilon())
}

/// One draw from the standard one-sided stable law with Laplace transform
/// `exp(-s^alpha)`, `alpha` in `(0, 1)`.
///
/// Uses the trigonometric representation `X = (A(theta) / W)^((1-alpha)/alpha)`
/// with `theta` uniform on `(0, pi)`, `W` unit exponential, and
/// `A(theta) = sin((1-alpha) theta) sin(alpha theta)^(alpha/(1-alpha))
///             / sin(theta)^(1/(1-alpha))`,
/// evaluated in log space to survive the extreme exponents near the ends of
/// the angle range.
pub(crate) fn stable_standard_draw<F: Real, R: Rng>(alpha: F, rng: &mut R) -> F {
    let a = alpha.as_f64();
    let u: f64 = rand_distr::Open01.sample(rng);
    let theta = std::f64::consts::PI * u;
    let mut w: f64 = rand_distr::Exp1.sample(rng);
    if w < f64::MIN_POSITIVE {
        w = f64::MIN_POSITIVE;
    }
    let ln_a = ((1.0 - a) * theta).sin().ln() + a / (1.0 - a) * (a * theta).sin().ln()
        - 1.0 / (1.0 - a) * theta.sin().ln();
    F::of(((1.0 - a) / a * (ln_a - w.ln())).exp())
}

/// Stationary Gaussian AR(1) chain with autocorrelation
/// `exp(-|i - j| / decay_length)`: lag-1 coefficient `exp(-1/decay_length)`,
/// innovation variance `1 - exp(-2/decay_length)`, started from its
/// stationary `N(0, 1)` marginal.
pub fn gaussian_ar1_chain<F: Real, R: Rng>(n: usize, decay_length: F, rng: &mut R) -> Vec<F> {
    let phi = (-F::one() / decay_length).exp();
    let innov_sd = (F::one() - phi * phi).sqrt();
    let mut out = Vec::with_capacity(n);
    let mut g: F = standard_normal(rng);
    for _ in 0..n {
        out.push(g);
        g = phi * g + innov_sd * standard_normal(rng);
    }
    out
}

/// Acceptance-rejection sampler for the canonical log-corrected law
/// `S(x) = x^(-alpha) ln(x) e alpha` on `[exp(1/alpha), inf)`.
///
/// The proposal is Pareto with the same left endpoint and tail index
/// `alpha - 0.05`, slightly heavier so the density ratio stays bounded. The
/// envelope constant is the grid maximum of the ratio times a 1.05 safety
/// factor; every accepted draw re-checks the bound.
#[derive(Debug, Clone, Copy)]
pub struct F1Sampler<F> {
    alpha: F,
    proposal_alpha: F,
    x_min: F,
    ratio_coeff: F,
    envelope: F,
}

impl<F: Real> F1Sampler<F> {
    pub fn new(alpha: F) -> Result<Self> {
        if !(alpha > F::of(0.05)) || !alpha.is_finite() {
            return Err(Error::invalid_parameter(
                "alpha",
                format!("{alpha} not in (0.05, inf); the proposal tail index alpha - 0.05 must stay positive"),
            ));
        }
        let x_min = (F::one() / alpha).exp();
        let proposal_alpha = alpha - F::of(0.05);
        // f(x) / g(x) = coeff * x^(-0.05) * (alpha ln x - 1) with
        // coeff = e alpha / (alpha' x_min^alpha').
        let ratio_coeff = F::E() * alpha / (proposal_alpha * x_min.powf(proposal_alpha));
        let mut sampler = F1Sampler { alpha, proposal_alpha, x_min, ratio_coeff, envelope: F::zero() };
        // The ratio vanishes at x_min, peaks at ln x = 1/alpha + 20, and
        // decays like x^(-0.05); a log grid out to 1/alpha + 60 brackets
        // the peak comfortably.
        let lo = x_min.ln();
        let hi = lo + F::of(60.0);
        let mut best = F::zero();
        let points = 2048;
        for i in 0..=points {
            let t = F::of_usize(i) / F::of_usize(points);
            let x = (lo + (hi - lo) * t).exp();
            best = best.max(sampler.density_ratio(x));
        }
        sampler.envelope = best * F::of(1.05);
        Ok(sampler)
    }

    /// Target density over proposal density at `x`.
    pub fn density_ratio(&self, x: F) -> F {
        self.ratio_coeff * x.powf(-F::of(0.05)) * (self.alpha * x.ln() - F::one())
    }

    /// Envelope constant bounding the density ratio.
    pub fn envelope(&self) -> F {
        self.envelope
    }

    pub fn draw<R: Rng>(&self, rng: &mut R) -> F {
        loop {
            let y = pareto_quantile(self.x_min, self.proposal_alpha, uniform_std(rng));
            let ratio = self.density_ratio(y);
            assert!(
                ratio <= self.envelope,
                "acceptance-rejection envelope violated: ratio {ratio} > envelope {}",
                self.envelope
            );
            if F::of(rng.random::<f64>()) * self.envelope <= ratio {
                return y;
            }
        }
    }
}
