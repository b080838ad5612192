//! Tail models, process specifications, and reproducible samplers.
//!
//! A [`TailModel`] describes a survival function `S(x) = x^(-alpha) l(x)`
//! on `[x_min, inf)`, normalized so `S(x_min) = 1`, with `l` drawn from a
//! small set of slowly varying families. A [`ProcessSpec`] describes how a
//! sequence with such marginals is generated: independently, through an
//! autoregression, through shared or locally correlated Gaussian factors,
//! as a two-population mixture, or by propagation on a random graph.
//!
//! Sampling is deterministic in `(spec, n, seed, replicate_id)`: each
//! replicate gets its own ChaCha substream, so parallel replication cannot
//! reorder draws.

mod samplers;

use rand::{Rng, RngExt};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::{substream, StreamClass};
use crate::scalar::Real;

pub use samplers::{gaussian_ar1_chain, pareto_quantile, F1Sampler};

/// Slowly varying factor `l(x)` of a survival function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SlowlyVarying<F> {
    /// `l(x) = c` with `c > 0`; the pure Pareto case.
    Constant(F),
    /// `l(x) = e * alpha * ln x`, the factor of the explicit heavy-tail law
    /// with logarithmic correction (alpha is taken from the enclosing
    /// model).
    LogTimesE,
    /// `l(x) = (ln x)^beta`.
    PowLog(F),
    /// `l(x) = exp(sign * (ln x)^beta)` with `beta` in `(0, 1)`.
    ExpLogBeta { positive: bool, beta: F },
}

/// Regularly varying survival model `S(x) = x^(-alpha) l(x)` on
/// `[x_min, inf)`, normalized so `S(x_min) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailModel<F> {
    alpha: F,
    slowly_varying: SlowlyVarying<F>,
    x_min: F,
    /// Normalization so that `survival(x_min) = 1`.
    norm: F,
}

impl<F: Real> TailModel<F> {
    /// Validated constructor. Checks parameter ranges and verifies on a
    /// logarithmic grid that the survival function is nonincreasing, which
    /// rules out `x_min` inside the rising stretch of a slowly varying
    /// correction.
    pub fn new(alpha: F, slowly_varying: SlowlyVarying<F>, x_min: F) -> Result<Self> {
        if !alpha.is_finite() || alpha <= F::zero() {
            return Err(Error::invalid_parameter("alpha", format!("{alpha} not in (0, inf)")));
        }
        if !x_min.is_finite() || x_min <= F::zero() {
            return Err(Error::invalid_parameter("x_min", format!("{x_min} not in (0, inf)")));
        }
        match slowly_varying {
            SlowlyVarying::Constant(c) => {
                if !c.is_finite() || c <= F::zero() {
                    return Err(Error::invalid_parameter("slowly_varying", "constant must be positive"));
                }
            }
            SlowlyVarying::LogTimesE | SlowlyVarying::PowLog(_) => {
                if x_min <= F::one() {
                    return Err(Error::invalid_parameter(
                        "x_min",
                        "logarithmic slowly varying factors need x_min > 1",
                    ));
                }
                if let SlowlyVarying::PowLog(beta) = slowly_varying {
                    if !beta.is_finite() {
                        return Err(Error::invalid_parameter("slowly_varying", "beta must be finite"));
                    }
                }
            }
            SlowlyVarying::ExpLogBeta { beta, .. } => {
                if !(beta > F::zero() && beta < F::one()) {
                    return Err(Error::invalid_parameter("slowly_varying", format!("beta {beta} not in (0, 1)")));
                }
                if x_min < F::one() {
                    return Err(Error::invalid_parameter(
                        "x_min",
                        "exp-log slowly varying factors need x_min >= 1",
                    ));
                }
            }
        }
        let raw_at_min = raw_slowly_varying(alpha, slowly_varying, x_min);
        if !raw_at_min.is_finite() || raw_at_min <= F::zero() {
            return Err(Error::invalid_parameter("x_min", "l(x_min) must be positive and finite"));
        }
        let norm = x_min.powf(alpha) / raw_at_min;
        let model = TailModel { alpha, slowly_varying, x_min, norm };
        model.check_monotone_survival()?;
        Ok(model)
    }

    /// Pareto law with scale `x_min` and tail index `alpha`.
    pub fn pareto(x_min: F, alpha: F) -> Result<Self> {
        TailModel::new(alpha, SlowlyVarying::Constant(F::one()), x_min)
    }

    /// The explicit law `S(x) = x^(-alpha) ln(x) e alpha` on
    /// `[exp(1/alpha), inf)`, where the survival normalizes exactly to 1 at
    /// the left endpoint.
    pub fn log_corrected(alpha: F) -> Result<Self> {
        TailModel::new(alpha, SlowlyVarying::LogTimesE, (F::one() / alpha).exp())
    }

    pub fn alpha(&self) -> F {
        self.alpha
    }

    pub fn x_min(&self) -> F {
        self.x_min
    }

    pub fn slowly_varying(&self) -> SlowlyVarying<F> {
        self.slowly_varying
    }

    /// `P(X > x)`; 1 below `x_min`.
    pub fn survival(&self, x: F) -> F {
        if x <= self.x_min {
            return F::one();
        }
        self.norm * x.powf(-self.alpha) * raw_slowly_varying(self.alpha, self.slowly_varying, x)
    }

    /// `P(X <= x)`.
    pub fn cdf(&self, x: F) -> F {
        F::one() - self.survival(x)
    }

    /// The effective slowly varying factor `l(x)` such that
    /// `survival(x) = x^(-alpha) l(x)` (normalization included).
    pub fn slowly_varying_factor(&self, x: F) -> F {
        self.norm * raw_slowly_varying(self.alpha, self.slowly_varying, x)
    }

    /// Whether this model is the canonical log-corrected law (its `x_min`
    /// sits at `exp(1/alpha)`, where the density is exactly zero).
    pub fn is_canonical_log_corrected(&self) -> bool {
        if self.slowly_varying != SlowlyVarying::LogTimesE {
            return false;
        }
        let canonical = (F::one() / self.alpha).exp();
        (self.x_min - canonical).abs() <= F::of(1e-9) * canonical
    }

    /// True when `sample_into` supports this model.
    pub fn has_sampler(&self) -> bool {
        matches!(self.slowly_varying, SlowlyVarying::Constant(_)) || self.is_canonical_log_corrected()
    }

    /// Draw `n` values into `out` using `rng`. Supported for the Pareto
    /// family (inverse CDF) and the canonical log-corrected law
    /// (acceptance-rejection); other families have no sampler.
    pub fn sample_into<R: Rng>(&self, n: usize, rng: &mut R, out: &mut Vec<F>) -> Result<()> {
        match self.slowly_varying {
            SlowlyVarying::Constant(_) => {
                out.reserve(n);
                for _ in 0..n {
                    out.push(pareto_quantile(self.x_min, self.alpha, samplers::uniform_std(rng)));
                }
                Ok(())
            }
            SlowlyVarying::LogTimesE if self.is_canonical_log_corrected() => {
                let sampler = F1Sampler::new(self.alpha)?;
                out.reserve(n);
                for _ in 0..n {
                    out.push(sampler.draw(rng));
                }
                Ok(())
            }
            _ => Err(Error::Domain(
                "no direct sampler for this slowly varying family; only Pareto and the canonical log-corrected law are sampled".into(),
            )),
        }
    }

    fn check_monotone_survival(&self) -> Result<()> {
        let points = 256;
        let span = F::of(30.0); // covers x_min .. x_min * e^30
        let mut prev = F::one();
        for i in 1..=points {
            let t = F::of_usize(i) / F::of_usize(points);
            let x = self.x_min * (span * t).exp();
            let s = self.survival(x);
            if s > prev * (F::one() + F::of(1e-12)) {
                return Err(Error::invalid_parameter(
                    "x_min",
                    format!(
                        "survival increases near x = {x}; move x_min past the rising stretch of l(x)"
                    ),
                ));
            }
            prev = s;
        }
        Ok(())
    }
}

fn raw_slowly_varying<F: Real>(alpha: F, sv: SlowlyVarying<F>, x: F) -> F {
    match sv {
        SlowlyVarying::Constant(c) => c,
        SlowlyVarying::LogTimesE => F::E() * alpha * x.ln(),
        SlowlyVarying::PowLog(beta) => x.ln().powf(beta),
        SlowlyVarying::ExpLogBeta { positive, beta } => {
            let mag = x.ln().powf(beta);
            if positive {
                mag.exp()
            } else {
                (-mag).exp()
            }
        }
    }
}

/// Edge probability rule for generated graphs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum EdgeProb<F> {
    /// `p = mean_degree / (n - 1)`.
    MeanDegree(F),
    /// Fixed probability in `(0, 1]`.
    Fixed(F),
}

/// Parameters of the generated random graph in a network process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum GraphParams<F> {
    /// Erdos-Renyi with an explicit edge rule and optional per-node degree
    /// cap.
    ErdosRenyi { edge_prob: EdgeProb<F>, degree_cap: Option<u32> },
    /// The size-scaled design used by the simulation studies: mean degree
    /// 10 with cap 20 below 1000 nodes, mean degree 100 with cap 200 from
    /// 1000 nodes up.
    SizeScaled,
}

impl<F: Real> GraphParams<F> {
    /// Resolve to `(p, cap)` for a given node count.
    pub fn resolve(&self, n: usize) -> Result<(f64, Option<u32>)> {
        if n < 2 {
            return Err(Error::invalid_parameter("n", "graph needs at least 2 nodes"));
        }
        let (p, cap) = match *self {
            GraphParams::ErdosRenyi { edge_prob, degree_cap } => {
                let p = match edge_prob {
                    EdgeProb::MeanDegree(d) => d.as_f64() / (n as f64 - 1.0),
                    EdgeProb::Fixed(p) => p.as_f64(),
                };
                (p, degree_cap)
            }
            GraphParams::SizeScaled => {
                if n < 1000 {
                    (10.0 / (n as f64 - 1.0), Some(20))
                } else {
                    (100.0 / (n as f64 - 1.0), Some(200))
                }
            }
        };
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::invalid_parameter("edge_prob", format!("resolved p = {p} not in (0, 1]")));
        }
        Ok((p, cap))
    }
}

/// How a sequence of heavy-tailed values is generated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ProcessSpec<F> {
    /// Independent draws from one marginal.
    Iid(TailModel<F>),
    /// `X_t = beta1 X_{t-1} + eps_t` with heavy-tailed innovations,
    /// started at zero and run through `burn_in` steps before recording.
    Ar1 { beta1: F, noise: TailModel<F>, burn_in: usize },
    /// `Z_i = sqrt(rho) N_0 + sqrt(1 - rho) N_i` over standard normals and
    /// `X_i = (Z_i^2)^(-1/(2 alpha))`; one shared factor for the whole
    /// sequence.
    Equicorrelated { alpha: F, rho: F },
    /// `X_i = Z_i exp(G_i)` with Pareto(1, alpha) `Z` and a stationary
    /// Gaussian AR(1) `G` whose autocorrelation is
    /// `exp(-|i - j| / decay_length)`.
    GaussianModulated { alpha: F, decay_length: F },
    /// Mixture of two tail models: a Binomial(n, p_star) count of draws
    /// from the heavier `model_u`, the rest from `model_v`, interleaved by
    /// a seeded shuffle.
    Heterogeneous { p_star: F, model_u: TailModel<F>, model_v: TailModel<F> },
    /// Values attached to the nodes of a generated graph: each node gets an
    /// independent `z_model` draw plus the mean of its neighbors' draws.
    /// The graph is a function of `(seed, n)` only, so replicates vary the
    /// values on a fixed topology.
    Network { graph: GraphParams<F>, z_model: TailModel<F> },
}

/// Default burn-in for autoregressive sampling.
pub const DEFAULT_BURN_IN: usize = 10_000;

impl<F: Real> ProcessSpec<F> {
    /// AR(1) spec with the default burn-in.
    pub fn ar1(beta1: F, noise: TailModel<F>) -> Self {
        ProcessSpec::Ar1 { beta1, noise, burn_in: DEFAULT_BURN_IN }
    }

    /// Validate parameter ranges that the enum cannot enforce.
    pub fn validate(&self) -> Result<()> {
        match self {
            ProcessSpec::Iid(_) => Ok(()),
            ProcessSpec::Ar1 { beta1, .. } => {
                if !(*beta1 > F::zero() && *beta1 < F::one()) {
                    return Err(Error::invalid_parameter("beta1", format!("{beta1} not in (0, 1)")));
                }
                Ok(())
            }
            ProcessSpec::Equicorrelated { alpha, rho } => {
                if !(*alpha > F::zero() && *alpha < F::one()) {
                    return Err(Error::invalid_parameter("alpha", format!("{alpha} not in (0, 1)")));
                }
                if !(*rho >= F::zero() && *rho < F::one()) {
                    return Err(Error::invalid_parameter("rho", format!("{rho} not in [0, 1)")));
                }
                Ok(())
            }
            ProcessSpec::GaussianModulated { alpha, decay_length } => {
                if !(*alpha > F::zero() && *alpha < F::one()) {
                    return Err(Error::invalid_parameter("alpha", format!("{alpha} not in (0, 1)")));
                }
                if !(*decay_length > F::zero()) || !decay_length.is_finite() {
                    return Err(Error::invalid_parameter("decay_length", format!("{decay_length} not in (0, inf)")));
                }
                Ok(())
            }
            ProcessSpec::Heterogeneous { p_star, model_u, model_v } => {
                if !(*p_star > F::zero() && *p_star <= F::one()) {
                    return Err(Error::invalid_parameter("p_star", format!("{p_star} not in (0, 1]")));
                }
                if model_u.alpha() >= model_v.alpha() {
                    return Err(Error::invalid_parameter(
                        "model_u",
                        "mixture expects model_u strictly heavier (smaller alpha) than model_v",
                    ));
                }
                Ok(())
            }
            ProcessSpec::Network { .. } => Ok(()),
        }
    }

    /// Nominal tail index of the marginal law.
    pub fn nominal_alpha(&self) -> F {
        match self {
            ProcessSpec::Iid(m) => m.alpha(),
            ProcessSpec::Ar1 { noise, .. } => noise.alpha(),
            ProcessSpec::Equicorrelated { alpha, .. } => *alpha,
            ProcessSpec::GaussianModulated { alpha, .. } => *alpha,
            ProcessSpec::Heterogeneous { model_u, .. } => model_u.alpha(),
            ProcessSpec::Network { z_model, .. } => z_model.alpha(),
        }
    }

    /// Asymptotic approximation of the marginal survival as
    /// `scale * model.survival(x)` for large `x`. Used to place truncation
    /// thresholds for dependent sequences; the scale shifts thresholds by a
    /// bounded factor and is exact for i.i.d. sequences.
    pub fn marginal_tail(&self, n: usize) -> Result<MarginalTail<F>> {
        self.validate()?;
        let one = F::one();
        match self {
            ProcessSpec::Iid(m) => Ok(MarginalTail { model: m.clone(), scale: one }),
            // Stationary AR(1) with regularly varying innovations has
            // survival ~ S_eps(x) / (1 - beta1^alpha).
            ProcessSpec::Ar1 { beta1, noise, .. } => Ok(MarginalTail {
                model: noise.clone(),
                scale: one / (one - beta1.powf(noise.alpha())),
            }),
            // X = |Z|^(-1/alpha) with standard normal Z:
            // P(X > x) -> sqrt(2/pi) x^(-alpha).
            ProcessSpec::Equicorrelated { alpha, .. } => Ok(MarginalTail {
                model: TailModel::pareto(one, *alpha)?,
                scale: (F::of(2.0) / F::PI()).sqrt(),
            }),
            // P(Z e^G > x) ~ E[e^(alpha G)] S_Z(x) = e^(alpha^2/2) S_Z(x).
            ProcessSpec::GaussianModulated { alpha, .. } => Ok(MarginalTail {
                model: TailModel::pareto(one, *alpha)?,
                scale: (*alpha * *alpha / F::of(2.0)).exp(),
            }),
            // The heavier component dominates with its mixing weight.
            ProcessSpec::Heterogeneous { p_star, model_u, .. } => Ok(MarginalTail {
                model: model_u.clone(),
                scale: *p_star,
            }),
            // One own draw plus deg neighbor draws scaled by 1/deg:
            // P(X > x) ~ (1 + deg^(1-alpha)) S_Z(x) at the mean degree.
            ProcessSpec::Network { graph, z_model } => {
                let (p, _) = graph.resolve(n)?;
                let mean_deg = F::of(p * (n as f64 - 1.0));
                Ok(MarginalTail {
                    model: z_model.clone(),
                    scale: one + mean_deg.powf(one - z_model.alpha()),
                })
            }
        }
    }
}

/// Marginal tail approximation: `P(X > x) ~ scale * model.survival(x)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginalTail<F> {
    pub model: TailModel<F>,
    pub scale: F,
}

/// Where a sample set came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SampleOrigin<F> {
    /// Generated from a process specification.
    Process(ProcessSpec<F>),
    /// Generated from the one-sided stable law (no closed-form survival, so
    /// it is not expressible as a `TailModel`).
    StableOneSided { alpha: F, scale: F },
    /// Ingested data; the label identifies the source.
    Dataset { label: String },
}

/// A generated or ingested sample with its reproducibility record.
#[derive(Debug, Clone, Serialize)]
pub struct SampleSet<F> {
    pub values: Vec<F>,
    pub origin: SampleOrigin<F>,
    pub seed: u64,
    pub replicate_id: u64,
}

impl<F: Real> SampleSet<F> {
    /// Wrap ingested values.
    pub fn from_data(values: Vec<F>, label: impl Into<String>) -> Self {
        SampleSet { values, origin: SampleOrigin::Dataset { label: label.into() }, seed: 0, replicate_id: 0 }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Draw `n` i.i.d. Pareto values by inverse CDF.
pub fn sample_pareto<F: Real>(x_min: F, alpha: F, n: usize, seed: u64, replicate_id: u64) -> Result<SampleSet<F>> {
    let model = TailModel::pareto(x_min, alpha)?;
    sample_process(&ProcessSpec::Iid(model), n, seed, replicate_id)
}

/// Draw `n` i.i.d. values from the canonical log-corrected law.
pub fn sample_f1<F: Real>(alpha: F, n: usize, seed: u64, replicate_id: u64) -> Result<SampleSet<F>> {
    let model = TailModel::log_corrected(alpha)?;
    sample_process(&ProcessSpec::Iid(model), n, seed, replicate_id)
}

/// Draw `n` i.i.d. one-sided stable values with Laplace transform
/// `E[exp(-s X)] = exp(-(c s)^alpha)`, `alpha` in `(0, 1)`.
pub fn sample_stable_one_sided<F: Real>(alpha: F, c: F, n: usize, seed: u64, replicate_id: u64) -> Result<SampleSet<F>> {
    if !(alpha > F::zero() && alpha < F::one()) {
        return Err(Error::invalid_parameter("alpha", format!("{alpha} not in (0, 1)")));
    }
    if !(c > F::zero()) || !c.is_finite() {
        return Err(Error::invalid_parameter("c", format!("{c} not in (0, inf)")));
    }
    let mut rng = substream(seed, StreamClass::Sample, replicate_id);
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        values.push(c * samplers::stable_standard_draw(alpha, &mut rng));
    }
    Ok(SampleSet {
        values,
        origin: SampleOrigin::StableOneSided { alpha, scale: c },
        seed,
        replicate_id,
    })
}

/// Generate a sequence according to `spec`. Identical
/// `(spec, n, seed, replicate_id)` reproduce identical values bit for bit,
/// independent of thread count.
pub fn sample_process<F: Real>(spec: &ProcessSpec<F>, n: usize, seed: u64, replicate_id: u64) -> Result<SampleSet<F>> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::invalid_parameter("n", "sample size must be positive"));
    }
    let mut rng = substream(seed, StreamClass::Sample, replicate_id);
    let mut values = Vec::new();
    match spec {
        ProcessSpec::Iid(model) => {
            model.sample_into(n, &mut rng, &mut values)?;
        }
        ProcessSpec::Ar1 { beta1, noise, burn_in } => {
            let mut noise_buf = Vec::new();
            noise.sample_into(burn_in + n, &mut rng, &mut noise_buf)?;
            let mut x = F::zero();
            values.reserve(n);
            for (t, eps) in noise_buf.into_iter().enumerate() {
                x = *beta1 * x + eps;
                if t >= *burn_in {
                    values.push(x);
                }
            }
        }
        ProcessSpec::Equicorrelated { alpha, rho } => {
            let shared: F = samplers::standard_normal(&mut rng);
            let w_shared = rho.sqrt();
            let w_own = (F::one() - *rho).sqrt();
            let exponent = -F::one() / *alpha;
            values.reserve(n);
            for _ in 0..n {
                let z = w_shared * shared + w_own * samplers::standard_normal::<F, _>(&mut rng);
                values.push(z.abs().powf(exponent));
            }
        }
        ProcessSpec::GaussianModulated { alpha, decay_length } => {
            let g = gaussian_ar1_chain(n, *decay_length, &mut rng);
            values.reserve(n);
            for gi in g {
                let z = pareto_quantile(F::one(), *alpha, samplers::uniform_std(&mut rng));
                values.push(z * gi.exp());
            }
        }
        ProcessSpec::Heterogeneous { p_star, model_u, model_v } => {
            let count_u = rand_distr::Distribution::sample(
                &rand_distr::Binomial::new(n as u64, p_star.as_f64())
                    .map_err(|e| Error::invalid_parameter("p_star", e.to_string()))?,
                &mut rng,
            ) as usize;
            model_u.sample_into(count_u, &mut rng, &mut values)?;
            model_v.sample_into(n - count_u, &mut rng, &mut values)?;
            // Fisher-Yates interleave so population membership is not
            // positional.
            for i in (1..values.len()).rev() {
                let j = rng.random_range(0..=i);
                values.swap(i, j);
            }
        }
        ProcessSpec::Network { graph, z_model } => {
            let (p, cap) = graph.resolve(n)?;
            let g = crate::network::gen_erdos_renyi(n, p, cap, seed)?;
            let mut z = Vec::new();
            let mut zrng = substream(seed, StreamClass::NodeValues, replicate_id);
            z_model.sample_into(n, &mut zrng, &mut z)?;
            values = crate::network::propagate(&g, &z);
        }
    }
    Ok(SampleSet { values, origin: SampleOrigin::Process(spec.clone()), seed, replicate_id })
}
