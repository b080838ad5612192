//! Statistics for heavy-tailed data with possibly infinite mean.
//!
//! When observations follow a power law `P(X > x) = x^(-alpha) l(x)` with
//! tail index `alpha` in `(0, 1)` and slowly varying `l`, neither the mean
//! nor the variance converges, yet ratios of log sample moments settle on
//! finite limits: the log of the sample variance over the log of the sample
//! mean tends to `(2 - alpha) / (1 - alpha)`, and more generally
//! `log M_{n,h} / log M_{n,k} -> (h - alpha) / (k - alpha)`. Those limits
//! turn the classic power-law scaling of variance against mean into an
//! estimator of the tail index, and they persist under a broad range of
//! dependence structures.
//!
//! The crate provides:
//!
//! - [`distributions`]: validated tail models and reproducible samplers for
//!   i.i.d., autoregressive, equicorrelated, modulated, mixed, and
//!   network-propagated sequences;
//! - [`moments`]: raw, central, and semivariance summaries with compensated
//!   summation, plus the log-moment ratios and their theoretical limits;
//! - [`tailfit`]: Hill and smoothed alternative Hill curves with bootstrap
//!   bands, Pareto least-squares, generalized Pareto MLE, and negative
//!   binomial fits;
//! - [`network`]: sparse graphs, Erdos-Renyi generation under a degree cap,
//!   BFS distances, value propagation, and edge-list ingestion;
//! - [`asymptotics`]: truncation thresholds, truncated-moment theory, and a
//!   Monte Carlo probe of the covariance-sum condition used by the limit
//!   theorems under dependence;
//! - [`analysis`]: the size-sweep pipeline that regresses log variance on
//!   log mean and reports the implied tail index.
//!
//! Everything that consumes randomness takes an explicit `(seed,
//! replicate_id)` pair and derives an independent ChaCha substream from it,
//! so results are bit-for-bit reproducible regardless of thread count.
//!
//! Numeric routines are generic over the scalar type through the [`Real`]
//! trait (implemented for `f32` and `f64`); the type aliases at the crate
//! root fix the common `f64` instantiations.

pub mod analysis;
pub mod asymptotics;
pub mod distributions;
pub mod error;
pub mod moments;
pub mod network;
pub mod scalar;
pub mod special;
pub mod sum;
pub mod tailfit;

mod rng;

pub use error::{Error, Result};
pub use scalar::Real;

/// `f64` tail model.
pub type TailModel64 = distributions::TailModel<f64>;
/// `f64` process specification.
pub type ProcessSpec64 = distributions::ProcessSpec<f64>;
/// `f64` sample set.
pub type SampleSet64 = distributions::SampleSet<f64>;
/// `f64` moment summary.
pub type MomentSummary64 = moments::MomentSummary<f64>;
/// `f64` Hill curve.
pub type HillCurve64 = tailfit::HillCurve<f64>;
/// `f64` fit result.
pub type FitResult64 = tailfit::FitResult<f64>;
/// `f64` Taylor regression.
pub type TaylorRegression64 = analysis::TaylorRegression<f64>;
