//! Flag groups shared by `simulate` and `probe`: a marginal family plus an
//! optional dependence structure, mapped onto the library's process specs.

use clap::{Args, ValueEnum};
use heavytail::distributions::{EdgeProb, GraphParams, ProcessSpec};
use heavytail::{Error, Result, TailModel64};
use serde::Serialize;

pub fn bad(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name, reason: reason.into() }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dist {
    /// Pareto on [x_min, inf) with survival (x/x_min)^-alpha.
    Pareto,
    /// Pareto with a logarithmic survival correction.
    LogCorrected,
    /// One-sided stable law with Laplace transform exp(-(c s)^alpha).
    Stable,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Process {
    Iid,
    Ar1,
    Equicorrelated,
    GaussianModulated,
    Heterogeneous,
    Network,
}

#[derive(Clone, Args, Serialize)]
pub struct MarginArgs {
    /// Marginal family (the innovation family for dependent processes).
    #[arg(long, value_enum, default_value = "pareto")]
    pub dist: Dist,

    /// Tail index in (0, 1).
    #[arg(long)]
    pub alpha: f64,

    /// Support start for the pareto family; defaults to 1.
    #[arg(long)]
    pub x_min: Option<f64>,

    /// Scale c of the stable family.
    #[arg(long)]
    pub stable_scale: Option<f64>,
}

impl MarginArgs {
    pub fn tail_model(&self) -> Result<TailModel64> {
        if self.stable_scale.is_some() && self.dist != Dist::Stable {
            return Err(bad("stable_scale", "only meaningful with --dist stable"));
        }
        match self.dist {
            Dist::Pareto => TailModel64::pareto(self.x_min.unwrap_or(1.0), self.alpha),
            Dist::LogCorrected => {
                if self.x_min.is_some() {
                    return Err(bad("x_min", "the log-corrected family fixes its own support start"));
                }
                TailModel64::log_corrected(self.alpha)
            }
            Dist::Stable => {
                Err(bad("dist", "the stable family has no closed survival; it is only available where a direct sampler applies (simulate with --process iid)"))
            }
        }
    }

    fn model_with_alpha(&self, alpha: f64) -> Result<TailModel64> {
        match self.dist {
            Dist::Pareto => TailModel64::pareto(self.x_min.unwrap_or(1.0), alpha),
            Dist::LogCorrected => TailModel64::log_corrected(alpha),
            Dist::Stable => unreachable!("rejected before mixture construction"),
        }
    }
}

#[derive(Clone, Args, Serialize)]
pub struct ProcessArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub margin: MarginArgs,

    /// Dependence structure.
    #[arg(long, value_enum, default_value = "iid")]
    pub process: Process,

    /// AR coefficient for --process ar1.
    #[arg(long, default_value_t = 0.8)]
    pub beta1: f64,

    /// Common correlation for --process equicorrelated.
    #[arg(long, default_value_t = 0.1)]
    pub rho: f64,

    /// Correlation length for --process gaussian-modulated.
    #[arg(long, default_value_t = 100.0)]
    pub decay: f64,

    /// Lighter-tail index for --process heterogeneous.
    #[arg(long)]
    pub alpha2: Option<f64>,

    /// Heavy-component weight for --process heterogeneous.
    #[arg(long, default_value_t = 0.6)]
    pub p_star: f64,

    /// Mean degree of the graph for --process network.
    #[arg(long, default_value_t = 10.0)]
    pub mean_degree: f64,

    /// Per-node degree cap for --process network.
    #[arg(long)]
    pub degree_cap: Option<u32>,

    /// Use the size-scaled graph family (degree and cap grow with n) for
    /// --process network.
    #[arg(long)]
    pub size_scaled: bool,
}

impl ProcessArgs {
    /// True when the command should bypass process construction and draw
    /// straight from the stable sampler.
    pub fn wants_stable(&self) -> bool {
        self.margin.dist == Dist::Stable && self.process == Process::Iid
    }

    pub fn build_spec(&self) -> Result<ProcessSpec<f64>> {
        let margin = &self.margin;
        let spec = match self.process {
            Process::Iid => ProcessSpec::Iid(margin.tail_model()?),
            Process::Ar1 => ProcessSpec::ar1(self.beta1, margin.tail_model()?),
            Process::Equicorrelated => {
                self.require_unit_pareto()?;
                ProcessSpec::Equicorrelated { alpha: margin.alpha, rho: self.rho }
            }
            Process::GaussianModulated => {
                self.require_unit_pareto()?;
                ProcessSpec::GaussianModulated { alpha: margin.alpha, decay_length: self.decay }
            }
            Process::Heterogeneous => {
                if margin.dist == Dist::Stable {
                    return Err(bad("dist", "mixtures need a survival function; use pareto or log-corrected"));
                }
                let alpha2 = self
                    .alpha2
                    .ok_or_else(|| bad("alpha2", "required for --process heterogeneous"))?;
                ProcessSpec::Heterogeneous {
                    p_star: self.p_star,
                    model_u: margin.tail_model()?,
                    model_v: margin.model_with_alpha(alpha2)?,
                }
            }
            Process::Network => {
                let graph = if self.size_scaled {
                    GraphParams::SizeScaled
                } else {
                    GraphParams::ErdosRenyi {
                        edge_prob: EdgeProb::MeanDegree(self.mean_degree),
                        degree_cap: self.degree_cap,
                    }
                };
                ProcessSpec::Network { graph, z_model: margin.tail_model()? }
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    /// The exchangeable and modulated processes are built on a unit-scale
    /// Pareto marginal; reject flags that would silently not apply.
    fn require_unit_pareto(&self) -> Result<()> {
        if self.margin.dist != Dist::Pareto {
            return Err(bad("dist", "this process pins its own marginal; use --dist pareto"));
        }
        match self.margin.x_min {
            None => Ok(()),
            Some(x) if x == 1.0 => Ok(()),
            Some(_) => Err(bad("x_min", "fixed at 1 for this process")),
        }
    }
}
