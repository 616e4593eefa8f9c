//! MC³ and Gibbs samplers on model space, their adaptive variants, and the
//! random-walk Metropolis step for g under the hyper-g/n prior.
//!
//! The adaptive samplers periodically replace the uniform coordinate
//! selection probabilities by d_i ∝ (1 − ε)·w_i + ε, where w is either the
//! running sample variance or the running inclusion frequency of each γ_i.
//! Adaptation happens only at block boundaries measured in thinned,
//! post-burn-in samples.

mod chain;
mod kernel;
mod selection;
mod stats;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use chain::{maybe_adapt, run_chain, run_chain_with_rng, ChainOutput, DSnapshot};
pub use kernel::{
    g_log_acceptance_ratio, g_rwmh_step, gibbs_inclusion_probability, gibbs_step,
    mc3_acceptance_probability, mc3_step, transition_matrix, tune_g_scale, TARGET_G_ACCEPTANCE,
};
pub use selection::{selection_probabilities, SelectionProbs};
pub use stats::StreamingStats;

use crate::core_model::{posterior_terms, Dataset, GMode, Model, PosteriorTerms, PriorConfig};
use crate::error::{BmaError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SamplerKind {
    Mc3,
    Gibbs,
}

/// Descriptive measure w fed into the selection probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Measure {
    SampleVariance,
    InclusionFrequency,
    /// No adaptation: plain MC³ / Gibbs.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EpsilonSchedule {
    Fixed(f64),
    /// ε_b = 1/(b·p) at block b.
    Decreasing,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptationConfig {
    pub measure: Measure,
    /// Thinned samples per block.
    pub block_len: usize,
    /// First block at which d is adapted.
    pub start_block: usize,
    pub epsilon: EpsilonSchedule,
}

impl AdaptationConfig {
    pub fn none() -> Self {
        Self {
            measure: Measure::None,
            block_len: 1000,
            start_block: 10,
            epsilon: EpsilonSchedule::Decreasing,
        }
    }

    pub fn epsilon_at(&self, block: usize, p: usize) -> f64 {
        match self.epsilon {
            EpsilonSchedule::Fixed(e) => e,
            EpsilonSchedule::Decreasing => 1.0 / (block.max(1) as f64 * p as f64),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.block_len == 0 || self.start_block == 0 {
            return Err(BmaError::InvalidConfig(
                "block_len and start_block must be >= 1".into(),
            ));
        }
        if let EpsilonSchedule::Fixed(e) = self.epsilon {
            if !(e > 0.0 && e < 1.0) {
                return Err(BmaError::InvalidConfig(format!(
                    "epsilon must lie in (0, 1), got {e}"
                )));
            }
        }
        Ok(())
    }
}

/// A sampler kind paired with its adaptation measure, e.g. ADMC³(s²).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Method {
    pub kind: SamplerKind,
    pub measure: Measure,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::new(SamplerKind::Mc3, Measure::None),
        Method::new(SamplerKind::Mc3, Measure::SampleVariance),
        Method::new(SamplerKind::Mc3, Measure::InclusionFrequency),
        Method::new(SamplerKind::Gibbs, Measure::None),
        Method::new(SamplerKind::Gibbs, Measure::SampleVariance),
        Method::new(SamplerKind::Gibbs, Measure::InclusionFrequency),
    ];

    pub const fn new(kind: SamplerKind, measure: Measure) -> Self {
        Self { kind, measure }
    }

    pub fn is_adaptive(&self) -> bool {
        self.measure != Measure::None
    }

    /// The non-adaptive sampler of the same kind.
    pub fn baseline(&self) -> Method {
        Method::new(self.kind, Measure::None)
    }

    /// File-name friendly identifier, also accepted by `FromStr`.
    pub fn slug(&self) -> &'static str {
        match (self.kind, self.measure) {
            (SamplerKind::Mc3, Measure::None) => "mc3",
            (SamplerKind::Mc3, Measure::SampleVariance) => "admc3-s2",
            (SamplerKind::Mc3, Measure::InclusionFrequency) => "admc3-m",
            (SamplerKind::Gibbs, Measure::None) => "gibbs",
            (SamplerKind::Gibbs, Measure::SampleVariance) => "adgibbs-s2",
            (SamplerKind::Gibbs, Measure::InclusionFrequency) => "adgibbs-m",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match (self.kind, self.measure) {
            (SamplerKind::Mc3, Measure::None) => "MC3",
            (SamplerKind::Mc3, Measure::SampleVariance) => "ADMC3(s2)",
            (SamplerKind::Mc3, Measure::InclusionFrequency) => "ADMC3(m)",
            (SamplerKind::Gibbs, Measure::None) => "Gibbs",
            (SamplerKind::Gibbs, Measure::SampleVariance) => "ADGibbs(s2)",
            (SamplerKind::Gibbs, Measure::InclusionFrequency) => "ADGibbs(m)",
        };
        f.write_str(name)
    }
}

impl FromStr for Method {
    type Err = BmaError;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        Method::ALL
            .into_iter()
            .find(|m| m.slug() == key || m.to_string().to_ascii_lowercase() == key)
            .ok_or_else(|| BmaError::InvalidConfig(format!("unknown sampler `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainConfig {
    /// Total iterations, burn-in included.
    pub iterations: u64,
    pub burn_in: u64,
    pub thin: u64,
    pub seed: u64,
    pub kind: SamplerKind,
    pub adaptation: AdaptationConfig,
}

impl ChainConfig {
    /// 200,000 iterations, 10,000 burn-in, thin 10, blocks of 1,000 thinned
    /// samples with adaptation from block 10.
    pub fn desk(method: Method, p: usize, seed: u64) -> Self {
        Self::preset(method, p, seed, 200_000, 10_000)
    }

    /// 2,000,000 iterations with 100,000 burn-in; otherwise as `desk`.
    pub fn paper(method: Method, p: usize, seed: u64) -> Self {
        Self::preset(method, p, seed, 2_000_000, 100_000)
    }

    fn preset(method: Method, p: usize, seed: u64, iterations: u64, burn_in: u64) -> Self {
        Self {
            iterations,
            burn_in,
            thin: 10,
            seed,
            kind: method.kind,
            adaptation: AdaptationConfig {
                measure: method.measure,
                block_len: 1000,
                start_block: 10,
                epsilon: EpsilonSchedule::Fixed(1.0 / p as f64),
            },
        }
    }

    pub fn method(&self) -> Method {
        Method::new(self.kind, self.adaptation.measure)
    }

    pub fn validate(&self) -> Result<()> {
        if self.burn_in >= self.iterations {
            return Err(BmaError::InvalidConfig(format!(
                "burn-in ({}) must be smaller than iterations ({})",
                self.burn_in, self.iterations
            )));
        }
        if self.thin == 0 {
            return Err(BmaError::InvalidConfig("thin must be >= 1".into()));
        }
        self.adaptation.validate()
    }
}

/// Full mutable state of one chain.
#[derive(Debug, Clone)]
pub struct SamplerState {
    pub model: Model,
    pub g: f64,
    /// Cached posterior terms at (model, g).
    pub terms: PosteriorTerms,
    pub sel: SelectionProbs,
    pub stats: StreamingStats,
    /// Log of the random-walk scale for log g.
    pub g_log_scale: f64,
    pub g_step_count: u64,
    pub g_accept_count: u64,
    pub model_accept_count: u64,
    pub model_propose_count: u64,
    /// Proposals whose posterior could not be evaluated.
    pub invalid_count: u64,
}

impl SamplerState {
    pub fn new(
        model: Model,
        g: f64,
        sel: SelectionProbs,
        data: &Dataset,
        prior: &PriorConfig,
    ) -> Result<Self> {
        let terms = posterior_terms(&model, g, data, prior)?;
        Ok(Self {
            stats: StreamingStats::new(model.p()),
            model,
            g,
            terms,
            sel,
            g_log_scale: 0.0,
            g_step_count: 0,
            g_accept_count: 0,
            model_accept_count: 0,
            model_propose_count: 0,
            invalid_count: 0,
        })
    }

    /// Empty model, uniform selection, and g = max{n, p²}.
    pub fn initial(data: &Dataset, prior: &PriorConfig, epsilon: f64) -> Result<Self> {
        let g = crate::core_model::g_bric(data.n(), data.p());
        Self::new(
            Model::empty(data.p()),
            g,
            SelectionProbs::uniform(data.p(), epsilon),
            data,
            prior,
        )
    }

    pub fn log_post(&self) -> f64 {
        self.terms.total()
    }

    /// Recomputes the cached log posterior and returns the absolute drift.
    pub fn audit(&self, data: &Dataset, prior: &PriorConfig) -> Result<f64> {
        let fresh = posterior_terms(&self.model, self.g, data, prior)?;
        Ok((fresh.total() - self.log_post()).abs())
    }
}

pub(crate) fn is_hyper(prior: &PriorConfig) -> bool {
    matches!(prior.g_mode, GMode::HyperGOverN { .. })
}
