use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::kernel::{g_rwmh_step, gibbs_step, mc3_step};
use super::{
    is_hyper, selection_probabilities, AdaptationConfig, ChainConfig, Measure, Method, SamplerKind,
    SamplerState,
};
use crate::core_model::{Dataset, Model, PriorConfig};
use crate::error::{BmaError, Result};

/// Selection probabilities in force after a block boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct DSnapshot {
    pub block: usize,
    /// Number of thinned samples recorded at the boundary.
    pub t: u64,
    pub d: Vec<f64>,
}

/// Everything a chain produces.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainOutput {
    pub method: Method,
    pub seed: u64,
    /// Thinned, post-burn-in models.
    pub samples: Vec<Model>,
    /// Thinned g values; empty under g-BRIC.
    pub g_samples: Vec<f64>,
    pub d_snapshots: Vec<DSnapshot>,
    pub model_accept_count: u64,
    pub model_propose_count: u64,
    pub g_accept_count: u64,
    pub g_step_count: u64,
    pub invalid_count: u64,
    pub final_g_log_scale: f64,
    /// Wall-clock seconds spent in the sampling loop.
    pub cpu_seconds: f64,
}

impl ChainOutput {
    /// T, the thinned sample count.
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn p(&self) -> usize {
        self.samples.first().map_or(0, Model::p)
    }

    /// Between-model acceptance rate Ã; `None` for Gibbs, which has no
    /// accept/reject step.
    pub fn model_accept_rate(&self) -> Option<f64> {
        match self.method.kind {
            SamplerKind::Mc3 if self.model_propose_count > 0 => {
                Some(self.model_accept_count as f64 / self.model_propose_count as f64)
            }
            _ => None,
        }
    }

    pub fn g_accept_rate(&self) -> Option<f64> {
        (self.g_step_count > 0).then(|| self.g_accept_count as f64 / self.g_step_count as f64)
    }

    /// Equality of everything except timing.
    pub fn same_draws(&self, other: &ChainOutput) -> bool {
        let mut a = self.clone();
        a.cpu_seconds = other.cpu_seconds;
        a == *other
    }
}

/// Recomputes the selection probabilities at a block boundary.
///
/// Nothing happens unless the measure is adaptive, `thinned_index` closes a
/// block, and that block is at least `start_block`. Returns whether `d`
/// changed.
pub fn maybe_adapt(state: &mut SamplerState, cfg: &AdaptationConfig, thinned_index: u64) -> bool {
    if cfg.measure == Measure::None
        || thinned_index == 0
        || !thinned_index.is_multiple_of(cfg.block_len as u64)
    {
        return false;
    }
    let block = (thinned_index / cfg.block_len as u64) as usize;
    if block < cfg.start_block {
        return false;
    }
    let w = match cfg.measure {
        Measure::SampleVariance => state.stats.variances(),
        Measure::InclusionFrequency => state.stats.means(),
        Measure::None => unreachable!(),
    };
    let epsilon = cfg.epsilon_at(block, w.len());
    state.sel = selection_probabilities(&w, epsilon)
        .expect("streaming measures are finite and non-negative")
        .with_block_index(block);
    true
}

/// Runs a chain seeded from `cfg.seed` with ChaCha8.
pub fn run_chain(cfg: &ChainConfig, data: &Dataset, prior: &PriorConfig) -> Result<ChainOutput> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    run_chain_with_rng(cfg, data, prior, &mut rng)
}

pub fn run_chain_with_rng<R: Rng + ?Sized>(
    cfg: &ChainConfig,
    data: &Dataset,
    prior: &PriorConfig,
    rng: &mut R,
) -> Result<ChainOutput> {
    cfg.validate()?;
    if data.p() == 0 {
        return Err(BmaError::InvalidDataset("no regressors".into()));
    }
    let p = data.p();
    let adapt = &cfg.adaptation;
    let mut state = SamplerState::initial(data, prior, adapt.epsilon_at(1, p))?;
    let hyper = is_hyper(prior);
    let expected = ((cfg.iterations - cfg.burn_in) / cfg.thin) as usize;
    let mut samples = Vec::with_capacity(expected);
    let mut g_samples = Vec::with_capacity(if hyper { expected } else { 0 });
    let mut d_snapshots = Vec::new();
    let mut thinned = 0u64;

    let start = Instant::now();
    for it in 0..cfg.iterations {
        match cfg.kind {
            SamplerKind::Mc3 => {
                mc3_step(&mut state, data, prior, rng);
            }
            SamplerKind::Gibbs => gibbs_step(&mut state, data, prior, rng),
        }
        if hyper {
            g_rwmh_step(&mut state, data, prior, rng);
        }
        if it < cfg.burn_in || !(it - cfg.burn_in + 1).is_multiple_of(cfg.thin) {
            continue;
        }
        samples.push(state.model.clone());
        if hyper {
            g_samples.push(state.g);
        }
        state.stats.record(&state.model);
        thinned += 1;
        if thinned.is_multiple_of(adapt.block_len as u64) {
            maybe_adapt(&mut state, adapt, thinned);
            d_snapshots.push(DSnapshot {
                block: (thinned / adapt.block_len as u64) as usize,
                t: thinned,
                d: state.sel.d().to_vec(),
            });
        }
    }
    let cpu_seconds = start.elapsed().as_secs_f64();

    if state.invalid_count > 0 {
        log::debug!(
            "{} (seed {}): {} proposals fell outside the valid model space",
            cfg.method(),
            cfg.seed,
            state.invalid_count
        );
    }
    Ok(ChainOutput {
        method: cfg.method(),
        seed: cfg.seed,
        samples,
        g_samples,
        d_snapshots,
        model_accept_count: state.model_accept_count,
        model_propose_count: state.model_propose_count,
        g_accept_count: state.g_accept_count,
        g_step_count: state.g_step_count,
        invalid_count: state.invalid_count,
        final_g_log_scale: state.g_log_scale,
        cpu_seconds,
    })
}
