//! Exact posterior over model space by exhaustive enumeration, for small p.

use crate::core_model::{
    fit_quadratic_form, log_g_prior, log_marginal_from_fit, log_model_prior_size,
    log_posterior_unnorm, Dataset, GMode, Model, PriorConfig,
};
use crate::error::{BmaError, Result};
use crate::exec::{map_range, Execution};

pub const MAX_ENUMERATION_P: usize = 20;
pub const MAX_HYPER_GRID_P: usize = 15;

/// Normalised posterior over all 2^p models.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactPosterior {
    /// Indexed by `Model::to_mask`; invalid models carry `-inf`.
    pub log_probs: Vec<f64>,
    pub pips: Vec<f64>,
    /// Conditioning g, or `None` when g has been integrated over a grid.
    pub g: Option<f64>,
}

impl ExactPosterior {
    fn from_unnormalised(p: usize, log_weights: Vec<f64>, g: Option<f64>) -> Self {
        let log_norm = log_sum_exp(&log_weights);
        let log_probs: Vec<f64> = log_weights.into_iter().map(|w| w - log_norm).collect();
        let mut pips = vec![0.0; p];
        for (mask, lp) in log_probs.iter().enumerate() {
            let prob = lp.exp();
            for (i, pip) in pips.iter_mut().enumerate() {
                if mask >> i & 1 == 1 {
                    *pip += prob;
                }
            }
        }
        Self { log_probs, pips, g }
    }

    pub fn p(&self) -> usize {
        self.pips.len()
    }

    pub fn prob(&self, model: &Model) -> f64 {
        self.log_probs[model.to_mask() as usize].exp()
    }

    /// The `k` most probable models, most probable first (ties by mask).
    pub fn top_models(&self, k: usize) -> Vec<(Model, f64)> {
        let mut order: Vec<usize> = (0..self.log_probs.len()).collect();
        order.sort_by(|&a, &b| {
            self.log_probs[b]
                .total_cmp(&self.log_probs[a])
                .then(a.cmp(&b))
        });
        order
            .into_iter()
            .take(k)
            .map(|mask| {
                (
                    Model::from_mask(self.p(), mask as u64),
                    self.log_probs[mask],
                )
            })
            .collect()
    }
}

/// Sequential log-sum-exp over the values in order.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// Exact posterior model probabilities and PIPs at fixed g.
pub fn enumerate_posterior(data: &Dataset, prior: &PriorConfig, g: f64) -> Result<ExactPosterior> {
    enumerate_posterior_with(Execution::default(), data, prior, g)
}

pub fn enumerate_posterior_with(
    exec: Execution,
    data: &Dataset,
    prior: &PriorConfig,
    g: f64,
) -> Result<ExactPosterior> {
    let p = data.p();
    if p > MAX_ENUMERATION_P {
        return Err(BmaError::TooManyVariables {
            p,
            max: MAX_ENUMERATION_P,
        });
    }
    // Conditioning on g: the g-prior term is a constant and is left out.
    let conditional = PriorConfig {
        g_mode: GMode::GBric,
        ..*prior
    };
    let log_weights = map_range(exec, 0..1 << p, |mask| {
        log_posterior_unnorm(&Model::from_mask(p, mask as u64), g, data, &conditional)
            .unwrap_or(f64::NEG_INFINITY)
    });
    Ok(ExactPosterior::from_unnormalised(p, log_weights, Some(g)))
}

/// Log-spaced grid on [lo, hi] with trapezoid weights for ∫ π(g) dg under
/// the hyper-g/n prior with parameters (n, a).
pub fn hyper_g_grid(points: usize, lo: f64, hi: f64, n: usize, a: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(points >= 2 && lo > 0.0 && hi > lo);
    let (ulo, uhi) = (lo.ln(), hi.ln());
    let h = (uhi - ulo) / (points - 1) as f64;
    let grid: Vec<f64> = (0..points).map(|k| (ulo + k as f64 * h).exp()).collect();
    let weights = grid
        .iter()
        .enumerate()
        .map(|(k, &g)| {
            let end = if k == 0 || k == points - 1 { 0.5 } else { 1.0 };
            // dg = g du
            end * h * g * log_g_prior(g, n, a).exp()
        })
        .collect();
    (grid, weights)
}

/// Posterior over models with g integrated out by quadrature.
///
/// Each grid point contributes weight(g)·π(y|γ,g)·π(γ), so points are
/// weighted by both the prior mass and the evidence at that g.
pub fn enumerate_hyper_g(
    data: &Dataset,
    prior: &PriorConfig,
    g_grid: &[f64],
    g_weights: &[f64],
) -> Result<ExactPosterior> {
    let p = data.p();
    if p > MAX_HYPER_GRID_P {
        return Err(BmaError::TooManyVariables {
            p,
            max: MAX_HYPER_GRID_P,
        });
    }
    if g_grid.is_empty() || g_grid.len() != g_weights.len() {
        return Err(BmaError::InvalidConfig(
            "g grid and weights must be non-empty and equally long".into(),
        ));
    }
    if g_grid.len() == 1 {
        let mut exact = enumerate_posterior(data, prior, g_grid[0])?;
        exact.g = None;
        return Ok(exact);
    }
    let log_w: Vec<f64> = g_weights.iter().map(|w| w.ln()).collect();
    let log_weights = map_range(Execution::default(), 0..1 << p, |mask| {
        let model = Model::from_mask(p, mask as u64);
        let Ok(fit) = fit_quadratic_form(&model, data) else {
            return f64::NEG_INFINITY;
        };
        let log_prior = log_model_prior_size(model.size(), p, prior.b, prior.c);
        let per_g: Vec<f64> = g_grid
            .iter()
            .zip(&log_w)
            .map(|(&g, lw)| {
                log_marginal_from_fit(fit, model.size(), g, data)
                    .map_or(f64::NEG_INFINITY, |lm| lm + lw)
            })
            .collect();
        log_sum_exp(&per_g) + log_prior
    });
    Ok(ExactPosterior::from_unnormalised(p, log_weights, None))
}

/// Hyper-g marginal PIPs by quadrature over `g_grid`.
pub fn exact_pip_given_g_grid(
    data: &Dataset,
    prior: &PriorConfig,
    g_grid: &[f64],
    g_weights: &[f64],
) -> Result<Vec<f64>> {
    enumerate_hyper_g(data, prior, g_grid, g_weights).map(|e| e.pips)
}
