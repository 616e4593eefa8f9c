use serde::{Deserialize, Serialize};
use statrs::function::beta::ln_beta;

use super::Model;
use crate::error::{BmaError, Result};

/// Prior on the single g-prior scale parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GMode {
    /// Fixed g = max{n, p²}.
    GBric,
    /// π(g) = (a−2)/(2n) · (1 + g/n)^(−a/2), a > 2.
    HyperGOverN { a: f64 },
}

impl GMode {
    pub fn is_hyper(&self) -> bool {
        matches!(self, GMode::HyperGOverN { .. })
    }
}

/// Beta-binomial model-space prior plus the g choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriorConfig {
    pub b: f64,
    pub c: f64,
    pub kappa: f64,
    pub g_mode: GMode,
}

impl PriorConfig {
    /// Solves (b, c) so that the prior model size has mean `kappa` and
    /// variance 2κ(p−κ)/p.
    pub fn new(p: usize, kappa: f64, g_mode: GMode) -> Result<Self> {
        if let GMode::HyperGOverN { a } = g_mode {
            if !(a > 2.0 && a.is_finite()) {
                return Err(BmaError::InvalidConfig(format!(
                    "hyper-g/n needs a > 2, got {a}"
                )));
            }
        }
        let (b, c) = solve_model_prior_hyperparams(p, kappa)?;
        Ok(Self {
            b,
            c,
            kappa,
            g_mode,
        })
    }
}

/// Log of the w-marginalised prior B(b + p_γ, c + p − p_γ) / B(b, c).
pub fn log_model_prior_size(size: usize, p: usize, b: f64, c: f64) -> f64 {
    assert!(size <= p, "model size {size} exceeds p = {p}");
    ln_beta(b + size as f64, c + (p - size) as f64) - ln_beta(b, c)
}

pub fn log_model_prior(model: &Model, prior: &PriorConfig, p: usize) -> f64 {
    log_model_prior_size(model.size(), p, prior.b, prior.c)
}

/// Mean and variance of the beta-binomial(p, b, c) model size.
pub fn beta_binomial_moments(p: usize, b: f64, c: f64) -> (f64, f64) {
    let p = p as f64;
    let s = b + c;
    (p * b / s, p * b * c * (s + p) / (s * s * (s + 1.0)))
}

const C_LOWER: f64 = 1e-6;
const C_UPPER: f64 = 1e6;
const BISECTION_TOL: f64 = 1e-12;

/// Finds (b, c) with beta-binomial mean `mean` and variance `variance`.
///
/// The mean equation gives b = mean·c/(p − mean); the variance equation is
/// then solved for c by bisection on [1e-6, 1e6].
pub fn solve_beta_binomial_moments(p: usize, mean: f64, variance: f64) -> Result<(f64, f64)> {
    let no_solution = || BmaError::NoSolution { p, mean, variance };
    let pf = p as f64;
    if !(mean > 0.0 && mean < pf && variance > 0.0) {
        return Err(no_solution());
    }
    let b_of = |c: f64| mean * c / (pf - mean);
    let residual = |c: f64| beta_binomial_moments(p, b_of(c), c).1 - variance;

    // The variance is decreasing in c once the mean is fixed.
    let (mut lo, mut hi) = (C_LOWER, C_UPPER);
    let (r_lo, r_hi) = (residual(lo), residual(hi));
    if !(r_lo > 0.0 && r_hi < 0.0) {
        return Err(no_solution());
    }
    for _ in 0..500 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= BISECTION_TOL * mid.max(1.0) || mid == lo || mid == hi {
            break;
        }
        if residual(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let c = 0.5 * (lo + hi);
    Ok((b_of(c), c))
}

pub fn solve_model_prior_hyperparams(p: usize, kappa: f64) -> Result<(f64, f64)> {
    let pf = p as f64;
    if !(kappa > 0.0 && kappa < pf) {
        return Err(BmaError::InvalidConfig(format!(
            "prior mean model size must lie in (0, {p}), got {kappa}"
        )));
    }
    solve_beta_binomial_moments(p, kappa, 2.0 * kappa * (pf - kappa) / pf)
}

/// log π(g) for the hyper-g/n prior.
pub fn log_g_prior(g: f64, n: usize, a: f64) -> f64 {
    let n = n as f64;
    ((a - 2.0) / (2.0 * n)).ln() - 0.5 * a * (g / n).ln_1p()
}

/// The benchmark choice g = max{n, p²}.
pub fn g_bric(n: usize, p: usize) -> f64 {
    n.max(p * p) as f64
}
