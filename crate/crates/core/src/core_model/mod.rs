//! Analytic posterior ingredients shared by the samplers and the
//! enumeration oracle: the g-prior marginal likelihood, the beta-binomial
//! model prior and the two priors on g.

pub(crate) mod dataset;
mod likelihood;
mod model;
mod prior;

pub use dataset::Dataset;
pub use likelihood::{
    fit_quadratic_form, log_marginal_from_fit, log_marginal_likelihood, RCOND_THRESHOLD,
};
pub use model::Model;
pub use prior::{
    beta_binomial_moments, g_bric, log_g_prior, log_model_prior, log_model_prior_size,
    solve_beta_binomial_moments, solve_model_prior_hyperparams, GMode, PriorConfig,
};

use crate::error::Result;

/// The pieces of the joint log density at (γ, g).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PosteriorTerms {
    /// y'X_γ(X_γ'X_γ)⁻¹X_γ'y, kept so g can move without refactoring.
    pub fit: f64,
    pub log_marginal: f64,
    pub log_model_prior: f64,
    /// Zero under g-BRIC.
    pub log_g_prior: f64,
}

impl PosteriorTerms {
    pub fn total(&self) -> f64 {
        self.log_marginal + self.log_model_prior + self.log_g_prior
    }
}

/// g prior term, zero when g is fixed.
pub fn log_g_term(g: f64, n: usize, prior: &PriorConfig) -> f64 {
    match prior.g_mode {
        GMode::GBric => 0.0,
        GMode::HyperGOverN { a } => log_g_prior(g, n, a),
    }
}

pub fn posterior_terms(
    model: &Model,
    g: f64,
    data: &Dataset,
    prior: &PriorConfig,
) -> Result<PosteriorTerms> {
    let fit = fit_quadratic_form(model, data)?;
    Ok(PosteriorTerms {
        fit,
        log_marginal: log_marginal_from_fit(fit, model.size(), g, data)?,
        log_model_prior: log_model_prior(model, prior, data.p()),
        log_g_prior: log_g_term(g, data.n(), prior),
    })
}

/// Unnormalised joint log density log π(y|γ,g) + log π(γ) [+ log π(g)].
pub fn log_posterior_unnorm(
    model: &Model,
    g: f64,
    data: &Dataset,
    prior: &PriorConfig,
) -> Result<f64> {
    posterior_terms(model, g, data, prior).map(|t| t.total())
}
