use rand::Rng;
use rand_distr::StandardNormal;

use super::{is_hyper, SamplerKind, SamplerState};
use crate::core_model::{log_g_term, log_marginal_from_fit, posterior_terms, Dataset, PriorConfig};

/// Target acceptance rate of the random-walk step for g.
pub const TARGET_G_ACCEPTANCE: f64 = 0.44;

/// min{1, π(γ')/π(γ)}. The selection probability of the flipped coordinate
/// is the same in both directions, so it cancels.
pub fn mc3_acceptance_probability(log_post_from: f64, log_post_to: f64) -> f64 {
    let delta = log_post_to - log_post_from;
    if delta >= 0.0 {
        1.0
    } else {
        delta.exp()
    }
}

/// Probability of setting γ_i = 1: p_i/(1 + p_i) with log p_i = `log_post_in
/// − log_post_out`, evaluated as a logistic to avoid overflow.
pub fn gibbs_inclusion_probability(log_post_in: f64, log_post_out: f64) -> f64 {
    if log_post_in == f64::NEG_INFINITY {
        return 0.0;
    }
    if log_post_out == f64::NEG_INFINITY {
        return 1.0;
    }
    let x = log_post_in - log_post_out;
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// One single-flip Metropolis–Hastings update of γ. Returns whether the
/// proposal was accepted.
pub fn mc3_step<R: Rng + ?Sized>(
    state: &mut SamplerState,
    data: &Dataset,
    prior: &PriorConfig,
    rng: &mut R,
) -> bool {
    let i = state.sel.sample(rng);
    state.model_propose_count += 1;
    let proposal = state.model.flipped(i);
    let u: f64 = rng.random();
    match posterior_terms(&proposal, state.g, data, prior) {
        Ok(terms) => {
            if u < mc3_acceptance_probability(state.log_post(), terms.total()) {
                state.model = proposal;
                state.terms = terms;
                state.model_accept_count += 1;
                true
            } else {
                false
            }
        }
        Err(err) => {
            state.invalid_count += 1;
            log::trace!("rejecting proposal {proposal}: {err}");
            false
        }
    }
}

/// One random-scan Gibbs update of γ_i from its full conditional.
pub fn gibbs_step<R: Rng + ?Sized>(
    state: &mut SamplerState,
    data: &Dataset,
    prior: &PriorConfig,
    rng: &mut R,
) {
    let i = state.sel.sample(rng);
    let u: f64 = rng.random();
    let other = state.model.flipped(i);
    let other_terms = match posterior_terms(&other, state.g, data, prior) {
        Ok(t) => Some(t),
        Err(err) => {
            state.invalid_count += 1;
            log::trace!("conditional at {other} unavailable: {err}");
            None
        }
    };
    let other_lp = other_terms.map_or(f64::NEG_INFINITY, |t| t.total());
    let (lp_in, lp_out) = if state.model.contains(i) {
        (state.log_post(), other_lp)
    } else {
        (other_lp, state.log_post())
    };
    let include = u < gibbs_inclusion_probability(lp_in, lp_out);
    if include != state.model.contains(i) {
        state.model = other;
        state.terms = other_terms.expect("a zero-probability side is never selected");
    }
}

/// Log Metropolis–Hastings ratio for moving g → g_new at fixed γ with a
/// log-normal random-walk proposal; the final log(g_new/g) is the Jacobian
/// of the proposal.
pub fn g_log_acceptance_ratio(
    fit: f64,
    size: usize,
    g: f64,
    g_new: f64,
    data: &Dataset,
    prior: &PriorConfig,
) -> f64 {
    if !(g_new > 0.0 && g_new.is_finite()) {
        return f64::NEG_INFINITY;
    }
    let side = |g: f64| -> f64 {
        log_marginal_from_fit(fit, size, g, data).unwrap_or(f64::NEG_INFINITY)
            + log_g_term(g, data.n(), prior)
            + g.ln()
    };
    let r = side(g_new) - side(g);
    if r.is_nan() {
        f64::NEG_INFINITY
    } else {
        r
    }
}

/// Random-walk Metropolis update of log g followed by one Robbins–Monro
/// adjustment of the proposal scale. A no-op under g-BRIC.
pub fn g_rwmh_step<R: Rng + ?Sized>(
    state: &mut SamplerState,
    data: &Dataset,
    prior: &PriorConfig,
    rng: &mut R,
) -> bool {
    if !is_hyper(prior) {
        return false;
    }
    let z: f64 = rng.sample(StandardNormal);
    let u: f64 = rng.random();
    let g_new = (state.g.ln() + state.g_log_scale.exp() * z).exp();
    let log_ratio = g_log_acceptance_ratio(
        state.terms.fit,
        state.model.size(),
        state.g,
        g_new,
        data,
        prior,
    );
    let accepted = u.ln() < log_ratio;
    if accepted {
        match log_marginal_from_fit(state.terms.fit, state.model.size(), g_new, data) {
            Ok(lm) => {
                state.g = g_new;
                state.terms.log_marginal = lm;
                state.terms.log_g_prior = log_g_term(g_new, data.n(), prior);
                state.g_accept_count += 1;
            }
            Err(_) => state.invalid_count += 1,
        }
    }
    state.g_step_count += 1;
    state.g_log_scale = tune_g_scale(state.g_log_scale, accepted, state.g_step_count);
    accepted
}

/// Robbins–Monro step towards acceptance rate 0.44 with gain
/// min(0.5, 10/step_count).
pub fn tune_g_scale(g_log_scale: f64, accepted: bool, step_count: u64) -> f64 {
    assert!(step_count >= 1);
    let gain = (10.0 / step_count as f64).min(0.5);
    g_log_scale + gain * (f64::from(accepted as u8) - TARGET_G_ACCEPTANCE)
}

/// Exact one-step transition matrix of the γ-kernel with frozen selection
/// probabilities `d`, for `p <= 16`.
///
/// `log_post[mask]` is the unnormalised log posterior of
/// `Model::from_mask(p, mask)`; invalid models carry `-inf`. Entry
/// `[from][to]` is the probability of moving from `from` to `to`.
pub fn transition_matrix(kind: SamplerKind, d: &[f64], log_post: &[f64]) -> Vec<Vec<f64>> {
    let p = d.len();
    assert!(p <= 16 && log_post.len() == 1 << p);
    let states = 1usize << p;
    let mut matrix = vec![vec![0.0; states]; states];
    for from in 0..states {
        let row = &mut matrix[from];
        for (i, &di) in d.iter().enumerate() {
            let to = from ^ (1 << i);
            let move_prob = match kind {
                SamplerKind::Mc3 => mc3_acceptance_probability(log_post[from], log_post[to]),
                SamplerKind::Gibbs => {
                    let (inc, exc) = if from & (1 << i) != 0 {
                        (from, to)
                    } else {
                        (to, from)
                    };
                    let p_in = gibbs_inclusion_probability(log_post[inc], log_post[exc]);
                    if from == inc {
                        1.0 - p_in
                    } else {
                        p_in
                    }
                }
            };
            row[to] += di * move_prob;
            row[from] += di * (1.0 - move_prob);
        }
    }
    matrix
}
