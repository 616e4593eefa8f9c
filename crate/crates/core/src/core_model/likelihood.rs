use super::{Dataset, Model};
use crate::error::{BmaError, Result};

/// Columns whose squared sine to the span of the preceding selected columns
/// falls below this are treated as collinear.
pub const RCOND_THRESHOLD: f64 = 1e-12;

/// Quadratic form y'X_γ(X_γ'X_γ)⁻¹X_γ'y.
///
/// Computed from a Cholesky factor L of the cached Gram block as ‖L⁻¹X_γ'y‖²;
/// no inverse is ever formed.
pub fn fit_quadratic_form(model: &Model, data: &Dataset) -> Result<f64> {
    let k = model.size();
    let max = data.n().saturating_sub(2);
    if k > max {
        return Err(BmaError::ModelTooLarge { size: k, max });
    }
    if k == 0 {
        return Ok(0.0);
    }
    let idx: Vec<usize> = model.indices().collect();
    let mut l = vec![0.0; k * k];
    let mut z = vec![0.0; k];
    for i in 0..k {
        let row = i * k;
        for j in 0..i {
            let mut s = data.gram(idx[i], idx[j]);
            for m in 0..j {
                s -= l[row + m] * l[j * k + m];
            }
            l[row + j] = s / l[j * k + j];
        }
        let diag = data.gram(idx[i], idx[i]);
        let pivot = diag - l[row..row + i].iter().map(|v| v * v).sum::<f64>();
        let rcond = if diag > 0.0 { pivot / diag } else { 0.0 };
        if rcond.is_nan() || rcond < RCOND_THRESHOLD {
            return Err(BmaError::RankDeficient { rcond });
        }
        let lii = pivot.sqrt();
        l[row + i] = lii;
        let t = data.xty(idx[i]) - (0..i).map(|m| l[row + m] * z[m]).sum::<f64>();
        z[i] = t / lii;
    }
    Ok(z.iter().map(|v| v * v).sum())
}

/// Log marginal likelihood from a precomputed quadratic form `fit`.
///
/// Because the quadratic form does not depend on g, a g-update only needs
/// this function, not a new factorisation.
pub fn log_marginal_from_fit(fit: f64, size: usize, g: f64, data: &Dataset) -> Result<f64> {
    assert!(g > 0.0, "g must be positive, got {g}");
    let residual = if size == 0 {
        data.y_tilde_ss()
    } else {
        data.y_tilde_ss() - g / (1.0 + g) * fit
    };
    if residual.is_nan() || residual <= 0.0 {
        return Err(BmaError::NonPositiveResidual { value: residual });
    }
    let half_dof = (data.n() - 1) as f64 / 2.0;
    Ok(-(size as f64) / 2.0 * g.ln_1p() - half_dof * residual.ln())
}

/// log π(y | γ, g) up to a model-independent additive constant.
pub fn log_marginal_likelihood(model: &Model, g: f64, data: &Dataset) -> Result<f64> {
    let fit = fit_quadratic_form(model, data)?;
    log_marginal_from_fit(fit, model.size(), g, data)
}
