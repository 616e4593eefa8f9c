#![allow(dead_code)]

use bma_adapt::core_model::{Dataset, Model};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

/// Raw regression data kept alongside the library's `Dataset` so oracles can
/// work from the uncentred inputs.
pub struct Raw {
    pub y: Vec<f64>,
    pub cols: Vec<Vec<f64>>,
}

impl Raw {
    pub fn dataset(&self) -> Dataset {
        Dataset::new(self.y.clone(), self.cols.clone(), None).unwrap()
    }
}

/// Correlated Gaussian design with a response driven by the first
/// `active` columns.
pub fn random_raw<R: Rng>(rng: &mut R, n: usize, p: usize, active: usize) -> Raw {
    let shared: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let cols: Vec<Vec<f64>> = (0..p)
        .map(|_| {
            let offset = rng.random_range(-3.0..3.0);
            shared
                .iter()
                .map(|s| offset + 0.5 * s + rng.sample::<f64, _>(StandardNormal))
                .collect()
        })
        .collect();
    let y = (0..n)
        .map(|i| {
            2.0 + cols[..active.min(p)]
                .iter()
                .map(|c| 0.8 * c[i])
                .sum::<f64>()
                + 1.5 * rng.sample::<f64, _>(StandardNormal)
        })
        .collect();
    Raw { y, cols }
}

fn centred(v: &[f64]) -> DVector<f64> {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    DVector::from_iterator(v.len(), v.iter().map(|x| x - mean))
}

/// Log marginal likelihood (up to the usual constant) by explicit inversion
/// of X_γ'X_γ on the centred data.
pub fn naive_log_marginal(raw: &Raw, model: &Model, g: f64) -> f64 {
    let n = raw.y.len();
    let y = centred(&raw.y);
    let yy = y.dot(&y);
    let idx: Vec<usize> = model.indices().collect();
    let q = if idx.is_empty() {
        0.0
    } else {
        let x = DMatrix::from_columns(
            &idx.iter()
                .map(|&j| centred(&raw.cols[j]))
                .collect::<Vec<_>>(),
        );
        let xtx_inv = (x.transpose() * &x).try_inverse().expect("full rank");
        let xty = x.transpose() * &y;
        (xty.transpose() * xtx_inv * xty)[(0, 0)]
    };
    let k = idx.len() as f64;
    -0.5 * k * (1.0 + g).ln() - 0.5 * (n as f64 - 1.0) * (yy - g / (1.0 + g) * q).ln()
}

/// Beta-binomial model prior from the gamma function directly.
pub fn naive_log_model_prior(size: usize, p: usize, b: f64, c: f64) -> f64 {
    use statrs::function::gamma::ln_gamma;
    let ln_beta = |x: f64, y: f64| ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y);
    ln_beta(b + size as f64, c + (p - size) as f64) - ln_beta(b, c)
}

/// Unnormalised log posterior for every mask, then normalised to
/// probabilities with a max shift.
pub fn brute_posterior(raw: &Raw, p: usize, b: f64, c: f64, g: f64) -> Vec<f64> {
    let lp: Vec<f64> = (0..1u64 << p)
        .map(|mask| {
            let m = Model::from_mask(p, mask);
            naive_log_marginal(raw, &m, g) + naive_log_model_prior(m.size(), p, b, c)
        })
        .collect();
    let max = lp.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = lp.iter().map(|l| (l - max).exp()).collect();
    let z: f64 = w.iter().sum();
    w.into_iter().map(|x| x / z).collect()
}

/// Biased autocorrelations and the Parzen lag-window IACT, written out
/// independently of the library.
pub fn reference_iact(x: &[f64], trunc: usize) -> f64 {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let d: Vec<f64> = x.iter().map(|v| v - mean).collect();
    let c0 = d.iter().map(|v| v * v).sum::<f64>() / n;
    let mut tau = 1.0;
    for k in 1..=trunc {
        let ck = d.iter().zip(&d[k..]).map(|(a, b)| a * b).sum::<f64>() / n;
        let u = k as f64 / trunc as f64;
        let w = if u <= 0.5 {
            1.0 - 6.0 * u * u + 6.0 * u * u * u
        } else {
            2.0 * (1.0 - u).powi(3)
        };
        tau += 2.0 * w * ck / c0;
    }
    tau.max(1.0)
}
