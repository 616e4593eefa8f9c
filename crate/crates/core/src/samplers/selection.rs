use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use crate::error::{BmaError, Result};

/// Coordinate-selection probabilities d_i ∝ (1 − ε)·w_i + ε.
#[derive(Debug, Clone)]
pub struct SelectionProbs {
    d: Vec<f64>,
    epsilon: f64,
    block_index: usize,
    w_max: f64,
    sampler: WeightedIndex<f64>,
}

impl PartialEq for SelectionProbs {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d
            && self.epsilon == other.epsilon
            && self.block_index == other.block_index
            && self.w_max == other.w_max
    }
}

impl SelectionProbs {
    /// Uniform selection, d = (1/p, …, 1/p).
    pub fn uniform(p: usize, epsilon: f64) -> Self {
        selection_probabilities(&vec![0.0; p], epsilon).expect("zero measure is valid")
    }

    pub fn d(&self) -> &[f64] {
        &self.d
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Block at which these probabilities were computed (0 before any adaptation).
    pub fn block_index(&self) -> usize {
        self.block_index
    }

    pub(crate) fn with_block_index(mut self, block: usize) -> Self {
        self.block_index = block;
        self
    }

    /// Lower bound ε / (p·((1 − ε)·w_max + ε)) every coordinate satisfies.
    pub fn floor(&self) -> f64 {
        let p = self.d.len() as f64;
        self.epsilon / (p * ((1.0 - self.epsilon) * self.w_max + self.epsilon))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.sampler.sample(rng)
    }
}

/// Mixes a non-negative importance measure `w` with the uniform distribution.
pub fn selection_probabilities(w: &[f64], epsilon: f64) -> Result<SelectionProbs> {
    if let Some((index, &value)) = w
        .iter()
        .enumerate()
        .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
    {
        return Err(BmaError::InvalidMeasure { index, value });
    }
    if w.is_empty() {
        return Err(BmaError::InvalidConfig(
            "selection probabilities need p >= 1".into(),
        ));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(BmaError::InvalidConfig(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    let raw: Vec<f64> = w.iter().map(|&wi| (1.0 - epsilon) * wi + epsilon).collect();
    let total: f64 = raw.iter().sum();
    let d: Vec<f64> = raw.iter().map(|r| r / total).collect();
    let sampler = WeightedIndex::new(&d).expect("weights are positive and finite");
    Ok(SelectionProbs {
        d,
        epsilon,
        block_index: 0,
        w_max: w.iter().copied().fold(0.0, f64::max),
        sampler,
    })
}
