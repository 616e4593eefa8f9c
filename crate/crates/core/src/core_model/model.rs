use std::fmt;

/// Binary inclusion vector γ with a cached model size.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Model {
    gamma: Vec<bool>,
    size: usize,
}

impl Model {
    pub fn empty(p: usize) -> Self {
        Self {
            gamma: vec![false; p],
            size: 0,
        }
    }

    pub fn from_bits(gamma: Vec<bool>) -> Self {
        let size = gamma.iter().filter(|&&b| b).count();
        Self { gamma, size }
    }

    pub fn from_indices(p: usize, indices: &[usize]) -> Self {
        let mut model = Self::empty(p);
        for &i in indices {
            model.set(i, true);
        }
        model
    }

    /// Model whose bit `i` is bit `i` of `mask`. Requires `p <= 64`.
    pub fn from_mask(p: usize, mask: u64) -> Self {
        assert!(p <= 64);
        Self::from_bits((0..p).map(|i| (mask >> i) & 1 == 1).collect())
    }

    pub fn to_mask(&self) -> u64 {
        assert!(self.p() <= 64);
        self.gamma
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | ((b as u64) << i))
    }

    pub fn p(&self) -> usize {
        self.gamma.len()
    }

    /// p_γ, the number of included regressors.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn contains(&self, i: usize) -> bool {
        self.gamma[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.gamma
    }

    pub fn set(&mut self, i: usize, value: bool) {
        if self.gamma[i] != value {
            self.gamma[i] = value;
            if value {
                self.size += 1;
            } else {
                self.size -= 1;
            }
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.set(i, !self.gamma[i]);
    }

    /// Copy with bit `i` flipped.
    pub fn flipped(&self, i: usize) -> Self {
        let mut m = self.clone();
        m.flip(i);
        m
    }

    pub fn with(&self, i: usize, value: bool) -> Self {
        let mut m = self.clone();
        m.set(i, value);
        m
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.gamma
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.gamma {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}
