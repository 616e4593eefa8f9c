use crate::core_model::Model;

/// Running inclusion counts over the recorded (thinned) states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamingStats {
    t: u64,
    incl_count: Vec<u64>,
}

impl StreamingStats {
    pub fn new(p: usize) -> Self {
        Self {
            t: 0,
            incl_count: vec![0; p],
        }
    }

    pub fn record(&mut self, model: &Model) {
        self.t += 1;
        for i in model.indices() {
            self.incl_count[i] += 1;
        }
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn inclusion_counts(&self) -> &[u64] {
        &self.incl_count
    }

    /// Inclusion frequencies m_t.
    pub fn means(&self) -> Vec<f64> {
        if self.t == 0 {
            return vec![0.0; self.incl_count.len()];
        }
        let t = self.t as f64;
        self.incl_count.iter().map(|&c| c as f64 / t).collect()
    }

    /// Unbiased sample variances s²_t = t/(t−1)·m(1−m), exact for 0/1 data.
    /// Zero until two states have been recorded.
    pub fn variances(&self) -> Vec<f64> {
        if self.t < 2 {
            return vec![0.0; self.incl_count.len()];
        }
        let bessel = self.t as f64 / (self.t - 1) as f64;
        self.means()
            .into_iter()
            .map(|m| bessel * m * (1.0 - m))
            .collect()
    }
}
