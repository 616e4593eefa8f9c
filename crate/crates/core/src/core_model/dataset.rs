use crate::error::{BmaError, Result};

/// Response plus demeaned design matrix.
///
/// Columns of `X` are demeaned once at construction. The Gram matrix `X'X`
/// and the cross-product `X'y` are cached so that every marginal-likelihood
/// evaluation only has to factor a `p_γ × p_γ` block.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    y: Vec<f64>,
    columns: Vec<Vec<f64>>,
    names: Vec<String>,
    y_tilde_ss: f64,
    gram: Vec<f64>,
    xty: Vec<f64>,
}

fn demean(values: &mut [f64]) {
    // Second pass removes the rounding left by the first.
    for _ in 0..2 {
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        values.iter_mut().for_each(|v| *v -= mean);
    }
}

impl Dataset {
    /// Builds a dataset from a response and regressor columns, demeaning the
    /// columns. Names default to `x1, x2, …` when `names` is `None`.
    pub fn new(y: Vec<f64>, columns: Vec<Vec<f64>>, names: Option<Vec<String>>) -> Result<Self> {
        let n = y.len();
        let p = columns.len();
        if n < 3 {
            return Err(BmaError::InvalidDataset(format!(
                "need n >= 3 observations, got {n}"
            )));
        }
        if p == 0 {
            return Err(BmaError::InvalidDataset(
                "need at least one regressor".into(),
            ));
        }
        if let Some(j) = columns.iter().position(|c| c.len() != n) {
            return Err(BmaError::InvalidDataset(format!(
                "column {j} has {} rows, response has {n}",
                columns[j].len()
            )));
        }
        if y.iter()
            .chain(columns.iter().flatten())
            .any(|v| !v.is_finite())
        {
            return Err(BmaError::InvalidDataset("non-finite value".into()));
        }
        let names = match names {
            Some(names) if names.len() == p => names,
            Some(names) => {
                return Err(BmaError::InvalidDataset(format!(
                    "{} names for {p} columns",
                    names.len()
                )))
            }
            None => (1..=p).map(|j| format!("x{j}")).collect(),
        };

        let mut columns = columns;
        columns.iter_mut().for_each(|c| demean(c));

        let mut y_tilde = y.clone();
        demean(&mut y_tilde);
        let y_tilde_ss = y_tilde.iter().map(|v| v * v).sum();

        let mut gram = vec![0.0; p * p];
        for i in 0..p {
            for j in 0..=i {
                let v = dot(&columns[i], &columns[j]);
                gram[i * p + j] = v;
                gram[j * p + i] = v;
            }
        }
        // X is demeaned, so X'y = X'ỹ; the centred response is the better
        // conditioned of the two.
        let xty = columns.iter().map(|c| dot(c, &y_tilde)).collect();

        Ok(Self {
            y,
            columns,
            names,
            y_tilde_ss,
            gram,
            xty,
        })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn p(&self) -> usize {
        self.columns.len()
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Demeaned regressor `j`.
    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// ỹ'ỹ with ỹ = y − ȳ1.
    pub fn y_tilde_ss(&self) -> f64 {
        self.y_tilde_ss
    }

    pub(crate) fn gram(&self, i: usize, j: usize) -> f64 {
        self.gram[i * self.p() + j]
    }

    pub(crate) fn xty(&self, i: usize) -> f64 {
        self.xty[i]
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
