use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the model, sampler, diagnostic and I/O layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum BmaError {
    #[error("selected columns are numerically collinear (reciprocal condition {rcond:.3e})")]
    RankDeficient { rcond: f64 },
    #[error("model size {size} exceeds n - 2 = {max}")]
    ModelTooLarge { size: usize, max: usize },
    #[error("residual sum of squares is non-positive ({value:e})")]
    NonPositiveResidual { value: f64 },
    #[error("no beta-binomial hyperparameters solve the moment equations for p = {p}, mean = {mean}, variance = {variance}")]
    NoSolution { p: usize, mean: f64, variance: f64 },
    #[error("invalid descriptive measure at coordinate {index}: {value}")]
    InvalidMeasure { index: usize, value: f64 },
    #[error("chain is empty")]
    EmptyChain,
    #[error("series is degenerate (sample variance {variance:e})")]
    DegenerateSeries { variance: f64 },
    #[error("no coordinate has PIP >= {threshold} with a non-degenerate trace")]
    NoMonitoredCoordinates { threshold: f64 },
    #[error("unknown baseline method `{0}`")]
    UnknownBaseline(String),
    #[error("enumeration supports at most {max} variables, got {p}")]
    TooManyVariables { p: usize, max: usize },
    #[error("the simulated response needs at least 7 columns, got {0}")]
    TooFewColumns(usize),
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("{path}: parse error at row {row}, column `{column}`: {message}")]
    ParseError {
        path: PathBuf,
        row: usize,
        column: String,
        message: String,
    },
    #[error("{path}: missing column `{column}`")]
    MissingColumn { path: PathBuf, column: String },
    #[error("column `{0}` is constant")]
    ConstantColumn(String),
    #[error("variable sets differ: {0}")]
    MismatchedVariables(String),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
}

impl BmaError {
    pub(crate) fn io(path: impl Into<PathBuf>, err: impl std::fmt::Display) -> Self {
        BmaError::Io {
            path: path.into(),
            message: err.to_string(),
        }
    }
}

pub type Result<T, E = BmaError> = std::result::Result<T, E>;
