//! Efficiency diagnostics for model-space chains: posterior inclusion
//! probabilities, integrated autocorrelation times from a Parzen lag
//! window, effective sample size T/M with M the median IACT of the
//! monitored coordinates, and efficiency ratios.

use std::collections::BTreeMap;

use crate::error::{BmaError, Result};
use crate::exec::{map_range, Execution};
pub use crate::samplers::ChainOutput;

/// PIP threshold for monitored coordinates.
pub const DEFAULT_PIP_THRESHOLD: f64 = 0.1;

/// Sample variance below which a series counts as constant.
const DEGENERATE_VARIANCE: f64 = 1e-14;

/// Coordinate-wise mean of the thinned γ samples.
pub fn pip(output: &ChainOutput) -> Result<Vec<f64>> {
    if output.is_empty() {
        return Err(BmaError::EmptyChain);
    }
    let mut counts = vec![0u64; output.p()];
    for m in &output.samples {
        m.indices().for_each(|i| counts[i] += 1);
    }
    let t = output.len() as f64;
    Ok(counts.into_iter().map(|c| c as f64 / t).collect())
}

/// Parzen lag-window kernel on [−1, 1].
pub fn parzen(x: f64) -> f64 {
    let x = x.abs();
    if x <= 0.5 {
        1.0 - 6.0 * x * x + 6.0 * x * x * x
    } else if x <= 1.0 {
        2.0 * (1.0 - x).powi(3)
    } else {
        0.0
    }
}

/// min(T − 1, ⌈3·T^{1/3}⌉).
pub fn default_truncation(len: usize) -> usize {
    let lag = (3.0 * (len as f64).cbrt()).ceil() as usize;
    lag.min(len.saturating_sub(1)).max(1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IactEstimate {
    pub tau: f64,
    /// The raw lag-window sum was below 1 and has been clamped.
    pub clamped: bool,
}

/// Biased (divide-by-T) autocorrelations ρ̂_1 … ρ̂_max_lag.
pub fn autocorrelations(series: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let n = series.len();
    let mean = series.iter().sum::<f64>() / n as f64;
    let centred: Vec<f64> = series.iter().map(|x| x - mean).collect();
    let c0 = centred.iter().map(|x| x * x).sum::<f64>() / n as f64;
    let variance = c0 * n as f64 / (n as f64 - 1.0);
    if variance.is_nan() || variance < DEGENERATE_VARIANCE {
        return Err(BmaError::DegenerateSeries { variance });
    }
    let exec = if n * max_lag > 1 << 20 {
        Execution::default()
    } else {
        Execution::Sequential
    };
    Ok(map_range(exec, 1..max_lag + 1, |k| {
        let ck = centred[..n - k]
            .iter()
            .zip(&centred[k..])
            .map(|(a, b)| a * b)
            .sum::<f64>()
            / n as f64;
        ck / c0
    }))
}

/// τ̂ = 1 + 2 Σ_{k=1}^{trunc} K(k/trunc)·ρ̂_k, floored at 1.
pub fn iact_parzen(series: &[f64], trunc: usize) -> Result<IactEstimate> {
    let n = series.len();
    if n < 10 {
        return Err(BmaError::InvalidConfig(format!(
            "IACT needs at least 10 values, got {n}"
        )));
    }
    if trunc == 0 || trunc >= n {
        return Err(BmaError::InvalidConfig(format!(
            "truncation lag must lie in [1, {}), got {trunc}",
            n
        )));
    }
    let rho = autocorrelations(series, trunc)?;
    let sum: f64 = rho
        .iter()
        .enumerate()
        .map(|(k, r)| parzen((k + 1) as f64 / trunc as f64) * r)
        .sum();
    let raw = 1.0 + 2.0 * sum;
    Ok(IactEstimate {
        tau: raw.max(1.0),
        clamped: raw < 1.0,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EssEstimate {
    pub ess: f64,
    /// Coordinates with PIP ≥ threshold and a non-constant trace.
    pub monitored: Vec<usize>,
    /// Coordinates above the threshold that were dropped as constant.
    pub dropped: Vec<usize>,
    pub iacts: Vec<f64>,
    /// Median IACT M.
    pub median_iact: f64,
}

/// Median with the even-count convention of averaging the two central values.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len().is_multiple_of(2) {
        0.5 * (v[mid - 1] + v[mid])
    } else {
        v[mid]
    })
}

/// ESS = T/M over the coordinates with PIP ≥ `pip_threshold`, using the
/// default truncation lag.
pub fn ess(output: &ChainOutput, pip_threshold: f64) -> Result<EssEstimate> {
    ess_with_truncation(output, pip_threshold, default_truncation(output.len()))
}

pub fn ess_with_truncation(
    output: &ChainOutput,
    pip_threshold: f64,
    trunc: usize,
) -> Result<EssEstimate> {
    let pips = pip(output)?;
    let t = output.len();
    let mut monitored = Vec::new();
    let mut dropped = Vec::new();
    let mut iacts = Vec::new();
    for (i, &pi) in pips.iter().enumerate() {
        if pi < pip_threshold {
            continue;
        }
        let series: Vec<f64> = output
            .samples
            .iter()
            .map(|m| f64::from(m.contains(i) as u8))
            .collect();
        match iact_parzen(&series, trunc) {
            Ok(est) => {
                monitored.push(i);
                iacts.push(est.tau);
            }
            Err(BmaError::DegenerateSeries { .. }) => {
                log::warn!(
                    "{}: coordinate {i} is constant after burn-in; left out of the median",
                    output.method
                );
                dropped.push(i);
            }
            Err(e) => return Err(e),
        }
    }
    let median_iact = median(&iacts).ok_or(BmaError::NoMonitoredCoordinates {
        threshold: pip_threshold,
    })?;
    Ok(EssEstimate {
        ess: ess_from_median(t, median_iact),
        monitored,
        dropped,
        iacts,
        median_iact,
    })
}

pub fn ess_from_median(t: usize, median_iact: f64) -> f64 {
    t as f64 / median_iact
}

/// Inputs to one report row.
#[derive(Debug, Clone, PartialEq)]
pub struct RunMetrics {
    pub name: String,
    pub ess: f64,
    pub cpu_seconds: f64,
    pub accept_rate: Option<f64>,
}

impl RunMetrics {
    /// ESS at the default threshold; NaN when no coordinate can be monitored.
    pub fn from_output(name: impl Into<String>, output: &ChainOutput) -> Result<Self> {
        let name = name.into();
        let ess = match ess(output, DEFAULT_PIP_THRESHOLD) {
            Ok(e) => e.ess,
            Err(BmaError::NoMonitoredCoordinates { .. }) => {
                log::warn!("{name}: no coordinate to monitor, ESS undefined");
                f64::NAN
            }
            Err(e) => return Err(e),
        };
        Ok(Self {
            name,
            ess,
            cpu_seconds: output.cpu_seconds,
            accept_rate: output.model_accept_rate(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyRow {
    pub method: String,
    pub ess: f64,
    pub cpu_seconds: f64,
    /// ESS per CPU second.
    pub er: f64,
    /// ER relative to the mapped baseline.
    pub re: Option<f64>,
    pub accept_rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EfficiencyReport {
    pub rows: Vec<EfficiencyRow>,
}

impl EfficiencyReport {
    /// Rows keep the order of `runs`; `baselines` maps a run name to the
    /// name of the run its RE is computed against.
    pub fn from_metrics(runs: &[RunMetrics], baselines: &BTreeMap<String, String>) -> Result<Self> {
        let er = |r: &RunMetrics| r.ess / r.cpu_seconds;
        let mut rows = Vec::with_capacity(runs.len());
        for run in runs {
            let re = match baselines.get(&run.name) {
                Some(base) => {
                    let base = runs
                        .iter()
                        .find(|r| &r.name == base)
                        .ok_or_else(|| BmaError::UnknownBaseline(base.clone()))?;
                    Some(er(run) / er(base))
                }
                None => None,
            };
            rows.push(EfficiencyRow {
                method: run.name.clone(),
                ess: run.ess,
                cpu_seconds: run.cpu_seconds,
                er: er(run),
                re,
                accept_rate: run.accept_rate,
            });
        }
        Ok(Self { rows })
    }

    pub fn row(&self, method: &str) -> Option<&EfficiencyRow> {
        self.rows.iter().find(|r| r.method == method)
    }
}

pub fn efficiency_report(
    runs: &[(String, &ChainOutput)],
    baselines: &BTreeMap<String, String>,
) -> Result<EfficiencyReport> {
    let metrics = runs
        .iter()
        .map(|(name, out)| RunMetrics::from_output(name.clone(), out))
        .collect::<Result<Vec<_>>>()?;
    EfficiencyReport::from_metrics(&metrics, baselines)
}

/// For successive adapted snapshots, the pairs (t, t·max_i |d_t,i − d_{t−1},i|).
///
/// The first pair compares the first adapted vector with the probabilities
/// in force just before it.
pub fn adaptation_increments(output: &ChainOutput) -> Vec<(u64, f64)> {
    output
        .d_snapshots
        .windows(2)
        .filter(|w| w[0].d != w[1].d)
        .map(|w| {
            let change = w[0]
                .d
                .iter()
                .zip(&w[1].d)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            (w[1].t, change * w[1].t as f64)
        })
        .collect()
}

/// Kendall's tau-a between two equally long sequences.
pub fn kendall_tau(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let n = x.len();
    if n < 2 {
        return 0.0;
    }
    let mut s = 0i64;
    for i in 0..n {
        for j in i + 1..n {
            let sx = (x[j] - x[i]).partial_cmp(&0.0).map_or(0, |o| o as i64);
            let sy = (y[j] - y[i]).partial_cmp(&0.0).map_or(0, |o| o as i64);
            s += sx * sy;
        }
    }
    s as f64 / (n * (n - 1) / 2) as f64
}
