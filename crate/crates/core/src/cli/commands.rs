use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use super::args::{
    CompareArgs, DataArgs, EnumerateArgs, EpsilonArg, GModeArg, PresetArg, RunArgs, SimulateArgs,
};
use super::Outcome;
use crate::core_model::{g_bric, Dataset, GMode, Model, PriorConfig};
use crate::data_io::{
    fmt_f64, load_csv, read_pip_table, simulate_dataset, write_dataset, write_pip_table,
    write_report, write_top_models, write_traces, write_truth, PipTable,
};
use crate::diagnostics::{pip, EfficiencyReport, EfficiencyRow, RunMetrics};
use crate::error::{BmaError, Result};
use crate::exec::{map_slice, with_jobs, Execution};
use crate::oracle::{enumerate_hyper_g, enumerate_posterior, hyper_g_grid};
use crate::samplers::{run_chain, AdaptationConfig, ChainConfig, EpsilonSchedule, Method};

const DEFAULT_KAPPA: f64 = 7.0;
const DEFAULT_A: f64 = 3.0;
const DEFAULT_N: usize = 50;
const DEFAULT_P: usize = 40;
const HYPER_GRID_LO: f64 = 1e-2;
const HYPER_GRID_HI: f64 = 1e6;

fn usage(msg: impl Into<String>) -> BmaError {
    BmaError::InvalidConfig(msg.into())
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| BmaError::io(dir, e))
}

#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    Csv { path: PathBuf, response: String },
    Simulate { n: usize, p: usize, noise: bool },
}

impl DataSource {
    fn from_args(d: &DataArgs) -> Result<Self> {
        match &d.csv {
            Some(path) => {
                if d.n.is_some() || d.p.is_some() {
                    return Err(usage("--n/--p only apply to simulated data, not --csv"));
                }
                Ok(DataSource::Csv {
                    path: path.clone(),
                    response: d.response.clone().unwrap_or_else(|| "y".into()),
                })
            }
            None => Ok(DataSource::Simulate {
                n: d.n.unwrap_or(DEFAULT_N),
                p: d.p.unwrap_or(DEFAULT_P),
                noise: !d.noise_free,
            }),
        }
    }

    /// Dataset for one replication. Simulated data are redrawn per seed;
    /// a CSV is the same for every seed.
    fn load(&self, seed: u64) -> Result<(Dataset, Option<Model>)> {
        match self {
            DataSource::Csv { path, response } => Ok((load_csv(path, response)?, None)),
            DataSource::Simulate { n, p, noise } => {
                let (data, truth) = simulate_dataset(*n, *p, seed, *noise)?;
                Ok((data, Some(truth)))
            }
        }
    }
}

fn g_mode(d: &DataArgs) -> Result<GMode> {
    Ok(match d.g_mode.unwrap_or(GModeArg::Bric) {
        GModeArg::Bric => {
            if d.a.is_some() {
                return Err(usage("--a only applies to --g-mode hyper"));
            }
            GMode::GBric
        }
        GModeArg::Hyper => GMode::HyperGOverN {
            a: d.a.unwrap_or(DEFAULT_A),
        },
    })
}

/// Fully resolved `run` request.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub source: DataSource,
    pub kappa: f64,
    pub g_mode: GMode,
    pub grid: Vec<Method>,
    pub iterations: u64,
    pub burn_in: u64,
    pub thin: u64,
    pub block_len: usize,
    pub start_block: usize,
    /// `None` means ε = 1/p.
    pub epsilon: Option<EpsilonSchedule>,
    pub seeds: Vec<u64>,
    pub jobs: Option<usize>,
    pub out: PathBuf,
}

impl ExperimentSpec {
    pub fn chain_config(&self, method: Method, p: usize, seed: u64) -> ChainConfig {
        ChainConfig {
            iterations: self.iterations,
            burn_in: self.burn_in,
            thin: self.thin,
            seed: chain_seed(seed),
            kind: method.kind,
            adaptation: AdaptationConfig {
                measure: method.measure,
                block_len: self.block_len,
                start_block: self.start_block,
                epsilon: self
                    .epsilon
                    .unwrap_or(EpsilonSchedule::Fixed(1.0 / p as f64)),
            },
        }
    }
}

/// Chain RNG seed for replication `seed`, kept apart from the data stream.
pub fn chain_seed(seed: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ 0xD1B5_4A32_D192_ED03
}

fn parse_grid(s: &str) -> Result<Vec<Method>> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(Method::ALL.to_vec());
    }
    let mut grid = Vec::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let m: Method = part.parse()?;
        if !grid.contains(&m) {
            grid.push(m);
        }
    }
    Ok(grid)
}

fn parse_seeds(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| usage(format!("invalid seed `{p}`")))
        })
        .collect()
}

pub fn resolve_experiment(args: RunArgs) -> Result<ExperimentSpec> {
    let args = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| BmaError::io(path, e))?;
            let file =
                toml::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            args.merge(file)
        }
        None => args,
    };
    let (iterations, burn_in) = match args.preset.unwrap_or(PresetArg::Desk) {
        PresetArg::Desk => (200_000, 10_000),
        PresetArg::Paper => (2_000_000, 100_000),
    };
    let epsilon = match (args.epsilon, args.epsilon_value) {
        (Some(EpsilonArg::Decreasing), Some(_)) => {
            return Err(usage("--epsilon-value only applies to --epsilon fixed"))
        }
        (Some(EpsilonArg::Decreasing), None) => Some(EpsilonSchedule::Decreasing),
        (_, Some(e)) => Some(EpsilonSchedule::Fixed(e)),
        (_, None) => None,
    };
    let grid = parse_grid(args.grid.as_deref().unwrap_or("all"))?;
    let plan = ExperimentSpec {
        source: DataSource::from_args(&args.data)?,
        kappa: args.data.kappa.unwrap_or(DEFAULT_KAPPA),
        g_mode: g_mode(&args.data)?,
        grid,
        iterations: args.iterations.unwrap_or(iterations),
        burn_in: args.burn_in.unwrap_or(burn_in),
        thin: args.thin.unwrap_or(10),
        block_len: args.block_len.unwrap_or(1000),
        start_block: args.start_block.unwrap_or(10),
        epsilon,
        seeds: parse_seeds(args.seeds.as_deref().unwrap_or("1"))?,
        jobs: args.jobs,
        out: args.out.ok_or_else(|| usage("--out is required"))?,
    };
    if plan.grid.is_empty() {
        return Err(usage("the sampler grid is empty"));
    }
    if plan.seeds.is_empty() {
        return Err(usage("no seeds given"));
    }
    if let Some(m) = plan
        .grid
        .iter()
        .find(|m| m.is_adaptive() && !plan.grid.contains(&m.baseline()))
    {
        return Err(usage(format!(
            "{m} needs its baseline {} in the grid",
            m.baseline()
        )));
    }
    // Checks iteration counts and ε before any work starts.
    plan.chain_config(plan.grid[0], 2, 0).validate()?;
    Ok(plan)
}

pub(super) fn simulate(a: SimulateArgs) -> Result<Outcome> {
    let (data, truth) = simulate_dataset(a.n, a.p, a.seed, !a.noise_free)?;
    ensure_dir(&a.out)?;
    write_dataset(&a.out.join("dataset.csv"), &data, "y")?;
    write_truth(&a.out.join("truth.csv"), data.names(), &truth)?;
    println!(
        "wrote {} (n = {}, p = {})",
        a.out.join("dataset.csv").display(),
        data.n(),
        data.p()
    );
    Ok(Outcome::Success)
}

struct Replication {
    seed: u64,
    data: Dataset,
    prior: PriorConfig,
}

pub(super) fn run(args: RunArgs) -> Result<Outcome> {
    let plan = resolve_experiment(args)?;
    ensure_dir(&plan.out)?;

    let replications = plan
        .seeds
        .iter()
        .map(|&seed| {
            let (data, _) = plan.source.load(seed)?;
            let prior = PriorConfig::new(data.p(), plan.kappa, plan.g_mode)?;
            Ok(Replication { seed, data, prior })
        })
        .collect::<Result<Vec<_>>>()?;
    if let GMode::GBric = plan.g_mode {
        let d = &replications[0].data;
        println!("g-BRIC: g = {}", g_bric(d.n(), d.p()));
    }

    let cells: Vec<(usize, Method)> = (0..replications.len())
        .flat_map(|r| plan.grid.iter().map(move |&m| (r, m)))
        .collect();
    let outputs = with_jobs(plan.jobs, || {
        map_slice(Execution::default(), &cells, |&(r, method)| {
            let rep = &replications[r];
            let cfg = plan.chain_config(method, rep.data.p(), rep.seed);
            run_chain(&cfg, &rep.data, &rep.prior).map_err(|e| {
                BmaError::InvalidConfig(format!("{method} (seed {}) failed: {e}", rep.seed))
            })
        })
    });
    let outputs = outputs.into_iter().collect::<Result<Vec<_>>>()?;

    let baselines: BTreeMap<String, String> = plan
        .grid
        .iter()
        .filter(|m| m.is_adaptive())
        .map(|m| (m.to_string(), m.baseline().to_string()))
        .collect();
    let mut reports = Vec::new();
    for (r, rep) in replications.iter().enumerate() {
        let runs: Vec<_> = outputs[r * plan.grid.len()..(r + 1) * plan.grid.len()]
            .iter()
            .collect();
        let metrics = runs
            .iter()
            .map(|out| RunMetrics::from_output(out.method.to_string(), out))
            .collect::<Result<Vec<_>>>()?;
        let report = EfficiencyReport::from_metrics(&metrics, &baselines)?;
        write_report(
            &report,
            &plan.out.join(format!("report_seed{}.csv", rep.seed)),
        )?;

        let mut pips = PipTable::new(rep.data.names().to_vec());
        for out in &runs {
            pips.push(out.method.to_string(), pip(out)?);
            if out.method.is_adaptive() {
                let path =
                    plan.out
                        .join(format!("traces_{}_seed{}.csv", out.method.slug(), rep.seed));
                write_traces(out, rep.data.p(), &path)?;
            }
        }
        write_pip_table(&pips, &plan.out.join(format!("pips_seed{}.csv", rep.seed)))?;
        reports.push(report);
    }

    let (mean, se) = summarise(&reports);
    write_report(&mean, &plan.out.join("report.csv"))?;
    if let Some(se) = &se {
        write_report(se, &plan.out.join("report_se.csv"))?;
    }
    print_report(&mean, se.as_ref());
    Ok(Outcome::Success)
}

/// Mean across replications and, with more than one, the standard errors.
fn summarise(reports: &[EfficiencyReport]) -> (EfficiencyReport, Option<EfficiencyReport>) {
    if reports.len() == 1 {
        return (reports[0].clone(), None);
    }
    let k = reports.len() as f64;
    let stat = |values: Vec<f64>| -> (f64, f64) {
        let mean = values.iter().sum::<f64>() / k;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (k - 1.0);
        (mean, (var / k).sqrt())
    };
    let opt_stat = |values: Vec<Option<f64>>| -> (Option<f64>, Option<f64>) {
        if values.iter().all(Option::is_some) {
            let (m, s) = stat(values.into_iter().flatten().collect());
            (Some(m), Some(s))
        } else {
            (None, None)
        }
    };
    let mut mean = EfficiencyReport::default();
    let mut se = EfficiencyReport::default();
    for (j, row) in reports[0].rows.iter().enumerate() {
        let col = |f: fn(&EfficiencyRow) -> f64| {
            reports.iter().map(|r| f(&r.rows[j])).collect::<Vec<_>>()
        };
        let ocol = |f: fn(&EfficiencyRow) -> Option<f64>| {
            reports.iter().map(|r| f(&r.rows[j])).collect::<Vec<_>>()
        };
        let (ess, ess_se) = stat(col(|r| r.ess));
        let (cpu, cpu_se) = stat(col(|r| r.cpu_seconds));
        let (er, er_se) = stat(col(|r| r.er));
        let (re, re_se) = opt_stat(ocol(|r| r.re));
        let (acc, acc_se) = opt_stat(ocol(|r| r.accept_rate));
        mean.rows.push(EfficiencyRow {
            method: row.method.clone(),
            ess,
            cpu_seconds: cpu,
            er,
            re,
            accept_rate: acc,
        });
        se.rows.push(EfficiencyRow {
            method: row.method.clone(),
            ess: ess_se,
            cpu_seconds: cpu_se,
            er: er_se,
            re: re_se,
            accept_rate: acc_se,
        });
    }
    (mean, Some(se))
}

fn print_report(mean: &EfficiencyReport, se: Option<&EfficiencyReport>) {
    println!(
        "{:<12} {:>16} {:>16} {:>14} {:>14} {:>8}",
        "Method", "ESS", "CPU", "ER", "RE", "Ã"
    );
    for (j, r) in mean.rows.iter().enumerate() {
        let with_se = |v: f64, s: Option<f64>| match s {
            Some(s) => format!("{v:.2} ({s:.2})"),
            None => format!("{v:.2}"),
        };
        let s = se.map(|s| &s.rows[j]);
        println!(
            "{:<12} {:>16} {:>16} {:>14} {:>14} {:>8}",
            r.method,
            with_se(r.ess, s.map(|s| s.ess)),
            with_se(r.cpu_seconds, s.map(|s| s.cpu_seconds)),
            with_se(r.er, s.map(|s| s.er)),
            r.re.map(|re| with_se(re, s.and_then(|s| s.re)))
                .unwrap_or_default(),
            r.accept_rate
                .map(|a| format!("{:.0}%", 100.0 * a))
                .unwrap_or_default(),
        );
    }
}

pub(super) fn enumerate(a: EnumerateArgs) -> Result<Outcome> {
    let source = DataSource::from_args(&a.data)?;
    let (data, _) = source.load(a.seed)?;
    let prior = PriorConfig::new(
        data.p(),
        a.data.kappa.unwrap_or(DEFAULT_KAPPA),
        g_mode(&a.data)?,
    )?;
    let exact = with_jobs(a.jobs, || match (prior.g_mode, a.g) {
        (_, Some(g)) if g > 0.0 => enumerate_posterior(&data, &prior, g),
        (_, Some(g)) => Err(usage(format!("--g must be positive, got {g}"))),
        (GMode::GBric, None) => enumerate_posterior(&data, &prior, g_bric(data.n(), data.p())),
        (GMode::HyperGOverN { a: shape }, None) => {
            if a.grid_points < 2 {
                return Err(usage("--grid-points must be at least 2"));
            }
            let (grid, weights) =
                hyper_g_grid(a.grid_points, HYPER_GRID_LO, HYPER_GRID_HI, data.n(), shape);
            enumerate_hyper_g(&data, &prior, &grid, &weights)
        }
    })?;

    ensure_dir(&a.out)?;
    let mut table = PipTable::new(data.names().to_vec());
    table.push("exact", exact.pips.clone());
    write_pip_table(&table.sorted_by_first_desc(), &a.out.join("exact_pips.csv"))?;
    let top = exact.top_models(a.top);
    write_top_models(&a.out.join("top_models.csv"), data.names(), &top)?;
    for (k, (m, lp)) in top.iter().enumerate() {
        println!("{:>3}  {:.6}  {}", k + 1, lp.exp(), m);
    }
    Ok(Outcome::Success)
}

pub(super) fn compare(a: CompareArgs) -> Result<Outcome> {
    let mut columns: Vec<(String, Vec<f64>)> = Vec::new();
    let mut variables: Option<Vec<String>> = None;

    let mut add_table = |path: &Path,
                         only_first: bool,
                         columns: &mut Vec<(String, Vec<f64>)>|
     -> Result<Vec<String>> {
        let table = read_pip_table(path)?;
        let reference = variables
            .get_or_insert_with(|| table.variables.clone())
            .clone();
        let mut sorted_ref = reference.clone();
        sorted_ref.sort();
        let mut sorted = table.variables.clone();
        sorted.sort();
        if sorted != sorted_ref {
            return Err(BmaError::MismatchedVariables(format!(
                "{} does not list the same variables as the first file",
                path.display()
            )));
        }
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let mut added = Vec::new();
        for (method, values) in table.methods.iter().zip(&table.values) {
            let aligned: Vec<f64> = reference
                .iter()
                .map(|v| {
                    values[table
                        .variables
                        .iter()
                        .position(|w| w == v)
                        .expect("same set")]
                })
                .collect();
            let mut label = method.clone();
            if columns.iter().any(|(l, _)| *l == label) {
                label = format!("{stem}:{method}");
            }
            added.push(label.clone());
            columns.push((label, aligned));
            if only_first {
                break;
            }
        }
        Ok(added)
    };

    for path in &a.pips {
        add_table(path, false, &mut columns)?;
    }
    let truth_label = match &a.truth {
        Some(path) => Some(add_table(path, true, &mut columns)?.remove(0)),
        None => None,
    };
    let variables = variables.unwrap_or_default();

    let header = ["variable", "method", "pip", "log_pip"].map(String::from);
    let mut rows = Vec::new();
    for (label, values) in &columns {
        for (v, &pip) in variables.iter().zip(values) {
            let log_pip = if pip > 0.0 {
                fmt_f64(pip.ln())
            } else {
                String::new()
            };
            rows.push(vec![v.clone(), label.clone(), fmt_f64(pip), log_pip]);
        }
    }
    if let Some(parent) = a.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        ensure_dir(parent)?;
    }
    let mut w = csv::Writer::from_path(&a.out).map_err(|e| BmaError::io(&a.out, e))?;
    w.write_record(&header)
        .map_err(|e| BmaError::io(&a.out, e))?;
    for r in rows {
        w.write_record(&r).map_err(|e| BmaError::io(&a.out, e))?;
    }
    w.flush().map_err(|e| BmaError::io(&a.out, e))?;

    let gap = |x: &[f64], y: &[f64]| {
        x.iter()
            .zip(y)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    };
    let mut pairs = Vec::new();
    match &truth_label {
        Some(t) => {
            let truth = &columns
                .iter()
                .find(|(l, _)| l == t)
                .expect("truth column")
                .1;
            for (label, values) in columns.iter().filter(|(l, _)| l != t) {
                pairs.push((label.clone(), t.clone(), gap(values, truth)));
            }
        }
        None => {
            for i in 0..columns.len() {
                for j in i + 1..columns.len() {
                    pairs.push((
                        columns[i].0.clone(),
                        columns[j].0.clone(),
                        gap(&columns[i].1, &columns[j].1),
                    ));
                }
            }
        }
    }
    let mut exceeded = false;
    for (x, y, g) in &pairs {
        let flag = if *g > a.threshold { "FAIL" } else { "ok" };
        exceeded |= *g > a.threshold;
        println!("max_abs_diff\t{x}\t{y}\t{g:.6}\t{flag}");
    }
    Ok(if exceeded {
        Outcome::ThresholdExceeded
    } else {
        Outcome::Success
    })
}
