//! Dataset ingestion, the correlated-design simulator, and the CSV formats
//! for reports, selection-probability traces and PIP tables.
//!
//! Floats are written with 17 significant digits so every file re-parses to
//! the exact in-memory value.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::core_model::{Dataset, Model};
use crate::diagnostics::EfficiencyReport;
use crate::error::{BmaError, Result};
use crate::samplers::ChainOutput;

/// Number of leading columns in the simulated true model.
pub const TRUE_MODEL_SIZE: usize = 7;
/// Standard deviation of the simulated response noise.
pub const NOISE_SD: f64 = 2.0;

pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn create(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    let file = File::create(path).map_err(|e| BmaError::io(path, e))?;
    Ok(csv::WriterBuilder::new().from_writer(BufWriter::new(file)))
}

fn write_rows<I, R>(path: &Path, header: &[String], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = create(path)?;
    w.write_record(header).map_err(|e| BmaError::io(path, e))?;
    for row in rows {
        w.write_record(row).map_err(|e| BmaError::io(path, e))?;
    }
    w.into_inner()
        .map_err(|e| BmaError::io(path, e.error()))?
        .flush()
        .map_err(|e| BmaError::io(path, e))
}

/// A parsed numeric CSV with one header row.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    pub header: Vec<String>,
    /// Column-major values.
    pub columns: Vec<Vec<f64>>,
}

pub fn read_table(path: &Path) -> Result<RawTable> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| BmaError::io(path, e))?;
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| BmaError::io(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut columns = vec![Vec::new(); header.len()];
    for (k, record) in reader.records().enumerate() {
        let row = k + 1;
        let record = record.map_err(|e| BmaError::ParseError {
            path: path.into(),
            row,
            column: String::new(),
            message: e.to_string(),
        })?;
        for (j, cell) in record.iter().enumerate() {
            let value: f64 = cell.parse().map_err(|_| BmaError::ParseError {
                path: path.into(),
                row,
                column: header[j].clone(),
                message: format!("`{cell}` is not a number"),
            })?;
            if !value.is_finite() {
                return Err(BmaError::ParseError {
                    path: path.into(),
                    row,
                    column: header[j].clone(),
                    message: "non-finite value".into(),
                });
            }
            columns[j].push(value);
        }
    }
    Ok(RawTable { header, columns })
}

/// Loads a dataset whose regressors are every column except `response`,
/// kept in header order.
pub fn load_csv(path: &Path, response: &str) -> Result<Dataset> {
    let table = read_table(path)?;
    let ry = table
        .header
        .iter()
        .position(|h| h == response)
        .ok_or_else(|| BmaError::MissingColumn {
            path: path.into(),
            column: response.into(),
        })?;
    let mut names = Vec::new();
    let mut columns = Vec::new();
    for (j, (name, col)) in table.header.iter().zip(&table.columns).enumerate() {
        if j == ry {
            continue;
        }
        let (lo, hi) = col
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        if lo == hi {
            return Err(BmaError::ConstantColumn(name.clone()));
        }
        names.push(name.clone());
        columns.push(col.clone());
    }
    Dataset::new(table.columns[ry].clone(), columns, Some(names))
}

/// Writes `response` followed by the (demeaned) regressors.
pub fn write_dataset(path: &Path, data: &Dataset, response: &str) -> Result<()> {
    let header: Vec<String> = std::iter::once(response.to_string())
        .chain(data.names().iter().cloned())
        .collect();
    write_rows(
        path,
        &header,
        (0..data.n()).map(|i| {
            std::iter::once(fmt_f64(data.y()[i]))
                .chain(data.columns().iter().map(move |c| fmt_f64(c[i])))
                .collect::<Vec<_>>()
        }),
    )
}

/// Correlated design: z_i = z*_i + e with shared e, then demeaned.
pub fn simulate_design<R: Rng + ?Sized>(n: usize, p: usize, rng: &mut R) -> Result<Vec<Vec<f64>>> {
    if n < 3 || p == 0 {
        return Err(BmaError::InvalidConfig(format!(
            "need n >= 3 and p >= 1, got n = {n}, p = {p}"
        )));
    }
    let e: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    Ok((0..p)
        .map(|_| {
            let mut z: Vec<f64> = e
                .iter()
                .map(|ei| ei + rng.sample::<f64, _>(StandardNormal))
                .collect();
            let mean = z.iter().sum::<f64>() / n as f64;
            z.iter_mut().for_each(|v| *v -= mean);
            z
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedResponse {
    pub y: Vec<f64>,
    /// γ* = (1, …, 1, 0, …, 0) with seven leading ones.
    pub truth: Model,
}

/// y = 1 + Σ_{i≤7} x_i + 2v.
pub fn simulate_response<R: Rng + ?Sized>(
    design: &[Vec<f64>],
    rng: &mut R,
) -> Result<SimulatedResponse> {
    build_response(design, || NOISE_SD * rng.sample::<f64, _>(StandardNormal))
}

/// Response with the noise switched off.
pub fn simulate_response_noise_free(design: &[Vec<f64>]) -> Result<SimulatedResponse> {
    build_response(design, || 0.0)
}

fn build_response(
    design: &[Vec<f64>],
    mut noise: impl FnMut() -> f64,
) -> Result<SimulatedResponse> {
    let p = design.len();
    if p < TRUE_MODEL_SIZE {
        return Err(BmaError::TooFewColumns(p));
    }
    let n = design[0].len();
    let y = (0..n)
        .map(|i| 1.0 + design[..TRUE_MODEL_SIZE].iter().map(|c| c[i]).sum::<f64>() + noise())
        .collect();
    let truth = Model::from_indices(p, &(0..TRUE_MODEL_SIZE).collect::<Vec<_>>());
    Ok(SimulatedResponse { y, truth })
}

/// Seeded simulated dataset together with its true model.
pub fn simulate_dataset(n: usize, p: usize, seed: u64, noise: bool) -> Result<(Dataset, Model)> {
    use rand::SeedableRng;
    if p < TRUE_MODEL_SIZE {
        return Err(BmaError::TooFewColumns(p));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let design = simulate_design(n, p, &mut rng)?;
    let response = if noise {
        simulate_response(&design, &mut rng)?
    } else {
        simulate_response_noise_free(&design)?
    };
    let data = Dataset::new(response.y, design, None)?;
    Ok((data, response.truth))
}

pub const REPORT_HEADER: [&str; 6] = ["method", "ess", "cpu_seconds", "er", "re", "accept_rate"];

pub fn write_report(report: &EfficiencyReport, path: &Path) -> Result<()> {
    let header: Vec<String> = REPORT_HEADER.iter().map(|s| s.to_string()).collect();
    write_rows(
        path,
        &header,
        report.rows.iter().map(|r| {
            vec![
                r.method.clone(),
                fmt_f64(r.ess),
                fmt_f64(r.cpu_seconds),
                fmt_f64(r.er),
                fmt_opt(r.re),
                fmt_opt(r.accept_rate),
            ]
        }),
    )
}

pub fn read_report(path: &Path) -> Result<EfficiencyReport> {
    use crate::diagnostics::EfficiencyRow;
    let mut reader = csv::Reader::from_path(path).map_err(|e| BmaError::io(path, e))?;
    let mut rows = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(|e| BmaError::io(path, e))?;
        let cell = |j: usize| -> Result<Option<f64>> {
            let s = record.get(j).unwrap_or("");
            if s.is_empty() {
                return Ok(None);
            }
            s.parse().map(Some).map_err(|_| BmaError::ParseError {
                path: path.into(),
                row: k + 1,
                column: REPORT_HEADER[j].into(),
                message: format!("`{s}` is not a number"),
            })
        };
        rows.push(EfficiencyRow {
            method: record.get(0).unwrap_or("").to_string(),
            ess: cell(1)?.unwrap_or(f64::NAN),
            cpu_seconds: cell(2)?.unwrap_or(f64::NAN),
            er: cell(3)?.unwrap_or(f64::NAN),
            re: cell(4)?,
            accept_rate: cell(5)?,
        });
    }
    Ok(EfficiencyReport { rows })
}

/// One row per block boundary: `block,coord_0,…,coord_{p−1}`.
pub fn write_traces(output: &ChainOutput, p: usize, path: &Path) -> Result<()> {
    let header: Vec<String> = std::iter::once("block".to_string())
        .chain((0..p).map(|i| format!("coord_{i}")))
        .collect();
    write_rows(
        path,
        &header,
        output.d_snapshots.iter().map(|s| {
            std::iter::once(s.block.to_string())
                .chain(s.d.iter().map(|&d| fmt_f64(d)))
                .collect::<Vec<_>>()
        }),
    )
}

/// Variables by methods: `variable,pip_<method>,…`.
#[derive(Debug, Clone, PartialEq)]
pub struct PipTable {
    pub variables: Vec<String>,
    pub methods: Vec<String>,
    /// `values[m][v]` is the PIP of variable v under method m.
    pub values: Vec<Vec<f64>>,
}

impl PipTable {
    pub fn new(variables: Vec<String>) -> Self {
        Self {
            variables,
            methods: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn push(&mut self, method: impl Into<String>, pips: Vec<f64>) {
        assert_eq!(pips.len(), self.variables.len());
        self.methods.push(method.into());
        self.values.push(pips);
    }

    pub fn column(&self, method: &str) -> Option<&[f64]> {
        self.methods
            .iter()
            .position(|m| m == method)
            .map(|k| self.values[k].as_slice())
    }

    /// Rows reordered by the first method's PIP, largest first.
    pub fn sorted_by_first_desc(&self) -> Self {
        let mut order: Vec<usize> = (0..self.variables.len()).collect();
        if let Some(first) = self.values.first() {
            order.sort_by(|&a, &b| first[b].total_cmp(&first[a]).then(a.cmp(&b)));
        }
        Self {
            variables: order.iter().map(|&i| self.variables[i].clone()).collect(),
            methods: self.methods.clone(),
            values: self
                .values
                .iter()
                .map(|col| order.iter().map(|&i| col[i]).collect())
                .collect(),
        }
    }
}

pub fn write_pip_table(table: &PipTable, path: &Path) -> Result<()> {
    let header: Vec<String> = std::iter::once("variable".to_string())
        .chain(table.methods.iter().map(|m| format!("pip_{m}")))
        .collect();
    write_rows(
        path,
        &header,
        table.variables.iter().enumerate().map(|(v, name)| {
            std::iter::once(name.clone())
                .chain(table.values.iter().map(move |col| fmt_f64(col[v])))
                .collect::<Vec<_>>()
        }),
    )
}

pub fn read_pip_table(path: &Path) -> Result<PipTable> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| BmaError::io(path, e))?;
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| BmaError::io(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    if header.first().map(String::as_str) != Some("variable") {
        return Err(BmaError::MissingColumn {
            path: path.into(),
            column: "variable".into(),
        });
    }
    let methods: Vec<String> = header[1..]
        .iter()
        .map(|h| h.strip_prefix("pip_").unwrap_or(h).to_string())
        .collect();
    let mut table = PipTable {
        variables: Vec::new(),
        values: vec![Vec::new(); methods.len()],
        methods,
    };
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(|e| BmaError::io(path, e))?;
        table
            .variables
            .push(record.get(0).unwrap_or("").to_string());
        for (m, col) in table.values.iter_mut().enumerate() {
            let s = record.get(m + 1).unwrap_or("");
            col.push(s.parse().map_err(|_| BmaError::ParseError {
                path: path.into(),
                row: k + 1,
                column: header[m + 1].clone(),
                message: format!("`{s}` is not a number"),
            })?);
        }
    }
    Ok(table)
}

/// `variable,included` with 0/1 flags.
pub fn write_truth(path: &Path, names: &[String], truth: &Model) -> Result<()> {
    write_rows(
        path,
        &["variable".to_string(), "included".to_string()],
        names
            .iter()
            .enumerate()
            .map(|(i, n)| vec![n.clone(), u8::from(truth.contains(i)).to_string()]),
    )
}

/// `rank,probability,log_probability,size,variables` with variables separated by spaces.
pub fn write_top_models(path: &Path, names: &[String], top: &[(Model, f64)]) -> Result<()> {
    let header: Vec<String> = [
        "rank",
        "probability",
        "log_probability",
        "size",
        "variables",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    write_rows(
        path,
        &header,
        top.iter().enumerate().map(|(k, (m, lp))| {
            vec![
                (k + 1).to_string(),
                fmt_f64(lp.exp()),
                fmt_f64(*lp),
                m.size().to_string(),
                m.indices()
                    .map(|i| names[i].as_str())
                    .collect::<Vec<_>>()
                    .join(" "),
            ]
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn loads_and_demeans_hand_written_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.csv");
        std::fs::write(&path, "a,y,b\n1,2,3\n2,5,1\n6,1,2\n").unwrap();
        let data = load_csv(&path, "y").unwrap();
        assert_eq!(data.names(), &["a".to_string(), "b".to_string()]);
        assert_eq!(data.y(), &[2.0, 5.0, 1.0]);
        for c in data.columns() {
            assert!(c.iter().sum::<f64>().abs() < 1e-12);
        }
        assert!((data.column(0)[0] - (1.0 - 3.0)).abs() < 1e-12);
    }

    #[test]
    fn parse_errors_name_row_and_column() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.csv");
        std::fs::write(&path, "y,x1,x2\n1,2,3\n2,oops,1\n6,1,2\n").unwrap();
        match load_csv(&path, "y").unwrap_err() {
            BmaError::ParseError { row, column, .. } => {
                assert_eq!(row, 2);
                assert_eq!(column, "x1");
            }
            e => panic!("{e:?}"),
        }
        assert!(matches!(
            load_csv(&path, "z"),
            Err(BmaError::ParseError { .. })
        ));
        std::fs::write(&path, "y,x1,x2\n1,2,3\n2,2,1\n6,2,2\n").unwrap();
        assert_eq!(
            load_csv(&path, "y").unwrap_err(),
            BmaError::ConstantColumn("x1".into())
        );
        std::fs::write(&path, "y,x1\n1,2\n2,3\n6,1\n").unwrap();
        assert!(matches!(
            load_csv(&path, "q"),
            Err(BmaError::MissingColumn { .. })
        ));
    }

    #[test]
    fn wide_tables_load() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("wide.csv");
        let mut s = String::from("y");
        for j in 0..6 {
            s += &format!(",x{j}");
        }
        s += "\n";
        for i in 0..4 {
            s += &format!("{i}");
            for j in 0..6 {
                s += &format!(",{}", (i * 7 + j * 3) % 5);
            }
            s += "\n";
        }
        std::fs::write(&path, s).unwrap();
        let data = load_csv(&path, "y").unwrap();
        assert_eq!((data.n(), data.p()), (4, 6));
    }

    #[test]
    fn dataset_round_trip() {
        let (data, _) = simulate_dataset(20, 8, 4, true).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.csv");
        write_dataset(&path, &data, "y").unwrap();
        let back = load_csv(&path, "y").unwrap();
        assert_eq!(back.names(), data.names());
        for (a, b) in back.y().iter().zip(data.y()) {
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
        }
        for (ca, cb) in back.columns().iter().zip(data.columns()) {
            for (a, b) in ca.iter().zip(cb) {
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
            }
        }
    }

    #[test]
    fn noise_free_response() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let design = simulate_design(30, 9, &mut rng).unwrap();
        let r = simulate_response_noise_free(&design).unwrap();
        for (i, &yi) in r.y.iter().enumerate() {
            let signal = 1.0 + design[..7].iter().map(|c| c[i]).sum::<f64>();
            assert_eq!(yi, signal);
        }
        assert_eq!(r.truth, Model::from_indices(9, &[0, 1, 2, 3, 4, 5, 6]));
        assert_eq!(
            simulate_response(&design[..6], &mut rng).unwrap_err(),
            BmaError::TooFewColumns(6)
        );
    }

    #[test]
    fn design_columns_are_demeaned_and_seeded() {
        let mut a = ChaCha8Rng::seed_from_u64(1);
        let mut b = ChaCha8Rng::seed_from_u64(1);
        let da = simulate_design(50, 40, &mut a).unwrap();
        assert_eq!(da, simulate_design(50, 40, &mut b).unwrap());
        for c in &da {
            assert!(c.iter().sum::<f64>().abs() / 50.0 < 1e-12);
        }
    }

    #[test]
    fn empty_trace_is_header_only() {
        let (data, _) = simulate_dataset(20, 7, 1, true).unwrap();
        let prior =
            crate::core_model::PriorConfig::new(7, 2.0, crate::core_model::GMode::GBric).unwrap();
        let mut cfg = crate::samplers::ChainConfig::desk(crate::samplers::Method::ALL[0], 7, 1);
        cfg.iterations = 200;
        cfg.burn_in = 10;
        let out = crate::samplers::run_chain(&cfg, &data, &prior).unwrap();
        assert!(out.d_snapshots.is_empty());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        write_traces(&out, 7, &path).unwrap();
        assert_eq!(
            std::fs::read_to_string(&path).unwrap(),
            "block,coord_0,coord_1,coord_2,coord_3,coord_4,coord_5,coord_6\n"
        );
    }

    #[test]
    fn pip_table_round_trip_and_names() {
        let names: Vec<String> = ["log GDP in 1960", "Fraction Confucian", "Life expectancy"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let mut t = PipTable::new(names.clone());
        t.push("MC3", vec![0.7, 0.96, 0.45]);
        t.push("ADMC3(s2)", vec![0.64, 0.96, 0.39]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pips.csv");
        write_pip_table(&t, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("variable,pip_MC3,pip_ADMC3(s2)\nlog GDP in 1960,"));
        assert_eq!(read_pip_table(&path).unwrap(), t);
        let sorted = t.sorted_by_first_desc();
        assert_eq!(sorted.variables[0], "Fraction Confucian");
    }
}
