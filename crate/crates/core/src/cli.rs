//! Experiment runner behind the `fbmax` binary.
//!
//! Every command builds a [`Table`] whose real-valued columns are written twice:
//! `name` with 4 decimals and `name_full` with the shortest round-trip representation.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use log::info;
use serde_json::{Map, Number, Value};

use crate::bounds::{
    borovkov_bounds, bounds_report, limit_integral_report, sudakov_lower_bound, MAX_LIMIT_POINTS,
};
use crate::clark::{fbm_clark_expected_max, ClarkOptions};
use crate::error::{Error, Result};
use crate::fbm::{build_embedding, PathGrid};
use crate::functionals::average_second_moment_theoretical;
use crate::montecarlo::{simulate_functionals, simulate_iid_limit, summarize, Execution, Z_95};

pub const DEFAULT_SEED: u64 = 20_160_531;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Table1,
    Table2,
    Table3,
    Table4,
    Figures,
    Bounds,
    Simulate,
    Limit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Mc,
    Clark,
    Integral,
    Bounds,
}

/// Fully resolved description of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: Command,
    pub h_values: Vec<f64>,
    pub n_exponents: Vec<u32>,
    /// `None` means the command's default (several sizes for `table2`).
    pub sample_size: Option<usize>,
    pub master_seed: u64,
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
    /// Empty means the command's default methods.
    pub methods: Vec<Method>,
    pub force_large_clark: bool,
}

const TABLE1_H: [f64; 4] = [0.09, 0.01, 0.0013, 0.0001];
const TABLE4_H: [f64; 5] = [0.5, 0.09, 0.01, 0.0013, 0.0001];
const TABLE2_SAMPLES: [usize; 5] = [1000, 5000, 10000, 15000, 20000];
const DEFAULT_SAMPLES: usize = 1000;

/// The Hurst grid of the figures: `{1e-4 (1 + 4i), i = 0..24} ∪ {0.01 i, i = 1..9}`.
pub fn figure_hurst_grid() -> Vec<f64> {
    let mut h: Vec<f64> = (0..25).map(|i| 1e-4 * (1 + 4 * i) as f64).collect();
    h.extend((1..10).map(|i| 0.01 * i as f64));
    h
}

fn exponents(range: std::ops::RangeInclusive<u32>) -> Vec<u32> {
    range.collect()
}

impl RunManifest {
    /// Manifest with the command's default grids.
    pub fn new(command: Command) -> Self {
        let (h_values, n_exponents) = match command {
            Command::Table1 => (TABLE1_H.to_vec(), exponents(8..=19)),
            Command::Table2 => (Vec::new(), exponents(8..=19)),
            Command::Table3 => (Vec::new(), exponents(20..=25)),
            Command::Table4 => (TABLE4_H.to_vec(), exponents(8..=19)),
            Command::Figures => (figure_hurst_grid(), exponents(8..=19)),
            Command::Bounds => (TABLE4_H.to_vec(), vec![20]),
            Command::Simulate => (vec![0.5], vec![8]),
            Command::Limit => (Vec::new(), exponents(8..=25)),
        };
        Self {
            command,
            h_values,
            n_exponents,
            sample_size: None,
            master_seed: DEFAULT_SEED,
            output_path: None,
            format: OutputFormat::Csv,
            methods: Vec::new(),
            force_large_clark: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(&h) = self.h_values.iter().find(|h| !(**h > 0.0 && **h < 1.0)) {
            return Err(Error::invalid(format!("Hurst index must lie in (0, 1), got {h}")));
        }
        if let Some(&k) = self.n_exponents.iter().find(|k| **k > 31) {
            return Err(Error::invalid(format!("exponent of N must lie in [0, 31], got {k}")));
        }
        if self.n_exponents.is_empty() {
            return Err(Error::invalid("at least one --n-exp is required"));
        }
        let needs_h = !matches!(self.command, Command::Table2 | Command::Table3 | Command::Limit);
        if needs_h && self.h_values.is_empty() {
            return Err(Error::invalid("at least one --h is required"));
        }
        if let Some(n) = self.sample_size {
            if n < 2 {
                return Err(Error::invalid(format!("sample size must be at least 2, got {n}")));
            }
        }
        let allowed: &[Method] = match self.command {
            Command::Table1 => &[Method::Mc, Method::Clark],
            Command::Table2 | Command::Table3 | Command::Limit => &[Method::Mc, Method::Integral],
            Command::Table4 | Command::Bounds => &[Method::Bounds],
            Command::Figures | Command::Simulate => &[Method::Mc],
        };
        if let Some(m) = self.methods.iter().find(|m| !allowed.contains(m)) {
            return Err(Error::invalid(format!(
                "method {:?} does not apply to {:?}",
                m, self.command
            )));
        }
        Ok(())
    }

    fn uses(&self, method: Method, default: bool) -> bool {
        if self.methods.is_empty() {
            default
        } else {
            self.methods.contains(&method)
        }
    }

    fn samples(&self) -> usize {
        self.sample_size.unwrap_or(DEFAULT_SAMPLES)
    }
}

/// Command-line arguments of the `fbmax` binary.
#[derive(Debug, Parser)]
#[command(name = "fbmax", version, about = "Expected maximum of discretized fractional Brownian motion")]
pub struct CliArgs {
    #[arg(value_enum)]
    pub command: Command,
    /// Hurst index; repeatable, defaults to the grid of the command.
    #[arg(long = "h", value_delimiter = ',', allow_negative_numbers = true)]
    pub h: Vec<f64>,
    /// Exponent k of N = 2^k; repeatable.
    #[arg(long = "n-exp", value_delimiter = ',')]
    pub n_exp: Vec<u32>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long = "method", value_enum, value_delimiter = ',')]
    pub method: Vec<Method>,
    /// Run Clark's recursion above the 2^17 size guard.
    #[arg(long)]
    pub force_large_clark: bool,
}

impl CliArgs {
    pub fn into_manifest(self) -> RunManifest {
        let mut manifest = RunManifest::new(self.command);
        if !self.h.is_empty() {
            manifest.h_values = self.h;
        }
        if !self.n_exp.is_empty() {
            manifest.n_exponents = self.n_exp;
        }
        manifest.sample_size = self.samples;
        manifest.master_seed = self.seed;
        manifest.format = self.format;
        manifest.output_path = self.out;
        manifest.methods = self.method;
        manifest.force_large_clark = self.force_large_clark;
        manifest
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
    Missing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    /// Real columns emit `name` (4 decimals) and `name_full`.
    pub real: bool,
}

impl Column {
    fn plain(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            real: false,
        }
    }

    fn real(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            real: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

fn full_precision(x: f64) -> String {
    format!("{x:?}")
}

impl Table {
    fn new(columns: Vec<Column>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn headers(&self) -> Vec<String> {
        let mut out = Vec::new();
        for c in &self.columns {
            out.push(c.name.clone());
            if c.real {
                out.push(format!("{}_full", c.name));
            }
        }
        out
    }

    fn text_row(&self, row: &[Cell]) -> Vec<String> {
        let mut out = Vec::new();
        for (c, cell) in self.columns.iter().zip(row) {
            let (short, full) = match cell {
                Cell::Int(v) => (v.to_string(), v.to_string()),
                Cell::Real(v) => (format!("{v:.4}"), full_precision(*v)),
                Cell::Text(s) => (s.clone(), s.clone()),
                Cell::Missing => (String::new(), String::new()),
            };
            out.push(short);
            if c.real {
                out.push(full);
            }
        }
        out
    }

    fn json_row(&self, row: &[Cell]) -> Value {
        let mut object = Map::new();
        for (c, cell) in self.columns.iter().zip(row) {
            let (short, full) = match cell {
                Cell::Int(v) => (Value::from(*v), Value::from(*v)),
                Cell::Real(v) => {
                    let rounded: f64 = format!("{v:.4}").parse().unwrap_or(*v);
                    (real_value(rounded), real_value(*v))
                }
                Cell::Text(s) => (Value::from(s.as_str()), Value::from(s.as_str())),
                Cell::Missing => (Value::Null, Value::Null),
            };
            object.insert(c.name.clone(), short);
            if c.real {
                object.insert(format!("{}_full", c.name), full);
            }
        }
        Value::Object(object)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(writer);
        w.write_record(self.headers())?;
        for row in &self.rows {
            w.write_record(self.text_row(row))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, mut writer: W) -> Result<()> {
        let rows: Vec<Value> = self.rows.iter().map(|r| self.json_row(r)).collect();
        serde_json::to_writer_pretty(&mut writer, &rows)?;
        writer.write_all(b"\n")?;
        writer.flush()?;
        Ok(())
    }

    pub fn write<W: Write>(&self, format: OutputFormat, writer: W) -> Result<()> {
        match format {
            OutputFormat::Csv => self.write_csv(writer),
            OutputFormat::Json => self.write_json(writer),
        }
    }
}

fn real_value(x: f64) -> Value {
    Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn h_label(h: f64) -> String {
    format!("h{h}")
}

fn n_points(exponent: u32) -> u64 {
    1u64 << exponent
}

fn grid_points(exponent: u32) -> Result<usize> {
    usize::try_from(n_points(exponent)).map_err(|_| Error::invalid(format!("2^{exponent} points do not fit in memory")))
}

fn table1(m: &RunManifest) -> Result<Table> {
    let (mc, clark) = (m.uses(Method::Mc, true), m.uses(Method::Clark, true));
    let mut columns = vec![Column::plain("n_exp")];
    if mc {
        columns.extend(m.h_values.iter().map(|&h| Column::real(format!("mc_{}", h_label(h)))));
        columns.extend(m.h_values.iter().map(|&h| Column::real(format!("se_{}", h_label(h)))));
    }
    if clark {
        columns.extend(m.h_values.iter().map(|&h| Column::real(format!("clark_{}", h_label(h)))));
    }
    let mut table = Table::new(columns);
    let options = ClarkOptions {
        force: m.force_large_clark,
        ..ClarkOptions::default()
    };
    for &k in &m.n_exponents {
        let mut means = Vec::new();
        let mut errors = Vec::new();
        let mut clarks = Vec::new();
        for &h in &m.h_values {
            let grid = PathGrid::new(grid_points(k)?, h)?;
            if mc {
                let spectrum = build_embedding(grid)?;
                let samples = simulate_functionals(&spectrum, m.samples(), m.master_seed, Execution::Parallel);
                let s = summarize(&samples.max)?;
                info!("table1 N=2^{k} H={h} mc_mean={:.4} se={:.4}", s.mean, s.std_error());
                means.push(Cell::Real(s.mean));
                errors.push(Cell::Real(s.std_error()));
            }
            if clark {
                match fbm_clark_expected_max(grid, options) {
                    Ok(r) => {
                        info!("table1 N=2^{k} H={h} clark={:.4}", r.expected_max);
                        clarks.push(Cell::Real(r.expected_max));
                    }
                    Err(Error::SizeGuard { .. }) => {
                        info!("table1 N=2^{k} H={h} clark skipped (size guard)");
                        clarks.push(Cell::Text("skipped".into()));
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        let mut row = vec![Cell::Int(k.into())];
        row.extend(means);
        row.extend(errors);
        row.extend(clarks);
        table.push(row);
    }
    Ok(table)
}

fn limit_table(m: &RunManifest, default_sizes: &[usize]) -> Result<Table> {
    let (mc, integral) = (m.uses(Method::Mc, true), m.uses(Method::Integral, true));
    let sizes: Vec<usize> = m.sample_size.map_or_else(|| default_sizes.to_vec(), |n| vec![n]);
    let mut columns = vec![Column::plain("n_exp")];
    if mc {
        columns.extend(sizes.iter().map(|n| Column::real(format!("mean_n{n}"))));
    }
    if integral {
        columns.push(Column::real("integral"));
    }
    let mut table = Table::new(columns);
    for &k in &m.n_exponents {
        let mut row = vec![Cell::Int(k.into())];
        if mc {
            for &n in &sizes {
                let s = summarize(&simulate_iid_limit(n_points(k), n, m.master_seed, Execution::Parallel))?;
                info!("limit N=2^{k} n={n} mean={:.4}", s.mean);
                row.push(Cell::Real(s.mean));
            }
        }
        if integral {
            let v = limit_integral_checked(k)?;
            info!("limit N=2^{k} integral={:.4}", v.value());
            row.push(Cell::Real(v.value()));
        }
        table.push(row);
    }
    Ok(table)
}

fn limit_integral_checked(k: u32) -> Result<crate::bounds::LimitIntegral> {
    let n = n_points(k);
    if n > MAX_LIMIT_POINTS {
        return Err(Error::invalid(format!("limit integral supports N <= 2^31, got 2^{k}")));
    }
    limit_integral_report(n)
}

/// `e^{1/(2H)}` as text; large values in mantissa-exponent form.
fn sudakov_argmax_text(h: f64) -> String {
    let log10 = 1.0 / (2.0 * h * std::f64::consts::LN_10);
    if log10 < 6.0 {
        let v = 10f64.powf(log10);
        if v < 100.0 {
            format!("{v:.4}")
        } else {
            format!("{v:.2}")
        }
    } else {
        let exponent = log10.floor();
        let mut mantissa = 10f64.powf(log10 - exponent);
        let mut exponent = exponent as i64;
        if format!("{mantissa:.2}") == "10.00" {
            mantissa /= 10.0;
            exponent += 1;
        }
        format!("{mantissa:.2}e{exponent}")
    }
}

fn table4(m: &RunManifest) -> Result<Table> {
    let mut columns = vec![Column::plain("row"), Column::plain("n_exp")];
    columns.extend(m.h_values.iter().map(|&h| Column::real(h_label(h))));
    let mut table = Table::new(columns);
    let mut row = vec![Cell::Text("borovkov_lower".into()), Cell::Missing];
    for &h in &m.h_values {
        row.push(Cell::Real(borovkov_bounds(h)?.lower));
    }
    table.push(row);
    let mut row = vec![Cell::Text("sudakov_argmax".into()), Cell::Missing];
    row.extend(m.h_values.iter().map(|&h| Cell::Text(sudakov_argmax_text(h))));
    table.push(row);
    for &k in &m.n_exponents {
        let mut row = vec![Cell::Text("sudakov".into()), Cell::Int(k.into())];
        for &h in &m.h_values {
            row.push(Cell::Real(sudakov_lower_bound(n_points(k), h)?));
        }
        info!("table4 N=2^{k} done");
        table.push(row);
    }
    Ok(table)
}

fn figures(m: &RunManifest) -> Result<Table> {
    let columns = vec![
        Column::plain("figure"),
        Column::real("h"),
        Column::plain("n_exp"),
        Column::plain("statistic"),
        Column::real("sample"),
        Column::real("theoretical"),
        Column::real("ci_low"),
        Column::real("ci_high"),
    ];
    let mut table = Table::new(columns);
    let n = m.samples();
    for &h in &m.h_values {
        for &k in &m.n_exponents {
            let grid = PathGrid::new(grid_points(k)?, h)?;
            let samples = simulate_functionals(&build_embedding(grid)?, n, m.master_seed, Execution::Parallel);
            let avg = summarize(&samples.average)?;
            let max = summarize(&samples.max)?;
            let sigma2 = average_second_moment_theoretical(grid);
            let mean_half = Z_95 * (sigma2 / n as f64).sqrt();
            let var_half = Z_95 * sigma2 * (2.0 / (n - 1) as f64).sqrt();
            let lower = borovkov_bounds(h)?.lower;
            info!(
                "figures N=2^{k} H={h} avg_mean={:.4} avg_var={:.4} max_mean={:.4}",
                avg.mean, avg.variance, max.mean
            );
            let cell = |figure: i64, stat: &str, sample: f64, theory: f64, lo: f64, hi: f64| {
                vec![
                    Cell::Int(figure),
                    Cell::Real(h),
                    Cell::Int(k.into()),
                    Cell::Text(stat.into()),
                    Cell::Real(sample),
                    Cell::Real(theory),
                    Cell::Real(lo),
                    Cell::Real(hi),
                ]
            };
            table.push(cell(1, "mean_average", avg.mean, 0.0, -mean_half, mean_half));
            table.push(cell(
                2,
                "variance_average",
                avg.variance,
                sigma2,
                sigma2 - var_half,
                sigma2 + var_half,
            ));
            table.push(cell(3, "mean_max", max.mean, lower, max.ci95_low, max.ci95_high));
        }
    }
    Ok(table)
}

fn bounds(m: &RunManifest) -> Result<Table> {
    let columns = vec![
        Column::real("h"),
        Column::plain("n_exp"),
        Column::real("borovkov_lower"),
        Column::real("borovkov_upper"),
        Column::real("sudakov_lower"),
        Column::real("delta_upper"),
        Column::real("limit_integral"),
        Column::real("delta_lower"),
        Column::real("relative_error_lower"),
    ];
    let mut table = Table::new(columns);
    for &h in &m.h_values {
        for &k in &m.n_exponents {
            if n_points(k) > MAX_LIMIT_POINTS {
                return Err(Error::invalid(format!("bounds support N <= 2^31, got 2^{k}")));
            }
            let r = bounds_report(n_points(k), h)?;
            info!("bounds N=2^{k} H={h} delta_lower={:.4}", r.delta_lower);
            table.push(vec![
                Cell::Real(h),
                Cell::Int(k.into()),
                Cell::Real(r.borovkov_lower),
                Cell::Real(r.borovkov_upper),
                Cell::Real(r.sudakov_lower),
                r.delta_upper.map_or(Cell::Missing, Cell::Real),
                Cell::Real(r.limit_integral),
                Cell::Real(r.delta_lower),
                Cell::Real(r.relative_error_lower),
            ]);
        }
    }
    Ok(table)
}

fn simulate(m: &RunManifest) -> Result<Table> {
    let columns = vec![
        Column::real("h"),
        Column::plain("n_exp"),
        Column::plain("replication"),
        Column::real("max"),
        Column::real("average"),
    ];
    let mut table = Table::new(columns);
    let n = m.samples();
    for &h in &m.h_values {
        for &k in &m.n_exponents {
            let grid = PathGrid::new(grid_points(k)?, h)?;
            let samples = simulate_functionals(&build_embedding(grid)?, n, m.master_seed, Execution::Parallel);
            let s = summarize(&samples.max)?;
            info!(
                "simulate N=2^{k} H={h} max_mean={:.4} se={:.4}",
                s.mean,
                s.std_error()
            );
            for (r, (&mx, &av)) in samples.max.iter().zip(&samples.average).enumerate() {
                table.push(vec![
                    Cell::Real(h),
                    Cell::Int(k.into()),
                    Cell::Int(r as i64),
                    Cell::Real(mx),
                    Cell::Real(av),
                ]);
            }
        }
    }
    Ok(table)
}

fn limit(m: &RunManifest) -> Result<Table> {
    let (mc, integral) = (m.uses(Method::Mc, false), m.uses(Method::Integral, true));
    let mut columns = vec![Column::plain("n_exp")];
    if integral {
        columns.extend([
            Column::real("integral"),
            Column::real("tail_integral"),
            Column::real("discrepancy"),
        ]);
    }
    if mc {
        columns.extend([Column::real("mc_mean"), Column::real("mc_se")]);
    }
    let mut table = Table::new(columns);
    for &k in &m.n_exponents {
        let mut row = vec![Cell::Int(k.into())];
        if integral {
            let r = limit_integral_checked(k)?;
            info!("limit N=2^{k} integral={:.4}", r.value());
            row.extend([
                Cell::Real(r.inverse_erf_form),
                Cell::Real(r.tail_form),
                Cell::Real(r.discrepancy()),
            ]);
        }
        if mc {
            let s = summarize(&simulate_iid_limit(n_points(k), m.samples(), m.master_seed, Execution::Parallel))?;
            info!("limit N=2^{k} mc_mean={:.4}", s.mean);
            row.extend([Cell::Real(s.mean), Cell::Real(s.std_error())]);
        }
        table.push(row);
    }
    Ok(table)
}

/// Computes the table requested by `manifest` without writing it.
pub fn build_table(manifest: &RunManifest) -> Result<Table> {
    manifest.validate()?;
    match manifest.command {
        Command::Table1 => table1(manifest),
        Command::Table2 => limit_table(manifest, &TABLE2_SAMPLES),
        Command::Table3 => limit_table(manifest, &[DEFAULT_SAMPLES]),
        Command::Table4 => table4(manifest),
        Command::Figures => figures(manifest),
        Command::Bounds => bounds(manifest),
        Command::Simulate => simulate(manifest),
        Command::Limit => limit(manifest),
    }
}

/// Builds the table and writes it to `--out` or stdout.
pub fn run(manifest: &RunManifest) -> Result<Table> {
    let table = build_table(manifest)?;
    match &manifest.output_path {
        Some(path) => table.write(manifest.format, BufWriter::new(File::create(path)?))?,
        None => table.write(manifest.format, io::stdout().lock())?,
    }
    Ok(table)
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match CliArgs::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&args.into_manifest()) {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("fbmax: {e}");
            e.exit_code()
        }
    }
}
