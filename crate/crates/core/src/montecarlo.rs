//! Replication harness for the path functionals and for the iid-normal limit experiment.
//!
//! Replication `r` of an fBm experiment is the real (`r` even) or imaginary (`r` odd) half of
//! FFT synthesis `r / 2`, and synthesis `s` draws from stream `(master_seed, s)`. Replication
//! `r` of the iid experiment draws from stream `(master_seed, r)`. Results are gathered in
//! replication order, so serial and parallel runs agree bit for bit.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fbm::{build_embedding, CirculantSpectrum, PathGrid};
use crate::functionals::FunctionalKind;
use crate::rng::replication_rng;

/// Two-sided 95% normal quantile used for every confidence interval.
pub const Z_95: f64 = 1.96;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentMode {
    Fbm,
    IidLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub grid: PathGrid,
    pub sample_size: usize,
    pub master_seed: u64,
    pub functionals: Vec<FunctionalKind>,
    pub mode: ExperimentMode,
    pub execution: Execution,
}

impl ExperimentConfig {
    /// fBm experiment over both functionals, executed in parallel.
    pub fn new(grid: PathGrid, sample_size: usize, master_seed: u64) -> Result<Self> {
        let config = Self {
            grid,
            sample_size,
            master_seed,
            functionals: FunctionalKind::ALL.to_vec(),
            mode: ExperimentMode::Fbm,
            execution: Execution::Parallel,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_functionals(mut self, functionals: &[FunctionalKind]) -> Self {
        self.functionals = functionals.to_vec();
        self
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.sample_size < 2 {
            return Err(Error::invalid(format!("sample size must be at least 2, got {}", self.sample_size)));
        }
        if self.functionals.is_empty() {
            return Err(Error::invalid("no functionals requested"));
        }
        Ok(())
    }
}

/// Sample mean, unbiased variance and normal-approximation 95% interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSummary {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
    pub functional: Option<FunctionalKind>,
}

impl SampleSummary {
    pub fn std_error(&self) -> f64 {
        (self.variance / self.count as f64).sqrt()
    }

    pub fn ci_contains(&self, x: f64) -> bool {
        self.ci95_low <= x && x <= self.ci95_high
    }

    /// `|mean - x|` in units of the standard error.
    pub fn z_score(&self, x: f64) -> f64 {
        (self.mean - x).abs() / self.std_error()
    }

    fn tagged(mut self, kind: FunctionalKind) -> Self {
        self.functional = Some(kind);
        self
    }
}

pub fn summarize(samples: &[f64]) -> Result<SampleSummary> {
    let count = samples.len();
    if count < 2 {
        return Err(Error::invalid(format!("need at least two samples, got {count}")));
    }
    let n = count as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let variance = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    let half_width = Z_95 * (variance / n).sqrt();
    Ok(SampleSummary {
        count,
        mean,
        variance,
        ci95_low: mean - half_width,
        ci95_high: mean + half_width,
        functional: None,
    })
}

/// Raw per-replication values of both functionals.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalSamples {
    pub grid: PathGrid,
    pub max: Vec<f64>,
    pub average: Vec<f64>,
}

impl FunctionalSamples {
    pub fn get(&self, kind: FunctionalKind) -> &[f64] {
        match kind {
            FunctionalKind::Max => &self.max,
            FunctionalKind::Average => &self.average,
        }
    }

    pub fn len(&self) -> usize {
        self.max.len()
    }

    pub fn is_empty(&self) -> bool {
        self.max.is_empty()
    }
}

/// Maximum and average of the path whose increments are `increments`.
fn path_functionals(increments: &[f64]) -> (f64, f64) {
    let mut level = 0.0;
    let mut max = f64::NEG_INFINITY;
    let mut sum = 0.0;
    for &dx in increments {
        level += dx;
        max = max.max(level);
        sum += level;
    }
    (max, sum / increments.len() as f64)
}

fn synthesis(spectrum: &CirculantSpectrum, master_seed: u64, index: usize) -> [(f64, f64); 2] {
    let (a, b) = spectrum.sample_fgn_pair(&mut replication_rng(master_seed, index as u64));
    [path_functionals(&a), path_functionals(&b)]
}

/// Simulates `sample_size` paths and returns both functionals of each, in replication order.
pub fn simulate_functionals(
    spectrum: &CirculantSpectrum,
    sample_size: usize,
    master_seed: u64,
    execution: Execution,
) -> FunctionalSamples {
    let syntheses = sample_size.div_ceil(2);
    let pairs: Vec<[(f64, f64); 2]> = match execution {
        Execution::Serial => (0..syntheses).map(|s| synthesis(spectrum, master_seed, s)).collect(),
        Execution::Parallel => (0..syntheses)
            .into_par_iter()
            .map(|s| synthesis(spectrum, master_seed, s))
            .collect(),
    };
    let (max, average) = pairs.into_iter().flatten().take(sample_size).unzip();
    FunctionalSamples {
        grid: spectrum.grid(),
        max,
        average,
    }
}

/// Runs an fBm experiment and summarizes every requested functional.
pub fn run_fbm_experiment(config: &ExperimentConfig) -> Result<BTreeMap<FunctionalKind, SampleSummary>> {
    config.validate()?;
    if config.mode != ExperimentMode::Fbm {
        return Err(Error::invalid("run_fbm_experiment needs an fBm-mode configuration"));
    }
    let spectrum = build_embedding(config.grid)?;
    let samples = simulate_functionals(&spectrum, config.sample_size, config.master_seed, config.execution);
    config
        .functionals
        .iter()
        .map(|&kind| Ok((kind, summarize(samples.get(kind))?.tagged(kind))))
        .collect()
}

/// `(1/sqrt 2) max(0, max of N iid standard normals)`, streamed without storing the draws.
fn iid_replication(n_points: u64, master_seed: u64, index: usize) -> f64 {
    let mut rng = replication_rng(master_seed, index as u64);
    let mut max = f64::NEG_INFINITY;
    for _ in 0..n_points {
        let z: f64 = rng.sample(StandardNormal);
        max = max.max(z);
    }
    FRAC_1_SQRT_2 * max.max(0.0)
}

/// Raw samples of the iid limit experiment.
pub fn simulate_iid_limit(n_points: u64, sample_size: usize, master_seed: u64, execution: Execution) -> Vec<f64> {
    match execution {
        Execution::Serial => (0..sample_size).map(|r| iid_replication(n_points, master_seed, r)).collect(),
        Execution::Parallel => (0..sample_size)
            .into_par_iter()
            .map(|r| iid_replication(n_points, master_seed, r))
            .collect(),
    }
}

/// Monte Carlo estimate of `(1/sqrt 2) E (max_i xi_i)^+` over `N` iid standard normals.
pub fn run_iid_limit_experiment(n_points: u64, sample_size: usize, master_seed: u64) -> Result<SampleSummary> {
    if n_points == 0 {
        return Err(Error::invalid("need at least one normal per replication"));
    }
    if sample_size < 2 {
        return Err(Error::invalid(format!("sample size must be at least 2, got {sample_size}")));
    }
    summarize(&simulate_iid_limit(n_points, sample_size, master_seed, Execution::Parallel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn summarize_examples() {
        let s = summarize(&[1.0; 4]).unwrap();
        assert_eq!((s.mean, s.variance, s.ci95_low, s.ci95_high), (1.0, 0.0, 1.0, 1.0));
        let s = summarize(&[0.0, 2.0]).unwrap();
        assert_eq!(s.mean, 1.0);
        assert_eq!(s.variance, 2.0);
        assert_eq!(s.ci95_low, 1.0 - 1.96);
        assert_eq!(s.ci95_high, 1.0 + 1.96);
        assert!(matches!(summarize(&[1.0]), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn summarize_normal_half_width() {
        let mut rng = replication_rng(2024, 0);
        let draws: Vec<f64> = (0..100_000).map(|_| rng.sample(StandardNormal)).collect();
        let s = summarize(&draws).unwrap();
        let analytic = 1.96 / (1e5f64).sqrt();
        let half = 0.5 * (s.ci95_high - s.ci95_low);
        assert!(((half - analytic) / analytic).abs() < 0.05);
    }

    #[test]
    fn path_functionals_match_definitions() {
        let (max, avg) = path_functionals(&[1.0, 1.0, 1.0]);
        assert_eq!((max, avg), (3.0, 2.0));
        let (max, avg) = path_functionals(&[-1.0, -1.0]);
        assert_eq!((max, avg), (-1.0, -1.5));
    }

    #[test]
    fn rejects_bad_configs() {
        let grid = PathGrid::new(8, 0.5).unwrap();
        assert!(ExperimentConfig::new(grid, 1, 0).is_err());
        let mut config = ExperimentConfig::new(grid, 10, 0).unwrap();
        config.mode = ExperimentMode::IidLimit;
        assert!(run_fbm_experiment(&config).is_err());
        assert!(run_iid_limit_experiment(0, 10, 0).is_err());
        assert!(run_iid_limit_experiment(4, 1, 0).is_err());
    }

    #[test]
    fn fbm_experiment_is_deterministic() {
        let grid = PathGrid::new(64, 0.2).unwrap();
        let config = ExperimentConfig::new(grid, 2, 99).unwrap();
        let a = run_fbm_experiment(&config).unwrap();
        let b = run_fbm_experiment(&config).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[&FunctionalKind::Max].functional, Some(FunctionalKind::Max));
    }

    #[test]
    fn serial_and_parallel_agree() {
        let grid = PathGrid::new(100, 0.05).unwrap();
        let spectrum = build_embedding(grid).unwrap();
        let serial = simulate_functionals(&spectrum, 37, 5, Execution::Serial);
        let parallel = simulate_functionals(&spectrum, 37, 5, Execution::Parallel);
        assert_eq!(serial, parallel);
        assert_eq!(serial.len(), 37);
        assert_eq!(
            simulate_iid_limit(50, 21, 5, Execution::Serial),
            simulate_iid_limit(50, 21, 5, Execution::Parallel)
        );
    }

    #[test]
    fn replications_are_prefix_stable() {
        let spectrum = build_embedding(PathGrid::new(32, 0.3).unwrap()).unwrap();
        let short = simulate_functionals(&spectrum, 5, 1, Execution::Serial);
        let long = simulate_functionals(&spectrum, 12, 1, Execution::Serial);
        assert_eq!(short.max[..], long.max[..5]);
    }

    #[test]
    fn single_normal_positive_part() {
        let s = run_iid_limit_experiment(1, 200_000, 17).unwrap();
        let exact = 0.5 / std::f64::consts::PI.sqrt();
        assert!(s.z_score(exact) < 3.0, "{s:?}");
    }

    proptest! {
        #[test]
        fn ci_brackets_mean(samples in prop::collection::vec(-100.0f64..100.0, 2..50)) {
            let s = summarize(&samples).unwrap();
            prop_assert!(s.ci95_low <= s.mean && s.mean <= s.ci95_high);
            prop_assert!(s.variance >= 0.0);
        }
    }
}
