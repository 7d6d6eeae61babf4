//! Path functionals: the grid maximum and the grid average, plus the exact second moment of
//! the average.

use std::fmt;

use crate::error::{Error, Result};
use crate::fbm::{FbmPath, PathGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FunctionalKind {
    /// `max_i B^H(i/N)`
    Max,
    /// `(1/N) sum_i B^H(i/N)`
    Average,
}

impl FunctionalKind {
    pub const ALL: [FunctionalKind; 2] = [FunctionalKind::Max, FunctionalKind::Average];

    pub fn evaluate(self, values: &[f64]) -> Result<f64> {
        match self {
            FunctionalKind::Max => max_functional(values),
            FunctionalKind::Average => average_functional(values),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FunctionalKind::Max => "max",
            FunctionalKind::Average => "average",
        }
    }
}

impl fmt::Display for FunctionalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalValue {
    pub kind: FunctionalKind,
    pub value: f64,
    pub grid: PathGrid,
}

impl FunctionalValue {
    pub fn of_path(kind: FunctionalKind, path: &FbmPath) -> Result<Self> {
        Ok(Self {
            kind,
            value: kind.evaluate(path.values())?,
            grid: path.grid(),
        })
    }
}

/// Largest path value. Not clamped at zero.
pub fn max_functional(values: &[f64]) -> Result<f64> {
    values
        .iter()
        .copied()
        .reduce(f64::max)
        .ok_or_else(|| Error::invalid("maximum of an empty path"))
}

pub fn average_functional(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::invalid("average of an empty path"));
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// `E[((1/N) sum_{i=1}^N B^H(i/N))^2] = N^{-(2H+2)} sum_{i=1}^N i^{2H+1}`.
///
/// The sum is accumulated with Neumaier compensation.
pub fn average_second_moment_theoretical(grid: PathGrid) -> f64 {
    let exponent = 2.0 * grid.hurst() + 1.0;
    let n = grid.n_points() as f64;
    // Scale each term by N^{-(2H+1)} up front so the partial sums stay O(N).
    let mut sum = 0.0;
    let mut compensation = 0.0;
    for i in 1..=grid.n_points() {
        let term = (i as f64 / n).powf(exponent);
        let t = sum + term;
        if sum.abs() >= term.abs() {
            compensation += (sum - t) + term;
        } else {
            compensation += (term - t) + sum;
        }
        sum = t;
    }
    (sum + compensation) / n
}

/// `lim_{N -> inf}` of [`average_second_moment_theoretical`], `1 / (2H + 2)`.
pub fn average_second_moment_limit(hurst: f64) -> f64 {
    1.0 / (2.0 * hurst + 2.0)
}
