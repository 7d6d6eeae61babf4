//! Circulant embedding of fractional Gaussian noise.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::PathGrid;
use crate::error::{Error, Result};

/// Eigenvalues in `[-CLIP_RELATIVE * max, 0)` are rounding noise and are set to zero.
pub const CLIP_RELATIVE: f64 = 1e-9;

/// Autocovariance at `lag` of the increments `B^H((k+1)/N) - B^H(k/N)`, without range
/// checks on the lag or the Hurst index.
pub fn fgn_lag_covariance(lag: usize, n_points: usize, hurst: f64) -> f64 {
    let two_h = 2.0 * hurst;
    let scale = 0.5 * (n_points as f64).powf(-two_h);
    let j = lag as f64;
    let second_difference = match lag {
        0 => 2.0,
        1 => 2f64.powf(two_h) - 2.0,
        _ => {
            // j^{2H} [ (1 - 1/j)^{2H} - 2 + (1 + 1/j)^{2H} ], without forming j^{2H} twice.
            let x = 1.0 / j;
            let lower = (two_h * (-x).ln_1p()).exp_m1();
            let upper = (two_h * x.ln_1p()).exp_m1();
            j.powf(two_h) * (lower + upper)
        }
    };
    scale * second_difference
}

/// Autocovariance of the grid increments at `lag`, `0 <= lag < N`.
pub fn fgn_autocovariance(lag: usize, grid: PathGrid) -> Result<f64> {
    if lag >= grid.n_points() {
        return Err(Error::invalid(format!(
            "lag {lag} out of range for a grid of {} points",
            grid.n_points()
        )));
    }
    Ok(fgn_lag_covariance(lag, grid.n_points(), grid.hurst()))
}

/// Embedding size `m = 2^{1+v}` where `2^v` is the smallest power of two not below `N`.
pub fn embedding_size(n_points: usize) -> usize {
    2 * n_points.max(1).next_power_of_two()
}

/// Eigenvalues of the circulant matrix with first row `row`, i.e. the real parts of
/// `sum_j row[j] exp(2 pi i jk / m)`. Real for rows with `row[j] == row[m - j]`.
pub fn circulant_eigenvalues(row: &[f64]) -> Vec<f64> {
    let mut buffer: Vec<Complex<f64>> = row.iter().map(|&c| Complex::new(c, 0.0)).collect();
    FftPlanner::new().plan_fft_inverse(row.len()).process(&mut buffer);
    buffer.into_iter().map(|z| z.re).collect()
}

fn clip_eigenvalues(eigenvalues: &mut [f64]) -> Result<f64> {
    let max = eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let tolerance = CLIP_RELATIVE * max.max(0.0);
    if min.is_nan() || min < -tolerance {
        return Err(Error::Embedding {
            min_eigenvalue: min,
            tolerance,
            size: eigenvalues.len(),
        });
    }
    for lambda in eigenvalues.iter_mut() {
        if *lambda < 0.0 {
            *lambda = 0.0;
        }
    }
    Ok(min)
}

/// Spectrum of the embedding circulant for one `(N, H)` pair. Immutable and cheap to share
/// between threads; each call to a sampler owns its own scratch buffer.
#[derive(Clone)]
pub struct CirculantSpectrum {
    grid: PathGrid,
    eigenvalues: Vec<f64>,
    min_raw_eigenvalue: f64,
    amplitudes: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for CirculantSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CirculantSpectrum")
            .field("grid", &self.grid)
            .field("m", &self.eigenvalues.len())
            .field("min_raw_eigenvalue", &self.min_raw_eigenvalue)
            .finish_non_exhaustive()
    }
}

/// Builds the first circulant row by reflecting the fGn autocovariance about `m/2` and
/// diagonalises it with one FFT.
pub fn build_embedding(grid: PathGrid) -> Result<CirculantSpectrum> {
    let m = embedding_size(grid.n_points());
    let half = m / 2;
    let lags: Vec<f64> = (0..=half)
        .map(|j| fgn_lag_covariance(j, grid.n_points(), grid.hurst()))
        .collect();
    let row: Vec<f64> = (0..m).map(|j| if j <= half { lags[j] } else { lags[m - j] }).collect();
    let mut eigenvalues = circulant_eigenvalues(&row);
    let min_raw_eigenvalue = clip_eigenvalues(&mut eigenvalues)?;
    let amplitudes = eigenvalues.iter().map(|&l| (l / m as f64).sqrt()).collect();
    let fft = FftPlanner::new().plan_fft_forward(m);
    Ok(CirculantSpectrum {
        grid,
        eigenvalues,
        min_raw_eigenvalue,
        amplitudes,
        fft,
    })
}

impl CirculantSpectrum {
    pub fn grid(&self) -> PathGrid {
        self.grid
    }

    /// Embedding size `m`.
    pub fn size(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Eigenvalues after clipping; all nonnegative.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Smallest eigenvalue before clipping.
    pub fn min_raw_eigenvalue(&self) -> f64 {
        self.min_raw_eigenvalue
    }

    /// Two independent vectors of `N` fGn increments from one FFT.
    ///
    /// With `W_k = sqrt(lambda_k / m) (Z_k + i Z'_k)` and `Y = FFT(W)`, `Y` has complex
    /// covariance `2C` and zero pseudo-covariance, so `Re Y` and `Im Y` are independent
    /// `N(0, C)` vectors. Their leading `N` entries have the fGn law.
    pub fn sample_fgn_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> (Vec<f64>, Vec<f64>) {
        let mut buffer: Vec<Complex<f64>> = self
            .amplitudes
            .iter()
            .map(|&a| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex::new(a * re, a * im)
            })
            .collect();
        self.fft.process(&mut buffer);
        let n = self.grid.n_points();
        buffer[..n].iter().map(|z| (z.re, z.im)).unzip()
    }

    /// One vector of `N` fGn increments (the real half of [`Self::sample_fgn_pair`]).
    pub fn sample_fgn<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.sample_fgn_pair(rng).0
    }
}
