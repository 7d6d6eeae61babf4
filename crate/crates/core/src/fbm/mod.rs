//! Fractional Brownian motion on the uniform grid `{1/N, 2/N, ..., 1}`.

mod cholesky;
mod circulant;

pub use cholesky::{cholesky_oracle_sample, CholeskySampler, CovarianceMatrix, MAX_CHOLESKY_POINTS};
pub use circulant::{
    build_embedding, circulant_eigenvalues, embedding_size, fgn_autocovariance, fgn_lag_covariance,
    CirculantSpectrum,
};

use crate::error::{Error, Result};
use crate::rng::ReplicationKey;

/// Number of grid points `N` on `(0, 1]` together with the Hurst index `H`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathGrid {
    n_points: usize,
    hurst: f64,
}

impl PathGrid {
    pub fn new(n_points: usize, hurst: f64) -> Result<Self> {
        if n_points == 0 {
            return Err(Error::invalid("grid needs at least one point"));
        }
        if !(hurst > 0.0 && hurst < 1.0) {
            return Err(Error::invalid(format!("Hurst index must lie in (0, 1), got {hurst}")));
        }
        Ok(Self { n_points, hurst })
    }

    /// Grid with `N = 2^exponent` points.
    pub fn with_exponent(exponent: u32, hurst: f64) -> Result<Self> {
        if exponent > 31 {
            return Err(Error::invalid(format!("grid exponent {exponent} exceeds 31")));
        }
        Self::new(1usize << exponent, hurst)
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn hurst(&self) -> f64 {
        self.hurst
    }

    /// `N^{-2H}`, the variance of one grid increment.
    pub fn increment_variance(&self) -> f64 {
        (self.n_points as f64).powf(-2.0 * self.hurst)
    }

    /// Covariance of `B^H(i/N)` and `B^H(j/N)` for 1-based indices.
    pub fn covariance(&self, i: usize, j: usize) -> f64 {
        let two_h = 2.0 * self.hurst;
        let n = self.n_points as f64;
        let (s, t) = (i as f64 / n, j as f64 / n);
        0.5 * (s.powf(two_h) + t.powf(two_h) - (s - t).abs().powf(two_h))
    }
}

/// One sampled path, `values[i]` approximating `B^H((i + 1) / N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FbmPath {
    values: Vec<f64>,
    grid: PathGrid,
    seed: Option<ReplicationKey>,
}

impl FbmPath {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn grid(&self) -> PathGrid {
        self.grid
    }

    pub fn seed(&self) -> Option<ReplicationKey> {
        self.seed
    }

    pub fn with_seed(mut self, seed: ReplicationKey) -> Self {
        self.seed = Some(seed);
        self
    }
}

/// Partial sums of the increments: `values[i] = increments[0] + ... + increments[i]`.
pub fn path_from_increments(increments: &[f64], grid: PathGrid) -> Result<FbmPath> {
    if increments.len() != grid.n_points() {
        return Err(Error::invalid(format!(
            "expected {} increments, got {}",
            grid.n_points(),
            increments.len()
        )));
    }
    let values = increments
        .iter()
        .scan(0.0, |acc, &dx| {
            *acc += dx;
            Some(*acc)
        })
        .collect();
    Ok(FbmPath {
        values,
        grid,
        seed: None,
    })
}
