//! Dense reference sampler: `B = L Z` with `G = L L^T` the exact fBm grid covariance.
//! Cubic cost, so only meant for validating the circulant sampler on small grids.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use super::{FbmPath, PathGrid};
use crate::error::{Error, Result};

pub const MAX_CHOLESKY_POINTS: usize = 1024;

/// `G[i][j] = Cov(B^H((i+1)/N), B^H((j+1)/N))`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    grid: PathGrid,
    entries: DMatrix<f64>,
}

impl CovarianceMatrix {
    pub fn new(grid: PathGrid) -> Self {
        let n = grid.n_points();
        let entries = DMatrix::from_fn(n, n, |i, j| grid.covariance(i + 1, j + 1));
        Self { grid, entries }
    }

    pub fn grid(&self) -> PathGrid {
        self.grid
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }
}

#[derive(Debug, Clone)]
pub struct CholeskySampler {
    grid: PathGrid,
    lower: DMatrix<f64>,
}

impl CholeskySampler {
    pub fn new(grid: PathGrid) -> Result<Self> {
        if grid.n_points() > MAX_CHOLESKY_POINTS {
            return Err(Error::Oracle(format!(
                "dense factorization limited to {MAX_CHOLESKY_POINTS} points, got {}",
                grid.n_points()
            )));
        }
        let covariance = CovarianceMatrix::new(grid);
        let lower = covariance
            .entries
            .cholesky()
            .ok_or_else(|| {
                Error::Oracle(format!(
                    "covariance for N={} H={} is not numerically positive definite",
                    grid.n_points(),
                    grid.hurst()
                ))
            })?
            .unpack();
        Ok(Self { grid, lower })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> FbmPath {
        let n = self.grid.n_points();
        let z = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let values = (&self.lower * z).iter().copied().collect();
        FbmPath {
            values,
            grid: self.grid,
            seed: None,
        }
    }
}

/// One exact draw of the grid path. Factorizes on every call; reuse a [`CholeskySampler`]
/// for repeated draws.
pub fn cholesky_oracle_sample<R: Rng + ?Sized>(grid: PathGrid, rng: &mut R) -> Result<FbmPath> {
    Ok(CholeskySampler::new(grid)?.sample(rng))
}
