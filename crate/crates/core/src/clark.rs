//! Clark's moment-matching recursion for `E max` of a Gaussian vector.
//!
//! The maximum of a bivariate normal pair has exactly known first and second moments. For
//! more variables the running maximum is treated as Gaussian with those moments, its
//! correlations with the variables not yet absorbed are updated, and the next variable is
//! folded in. Variables are absorbed in index order.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fbm::PathGrid;
use crate::special::{norm_cdf, norm_pdf};

/// Default refusal threshold for the `O(N^2)` recursion.
pub const DEFAULT_MAX_SIZE: usize = 1 << 17;

/// A Gaussian vector given by its mean and covariance functions (0-based indices).
pub trait GaussianVector {
    fn size(&self) -> usize;
    fn mean(&self, i: usize) -> f64;
    fn covariance(&self, i: usize, j: usize) -> f64;

    fn variance(&self, i: usize) -> f64 {
        self.covariance(i, i)
    }
}

/// `(B^H(1/N), ..., B^H(N/N))`, with `k^{2H}` tabulated so each covariance costs three
/// lookups.
#[derive(Debug, Clone)]
pub struct FbmGaussianVector {
    grid: PathGrid,
    powers: Vec<f64>,
    scale: f64,
}

impl FbmGaussianVector {
    pub fn new(grid: PathGrid) -> Self {
        let two_h = 2.0 * grid.hurst();
        let powers = (0..=grid.n_points()).map(|k| (k as f64).powf(two_h)).collect();
        Self {
            grid,
            powers,
            scale: 0.5 * grid.increment_variance(),
        }
    }

    pub fn grid(&self) -> PathGrid {
        self.grid
    }
}

impl GaussianVector for FbmGaussianVector {
    fn size(&self) -> usize {
        self.grid.n_points()
    }

    fn mean(&self, _i: usize) -> f64 {
        0.0
    }

    #[inline]
    fn covariance(&self, i: usize, j: usize) -> f64 {
        self.scale * (self.powers[i + 1] + self.powers[j + 1] - self.powers[i.abs_diff(j)])
    }
}

/// Explicit mean vector and covariance matrix.
#[derive(Debug, Clone)]
pub struct DenseGaussianVector {
    means: Vec<f64>,
    covariance: DMatrix<f64>,
}

impl DenseGaussianVector {
    pub fn new(means: Vec<f64>, covariance: DMatrix<f64>) -> Result<Self> {
        let n = means.len();
        if covariance.nrows() != n || covariance.ncols() != n {
            return Err(Error::invalid(format!(
                "covariance is {}x{} but there are {n} means",
                covariance.nrows(),
                covariance.ncols()
            )));
        }
        for i in 0..n {
            if covariance[(i, i)] < 0.0 {
                return Err(Error::invalid(format!("negative variance at index {i}")));
            }
            for j in 0..i {
                let (a, b) = (covariance[(i, j)], covariance[(j, i)]);
                if (a - b).abs() > 1e-12 * (a.abs() + b.abs()).max(1.0) {
                    return Err(Error::invalid(format!("covariance not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self { means, covariance })
    }
}

impl GaussianVector for DenseGaussianVector {
    fn size(&self) -> usize {
        self.means.len()
    }

    fn mean(&self, i: usize) -> f64 {
        self.means[i]
    }

    fn covariance(&self, i: usize, j: usize) -> f64 {
        self.covariance[(i, j)]
    }
}

/// First two moments of `max{xi, eta}` and the quantities `a`, `alpha` behind them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairMoments {
    pub mean: f64,
    pub second_moment: f64,
    /// `sqrt(Var xi + Var eta - 2 Cov(xi, eta))`; zero for a degenerate pair.
    pub a: f64,
    /// `(E xi - E eta) / a`; `+inf`/`-inf` for a degenerate pair.
    pub alpha: f64,
}

impl PairMoments {
    pub fn variance(&self) -> f64 {
        (self.second_moment - self.mean * self.mean).max(0.0)
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == 0.0
    }
}

/// Exact moments of the maximum of a bivariate normal pair.
///
/// If `xi - eta` is almost surely constant the maximum is whichever variable has the larger
/// mean, and its moments are returned directly.
pub fn clark_pair_moments(mean1: f64, var1: f64, mean2: f64, var2: f64, cov: f64) -> Result<PairMoments> {
    if !(var1 >= 0.0 && var2 >= 0.0) || !mean1.is_finite() || !mean2.is_finite() || !cov.is_finite() {
        return Err(Error::invalid(format!(
            "pair needs finite means and nonnegative variances: ({mean1}, {var1}), ({mean2}, {var2}), cov {cov}"
        )));
    }
    let bound = (var1 * var2).sqrt();
    if cov.abs() > bound * (1.0 + 1e-9) + f64::MIN_POSITIVE {
        return Err(Error::invalid(format!("|cov| = {} exceeds sqrt(var1 var2) = {bound}", cov.abs())));
    }
    let a_squared = var1 + var2 - 2.0 * cov;
    if a_squared <= 1e-15 * (var1 + var2) {
        return Ok(if mean1 >= mean2 {
            PairMoments {
                mean: mean1,
                second_moment: mean1 * mean1 + var1,
                a: 0.0,
                alpha: f64::INFINITY,
            }
        } else {
            PairMoments {
                mean: mean2,
                second_moment: mean2 * mean2 + var2,
                a: 0.0,
                alpha: f64::NEG_INFINITY,
            }
        });
    }
    let a = a_squared.sqrt();
    let alpha = (mean1 - mean2) / a;
    let upper = norm_cdf(alpha);
    let lower = norm_cdf(-alpha);
    let density = a * norm_pdf(alpha);
    Ok(PairMoments {
        mean: upper * mean1 + lower * mean2 + density,
        second_moment: upper * (mean1 * mean1 + var1) + lower * (mean2 * mean2 + var2) + density * (mean1 + mean2),
        a,
        alpha,
    })
}

/// Result of one correlation update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationUpdate {
    pub value: f64,
    /// The plug-in value fell outside `[-1, 1]` and was clamped.
    pub clamped: bool,
    /// The maximum has zero variance; `value` is 0.
    pub degenerate: bool,
}

/// Coefficients of `Corr(tau, max{xi, eta})` as a linear function of `Corr(tau, xi)` and
/// `Corr(tau, eta)`; shared by every `tau` in one recursion step.
#[derive(Debug, Clone, Copy)]
struct CorrelationWeights {
    first: f64,
    second: f64,
    degenerate: bool,
}

impl CorrelationWeights {
    fn new(var1: f64, var2: f64, alpha: f64, pair: &PairMoments) -> Self {
        let var_max = pair.variance();
        if var_max.is_nan() || var_max <= 1e-300 {
            return Self {
                first: 0.0,
                second: 0.0,
                degenerate: true,
            };
        }
        let sd_max = var_max.sqrt();
        Self {
            first: var1.sqrt() * norm_cdf(alpha) / sd_max,
            second: var2.sqrt() * norm_cdf(-alpha) / sd_max,
            degenerate: false,
        }
    }

    #[inline]
    fn apply(&self, corr1: f64, corr2: f64) -> CorrelationUpdate {
        if self.degenerate {
            return CorrelationUpdate {
                value: 0.0,
                clamped: false,
                degenerate: true,
            };
        }
        let raw = self.first * corr1 + self.second * corr2;
        let value = raw.clamp(-1.0, 1.0);
        CorrelationUpdate {
            value,
            clamped: value != raw,
            degenerate: false,
        }
    }
}

/// `Corr(tau, max{xi, eta}) = (sd(xi) Corr(tau, xi) Phi(alpha) + sd(eta) Corr(tau, eta) Phi(-alpha)) / sd(max)`,
/// clamped to `[-1, 1]`.
pub fn clark_correlation_update(
    var1: f64,
    corr_tau_1: f64,
    var2: f64,
    corr_tau_2: f64,
    alpha: f64,
    pair: &PairMoments,
) -> CorrelationUpdate {
    CorrelationWeights::new(var1, var2, alpha, pair).apply(corr_tau_1, corr_tau_2)
}

/// Running state: moments of the approximate maximum of the variables absorbed so far and
/// its correlations with every variable (entries below `absorbed` are stale).
#[derive(Debug, Clone, PartialEq)]
pub struct ClarkState {
    pub mean: f64,
    pub second_moment: f64,
    pub correlations: Vec<f64>,
    pub absorbed: usize,
    pub clamp_events: usize,
    pub degenerate_events: usize,
}

fn correlation_of<G: GaussianVector + ?Sized>(spec: &G, sd: &[f64], i: usize, j: usize) -> f64 {
    let denom = sd[i] * sd[j];
    if denom > 0.0 {
        (spec.covariance(i, j) / denom).clamp(-1.0, 1.0)
    } else {
        0.0
    }
}

impl ClarkState {
    /// State after absorbing the first variable.
    pub fn start<G: GaussianVector + ?Sized>(spec: &G, sd: &[f64]) -> Result<Self> {
        let n = spec.size();
        if n == 0 {
            return Err(Error::invalid("Clark recursion needs at least one variable"));
        }
        let mean = spec.mean(0);
        let correlations = (0..n).map(|j| if j == 0 { 1.0 } else { correlation_of(spec, sd, 0, j) }).collect();
        Ok(Self {
            mean,
            second_moment: mean * mean + spec.variance(0),
            correlations,
            absorbed: 1,
            clamp_events: 0,
            degenerate_events: 0,
        })
    }

    pub fn variance(&self) -> f64 {
        (self.second_moment - self.mean * self.mean).max(0.0)
    }

    /// Folds in variable `self.absorbed`.
    pub fn absorb_next<G: GaussianVector + ?Sized>(&mut self, spec: &G, sd: &[f64]) -> Result<()> {
        let k = self.absorbed;
        let n = spec.size();
        if k >= n {
            return Err(Error::invalid("all variables already absorbed"));
        }
        let var_max = self.variance();
        let var_k = sd[k] * sd[k];
        let cov = self.correlations[k] * var_max.sqrt() * sd[k];
        let pair = clark_pair_moments(self.mean, var_max, spec.mean(k), var_k, cov)?;
        let weights = CorrelationWeights::new(var_max, var_k, pair.alpha, &pair);
        if weights.degenerate {
            self.degenerate_events += 1;
        }
        for j in k + 1..n {
            let update = weights.apply(self.correlations[j], correlation_of(spec, sd, k, j));
            self.clamp_events += usize::from(update.clamped);
            self.correlations[j] = update.value;
        }
        self.mean = pair.mean;
        self.second_moment = pair.second_moment;
        self.absorbed += 1;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ClarkOptions {
    pub max_size: usize,
    /// Run even when the vector is larger than `max_size`.
    pub force: bool,
}

impl Default for ClarkOptions {
    fn default() -> Self {
        Self {
            max_size: DEFAULT_MAX_SIZE,
            force: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClarkReport {
    pub expected_max: f64,
    pub second_moment: f64,
    pub clamp_events: usize,
    pub degenerate_events: usize,
}

/// Runs the recursion over all variables. `O(N^2)` time, `O(N)` memory.
pub fn clark_run<G: GaussianVector + ?Sized>(spec: &G, options: ClarkOptions) -> Result<ClarkReport> {
    let n = spec.size();
    if n > options.max_size && !options.force {
        return Err(Error::SizeGuard {
            size: n,
            limit: options.max_size,
        });
    }
    let sd: Vec<f64> = (0..n).map(|i| spec.variance(i).max(0.0).sqrt()).collect();
    let mut state = ClarkState::start(spec, &sd)?;
    while state.absorbed < n {
        state.absorb_next(spec, &sd)?;
    }
    Ok(ClarkReport {
        expected_max: state.mean,
        second_moment: state.second_moment,
        clamp_events: state.clamp_events,
        degenerate_events: state.degenerate_events,
    })
}

/// Approximate `E max_i xi_i` with the default size guard.
pub fn clark_expected_max<G: GaussianVector + ?Sized>(spec: &G) -> Result<f64> {
    clark_run(spec, ClarkOptions::default()).map(|r| r.expected_max)
}

/// Clark approximation of `E max_i B^H(i/N)`.
pub fn fbm_clark_expected_max(grid: PathGrid, options: ClarkOptions) -> Result<ClarkReport> {
    clark_run(&FbmGaussianVector::new(grid), options)
}
