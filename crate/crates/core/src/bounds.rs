//! Closed-form bounds on `E max B^H` and on the discretization error
//! `Delta_N = E max_{[0,1]} B^H - E max_i B^H(i/N)`, and the `H -> 0` limit of the grid
//! expected maximum.

use std::f64::consts::{E, FRAC_1_SQRT_2, LN_2, PI};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_with_breaks, QuadOptions};
use crate::special::{erfc, inverse_erfc, log_norm_cdf};

/// Constant of the upper bound `E max_{[0,1]} B^H < 16.3 / sqrt(H)`.
pub const BOROVKOV_UPPER_CONSTANT: f64 = 16.3;

/// Slope of the relative-error bound `delta_H >= 1 - 16.765 sqrt(H)` at `N = 2^20`.
pub const RELATIVE_ERROR_SLOPE: f64 = 16.765;

/// Largest grid size accepted by the limit integral.
pub const MAX_LIMIT_POINTS: u64 = 1 << 31;

/// Required agreement between the two quadrature routes of [`limit_integral`].
pub const LIMIT_CROSS_CHECK_TOLERANCE: f64 = 1e-5;

fn check_hurst(hurst: f64) -> Result<()> {
    if hurst > 0.0 && hurst < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("Hurst index must lie in (0, 1), got {hurst}")))
    }
}

fn check_points(n: u64) -> Result<()> {
    if n >= 1 {
        Ok(())
    } else {
        Err(Error::invalid("need at least one grid point"))
    }
}

/// `1 / (2 sqrt(pi e ln 2))`, the coefficient of `H^{-1/2}` in the lower bound.
pub fn lower_bound_coefficient() -> f64 {
    0.5 / (PI * E * LN_2).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BorovkovBounds {
    pub lower: f64,
    pub upper: f64,
}

/// `1 / (2 sqrt(H pi e ln 2)) <= E max_{[0,1]} B^H < 16.3 / sqrt(H)`.
pub fn borovkov_bounds(hurst: f64) -> Result<BorovkovBounds> {
    check_hurst(hurst)?;
    Ok(BorovkovBounds {
        lower: lower_bound_coefficient() / hurst.sqrt(),
        upper: BOROVKOV_UPPER_CONSTANT / hurst.sqrt(),
    })
}

/// Upper bound on `Delta_N`, flagged as outside its validity region when `N < 2^{1/H}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaUpperBound {
    pub value: f64,
    pub valid: bool,
}

/// `(2 sqrt(ln N) / N^H) (1 + 4 / N^H + 0.0074 / (ln N)^{3/2})`.
///
/// Accepts `0 < H <= 1`; the bound itself only holds when `N >= 2^{1/H}`, which is reported in
/// [`DeltaUpperBound::valid`].
pub fn delta_upper_bound(n: u64, hurst: f64) -> Result<DeltaUpperBound> {
    if n < 2 {
        return Err(Error::invalid(format!("Delta_N upper bound needs N >= 2, got {n}")));
    }
    if !(hurst > 0.0 && hurst <= 1.0) {
        return Err(Error::invalid(format!("Hurst index must lie in (0, 1], got {hurst}")));
    }
    let nf = n as f64;
    let log_n = nf.ln();
    let n_h = nf.powf(hurst);
    let value = 2.0 * log_n.sqrt() / n_h * (1.0 + 4.0 / n_h + 0.0074 / log_n.powf(1.5));
    // N >= 2^{1/H}  <=>  H log2 N >= 1, with a little slack for the boundary N = 2^{1/H}.
    let valid = hurst * nf.log2() >= 1.0 - 1e-12;
    Ok(DeltaUpperBound { value, valid })
}

fn sudakov_from_log(log_n_plus_one: f64, log_n: f64, hurst: f64) -> f64 {
    (log_n_plus_one / ((2.0 * hurst * log_n).exp() * 2.0 * PI * LN_2)).sqrt()
}

/// `sqrt(ln(N + 1) / (N^{2H} 2 pi ln 2))`, a lower bound on `E max_i B^H(i/N)`.
pub fn sudakov_lower_bound(n: u64, hurst: f64) -> Result<f64> {
    check_points(n)?;
    check_hurst(hurst)?;
    let nf = n as f64;
    Ok(sudakov_from_log(nf.ln_1p(), nf.ln(), hurst))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SudakovMaximizer {
    /// `1 / (2H) = ln e^{1/(2H)}`.
    pub log_n_star: f64,
    /// `floor(e^{1/(2H)})`, or `None` when it does not fit in a `u64`.
    pub n_star: Option<u64>,
    /// The Sudakov bound at `n_star`; on overflow it is evaluated at `ln N = 1/(2H)`, which
    /// coincides with the analytic maximum.
    pub value: f64,
    /// `(4 H pi e ln 2)^{-1/2}`.
    pub analytic_max: f64,
}

/// Where the Sudakov bound, as a function of `N`, peaks.
pub fn sudakov_maximizer(hurst: f64) -> Result<SudakovMaximizer> {
    check_hurst(hurst)?;
    let log_n_star = 0.5 / hurst;
    let analytic_max = lower_bound_coefficient() / hurst.sqrt();
    // u64::MAX is about e^{44.36}.
    let n_star = if log_n_star < 44.0 {
        Some(log_n_star.exp().floor() as u64)
    } else {
        None
    };
    let value = match n_star {
        Some(n) => sudakov_lower_bound(n.max(1), hurst)?,
        None => sudakov_from_log(log_n_star, log_n_star, hurst),
    };
    Ok(SudakovMaximizer {
        log_n_star,
        n_star,
        value,
        analytic_max,
    })
}

/// The limit integral evaluated along both quadrature routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitIntegral {
    pub n_points: u64,
    /// `int_{2^{-N}}^{1} erfinv(2 t^{1/N} - 1) dt`, i.e. `N int_{1/2}^1 erfinv(2z - 1) z^{N-1} dz`.
    pub inverse_erf_form: f64,
    /// `(1/sqrt 2) int_0^inf (1 - Phi(x)^N) dx`.
    pub tail_form: f64,
    pub inverse_erf_error: f64,
    pub tail_error: f64,
}

impl LimitIntegral {
    pub fn value(&self) -> f64 {
        self.inverse_erf_form
    }

    pub fn discrepancy(&self) -> f64 {
        (self.inverse_erf_form - self.tail_form).abs()
    }
}

fn limit_quad_options() -> QuadOptions {
    QuadOptions {
        abs_tol: 1e-10,
        rel_tol: 1e-11,
        max_intervals: 4000,
    }
}

/// `N int_{1/2}^1 erfinv(2z - 1) z^{N-1} dz` after `t = z^N`.
pub fn limit_integral_inverse_erf_form(n: u64) -> Result<(f64, f64)> {
    check_points(n)?;
    let nf = n as f64;
    let integrand = |t: f64| {
        let u = t.ln() / nf;
        let one_minus_z = -u.exp_m1();
        if !(one_minus_z > 0.0 && one_minus_z <= 0.5) {
            return 0.0;
        }
        // erfinv(2z - 1) = erfcinv(2 (1 - z)), keeping full precision as z -> 1.
        inverse_erfc(2.0 * one_minus_z).unwrap_or(0.0)
    };
    let lower = (-nf).exp2();
    let r = integrate(integrand, lower, 1.0, limit_quad_options())?;
    Ok((r.value, r.abs_error))
}

/// `(1/sqrt 2) int_0^inf (1 - Phi(x)^N) dx`, truncated where the integrand drops below
/// `1e-14` and split at `sqrt(2 ln N)` where the integrand falls off.
pub fn limit_integral_tail_form(n: u64) -> Result<(f64, f64)> {
    check_points(n)?;
    let nf = n as f64;
    let integrand = |x: f64| -(nf * log_norm_cdf(x)).exp_m1();
    let mut upper = 1.0;
    while nf * 0.5 * erfc(upper * FRAC_1_SQRT_2) > 1e-14 {
        upper += 0.25;
    }
    let centre = (2.0 * nf.ln()).sqrt();
    let breaks: Vec<f64> = if centre > 0.0 && centre < upper {
        vec![0.0, centre, upper]
    } else {
        vec![0.0, upper]
    };
    let r = integrate_with_breaks(integrand, &breaks, limit_quad_options())?;
    Ok((r.value * FRAC_1_SQRT_2, r.abs_error * FRAC_1_SQRT_2))
}

/// Both quadrature routes; fails unless they agree to [`LIMIT_CROSS_CHECK_TOLERANCE`].
pub fn limit_integral_report(n: u64) -> Result<LimitIntegral> {
    check_points(n)?;
    if n > MAX_LIMIT_POINTS {
        return Err(Error::invalid(format!("limit integral supported up to N = 2^31, got {n}")));
    }
    let (inverse_erf_form, inverse_erf_error) = limit_integral_inverse_erf_form(n)?;
    let (tail_form, tail_error) = limit_integral_tail_form(n)?;
    let report = LimitIntegral {
        n_points: n,
        inverse_erf_form,
        tail_form,
        inverse_erf_error,
        tail_error,
    };
    if report.discrepancy().is_nan() || report.discrepancy() > LIMIT_CROSS_CHECK_TOLERANCE {
        return Err(Error::Quadrature(format!(
            "limit integral routes disagree at N={n}: erfinv form {inverse_erf_form} (err {inverse_erf_error:e}), \
             tail form {tail_form} (err {tail_error:e})"
        )));
    }
    Ok(report)
}

/// `lim_{H->0} E max_i B^H(i/N) = (1/sqrt 2) E (max of N iid standard normals)^+`, an upper
/// bound on `E max_i B^H(i/N)` for every `H`.
pub fn limit_integral(n: u64) -> Result<f64> {
    limit_integral_report(n).map(|r| r.value())
}

/// `1 - N^{-2H}`, the bound on the gap between the limit and `E max_i B^H(i/N)`.
pub fn limit_rate_bound(n: u64, hurst: f64) -> Result<f64> {
    check_points(n)?;
    check_hurst(hurst)?;
    Ok(-(-2.0 * hurst * (n as f64).ln()).exp_m1())
}

/// `Delta_N >= 1 / (2 sqrt(H pi e ln 2)) - limit_integral(N)`. Negative values mean the bound
/// is vacuous and are returned as is.
pub fn delta_lower_bound(n: u64, hurst: f64) -> Result<f64> {
    Ok(borovkov_bounds(hurst)?.lower - limit_integral(n)?)
}

/// `delta_H = Delta_N / E max_{[0,1]} B^H >= 1 - 16.765 sqrt(H)` at `N = 2^20`.
pub fn relative_error_lower(hurst: f64) -> Result<f64> {
    check_hurst(hurst)?;
    Ok(1.0 - RELATIVE_ERROR_SLOPE * hurst.sqrt())
}

/// Relative-error bound for general `N`: `1 - limit_integral(N) / lower_bound(H)`.
pub fn relative_error_lower_at(n: u64, hurst: f64) -> Result<f64> {
    Ok(1.0 - limit_integral(n)? / borovkov_bounds(hurst)?.lower)
}

/// Every bound for one `(N, H)` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsReport {
    pub hurst: f64,
    pub n_points: u64,
    pub borovkov_lower: f64,
    pub borovkov_upper: f64,
    pub sudakov_lower: f64,
    /// Only present where `N >= 2^{1/H}`.
    pub delta_upper: Option<f64>,
    pub limit_integral: f64,
    pub delta_lower: f64,
    pub relative_error_lower: f64,
}

pub fn bounds_report(n: u64, hurst: f64) -> Result<BoundsReport> {
    let borovkov = borovkov_bounds(hurst)?;
    let limit = limit_integral(n)?;
    let delta_upper = if n >= 2 {
        let d = delta_upper_bound(n, hurst)?;
        d.valid.then_some(d.value)
    } else {
        None
    };
    Ok(BoundsReport {
        hurst,
        n_points: n,
        borovkov_lower: borovkov.lower,
        borovkov_upper: borovkov.upper,
        sudakov_lower: sudakov_lower_bound(n, hurst)?,
        delta_upper,
        limit_integral: limit,
        delta_lower: borovkov.lower - limit,
        relative_error_lower: 1.0 - limit / borovkov.lower,
    })
}
