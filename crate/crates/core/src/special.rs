//! Gaussian special functions.
//!
//! `erf`/`erfc` come from `libm` (a port of the FreeBSD msun routines, < 1 ulp). The inverse
//! error functions start from a single-precision polynomial approximation and are refined by Newton
//! steps against those, which gives close to full double precision everywhere in the domain.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use crate::error::{Error, Result};

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;
const MAX_NEWTON_STEPS: usize = 60;

#[inline]
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

#[inline]
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Standard normal density.
#[inline]
pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Standard normal distribution function, evaluated through `erfc` so both tails keep full
/// relative accuracy.
#[inline]
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * erfc(-x * FRAC_1_SQRT_2)
}

/// `ln Phi(x)`, finite for every finite `x`.
pub fn log_norm_cdf(x: f64) -> f64 {
    if x >= 0.0 {
        (-0.5 * erfc(x * FRAC_1_SQRT_2)).ln_1p()
    } else if x > -37.0 {
        (0.5 * erfc(-x * FRAC_1_SQRT_2)).ln()
    } else {
        // Mills ratio asymptotics; erfc underflows below here.
        let z = -x;
        let z2 = z * z;
        -0.5 * z2 - (z * (2.0 * PI).sqrt()).ln() + (-1.0 / z2 + 2.5 / (z2 * z2)).ln_1p()
    }
}

/// Single-precision approximation of `erfinv(1 - q)` parameterised by `q` so that tiny tails are not
/// rounded away. Relative error about 1e-7.
fn initial_guess(q: f64) -> f64 {
    let y = 1.0 - q;
    let mut w = -(q * (2.0 - q)).ln();
    let p = if w < 5.0 {
        w -= 2.5;
        let mut p = 2.810_226_36e-08;
        p = 3.432_739_39e-07 + p * w;
        p = -3.523_387_7e-06 + p * w;
        p = -4.391_506_54e-06 + p * w;
        p = 0.000_218_580_87 + p * w;
        p = -0.001_253_725_03 + p * w;
        p = -0.004_177_681_64 + p * w;
        p = 0.246_640_727 + p * w;
        1.501_409_41 + p * w
    } else {
        w = w.sqrt() - 3.0;
        let mut p = -0.000_200_214_257;
        p = 0.000_100_950_558 + p * w;
        p = 0.001_349_343_22 + p * w;
        p = -0.003_673_428_44 + p * w;
        p = 0.005_739_507_73 + p * w;
        p = -0.007_622_461_3 + p * w;
        p = 0.009_438_870_47 + p * w;
        p = 1.001_674_06 + p * w;
        2.832_976_82 + p * w
    };
    p * y
}

/// Inverse of the complementary error function on `(0, 2)`.
pub fn inverse_erfc(q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 2.0) {
        return Err(Error::invalid(format!("inverse_erfc requires 0 < q < 2, got {q}")));
    }
    if q > 1.0 {
        return inverse_erfc(2.0 - q).map(|x| -x);
    }
    if q == 1.0 {
        return Ok(0.0);
    }
    let log_q = q.ln();
    let mut x = if q > 1e-30 {
        initial_guess(q)
    } else {
        // erfc(x) ~ exp(-x^2) / (x sqrt(pi)) in the far tail.
        let mut x = (-log_q).sqrt();
        for _ in 0..3 {
            x = (-log_q - (x * PI.sqrt()).ln()).sqrt();
        }
        x
    };
    // Newton on ln erfc(x) = ln q; the log keeps the far tail well scaled.
    for _ in 0..MAX_NEWTON_STEPS {
        let tail = erfc(x);
        if tail <= 0.0 {
            x *= 0.99;
            continue;
        }
        let slope = -FRAC_2_SQRT_PI * (-x * x).exp() / tail;
        let step = (tail.ln() - log_q) / slope;
        x -= step;
        if step.abs() <= 2.0 * f64::EPSILON * x.abs() {
            break;
        }
    }
    Ok(x)
}

/// Inverse of the error function on `(-1, 1)`.
pub fn inverse_erf(y: f64) -> Result<f64> {
    if !(y > -1.0 && y < 1.0) {
        return Err(Error::invalid(format!("inverse_erf requires -1 < y < 1, got {y}")));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    if y.abs() > 0.5 {
        // 1 - |y| is exact here.
        return inverse_erfc(1.0 - y.abs()).map(|x| x.copysign(y));
    }
    let mut x = initial_guess(1.0 - y);
    for _ in 0..MAX_NEWTON_STEPS {
        let step = (erf(x) - y) / (FRAC_2_SQRT_PI * (-x * x).exp());
        x -= step;
        if step.abs() <= 2.0 * f64::EPSILON * x.abs() {
            break;
        }
    }
    Ok(x)
}

/// Standard normal quantile, `sqrt(2) * erfinv(2p - 1)`, evaluated through `erfc` in the
/// upper half so that `p` close to one keeps its precision.
pub fn norm_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid(format!("norm_quantile requires 0 < p < 1, got {p}")));
    }
    inverse_erfc(2.0 * p).map(|x| -SQRT_2 * x)
}
