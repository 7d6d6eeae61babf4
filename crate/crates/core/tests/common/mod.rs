#![allow(dead_code)]

use std::f64::consts::PI;

/// Composite Simpson rule with `panels` (even) subintervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    assert!(panels.is_multiple_of(2));
    if b <= a {
        return 0.0;
    }
    let h = (b - a) / panels as f64;
    let mut sum = f(a) + f(b);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

fn phi(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// `(E max(X1, X2), E max(X1, X2)^2)` for a bivariate normal, by brute-force 2-D quadrature.
///
/// `X1 = m1 + s1 z1`, `X2 = m2 + b z1 + c z2` with independent standard normals; the inner
/// integral over `z2` is split where `X2 = X1`.
pub fn bivariate_max_moments(m1: f64, v1: f64, m2: f64, v2: f64, cov: f64) -> (f64, f64) {
    let s1 = v1.sqrt();
    let b = cov / s1;
    let c = (v2 - b * b).sqrt();
    assert!(c > 1e-3, "oracle needs a non-degenerate pair");
    const L: f64 = 10.0;
    let inner = |z1: f64, power: i32| {
        let x1 = m1 + s1 * z1;
        let kink = ((x1 - m2 - b * z1) / c).clamp(-L, L);
        let g = |z2: f64| (m1 + s1 * z1).max(m2 + b * z1 + c * z2).powi(power) * phi(z2);
        simpson(g, -L, kink, 600) + simpson(g, kink, L, 600)
    };
    let first = simpson(|z1| inner(z1, 1) * phi(z1), -L, L, 1200);
    let second = simpson(|z1| inner(z1, 2) * phi(z1), -L, L, 1200);
    (first, second)
}

/// fBm covariance `(t^{2H} + s^{2H} - |t - s|^{2H}) / 2`.
pub fn fbm_cov(t: f64, s: f64, h: f64) -> f64 {
    0.5 * (t.powf(2.0 * h) + s.powf(2.0 * h) - (t - s).abs().powf(2.0 * h))
}

/// Elementwise check of a sample covariance of zero-mean paths: returns the largest
/// `|sample - exact| / SE` over all pairs, using uncentered products.
pub fn max_covariance_z(paths: &[Vec<f64>], h: f64) -> f64 {
    let n = paths[0].len();
    let count = paths.len() as f64;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            let (mut s, mut s2) = (0.0, 0.0);
            for p in paths {
                let x = p[i] * p[j];
                s += x;
                s2 += x * x;
            }
            let mean = s / count;
            let var = (s2 / count - mean * mean) * count / (count - 1.0);
            let se = (var / count).sqrt();
            let exact = fbm_cov((i + 1) as f64 / n as f64, (j + 1) as f64 / n as f64, h);
            worst = worst.max((mean - exact).abs() / se);
        }
    }
    worst
}

pub fn mean_and_se(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
