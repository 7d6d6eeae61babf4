//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
//!
//! `cargo test --release --test acceptance`

mod common;

use std::time::{Duration, Instant};

use common::{bivariate_max_moments, fbm_cov, max_covariance_z, mean_and_se};
use fbmax::bounds::{
    borovkov_bounds, delta_upper_bound, limit_integral, limit_integral_report, lower_bound_coefficient,
    sudakov_lower_bound,
};
use fbmax::clark::{clark_expected_max, clark_pair_moments, fbm_clark_expected_max, ClarkOptions, DenseGaussianVector};
use fbmax::fbm::{build_embedding, path_from_increments, CholeskySampler};
use fbmax::functionals::average_second_moment_theoretical;
use fbmax::montecarlo::{simulate_functionals, summarize, Execution, Z_95};
use fbmax::rng::replication_rng;
use fbmax::PathGrid;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_160_531;

struct Outcome {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(summary: impl Into<String>) -> Self {
        Self {
            pass: true,
            summary: summary.into(),
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, detail: String) {
        self.pass &= ok;
        self.details.push(format!("{} {detail}", if ok { "ok  " } else { "MISS" }));
    }

    fn runtime(&mut self, elapsed: Duration, budget: Duration) {
        self.check(
            elapsed <= budget,
            format!("runtime {:.2}s (budget {}s)", elapsed.as_secs_f64(), budget.as_secs()),
        );
    }
}

/// `|x - target| <= half a unit in its last printed digit`.
fn matches_printed(x: f64, printed: &str) -> bool {
    let decimals = printed.split('.').nth(1).map_or(0, str::len) as i32;
    let target: f64 = printed.parse().unwrap();
    (x - target).abs() <= 0.5 * 10f64.powi(-decimals) + 1e-12
}

fn criterion_1() -> Outcome {
    let mut o = Outcome::new("limit integral reproduces the integral columns within 0.002");
    for (k, target) in [(8, 1.9989), (12, 2.5640), (15, 2.9232), (19, 3.3469), (20, 3.4452), (24, 3.815)] {
        let start = Instant::now();
        let v = limit_integral(1 << k).unwrap();
        let t = start.elapsed();
        o.check(
            (v - target).abs() <= 0.002 && t < Duration::from_secs(1),
            format!("N=2^{k}: {v:.6} vs {target} ({:.1} ms)", t.as_secs_f64() * 1e3),
        );
    }
    o
}

fn criterion_2() -> Outcome {
    let mut o = Outcome::new("inverse-erf and tail quadratures agree to 1e-5 for N = 2^8..2^24");
    let worst = (8..=24)
        .map(|k| (k, limit_integral_report(1 << k).unwrap().discrepancy()))
        .fold((0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
    o.check(worst.1 < 1e-5, format!("largest discrepancy {:.2e} at N=2^{}", worst.1, worst.0));
    o
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::new("bounds table: Borovkov-lower row and Sudakov spot checks to 4 decimals");
    let start = Instant::now();
    for (h, target) in [(0.5, "0.5811"), (0.09, "1.3696"), (0.01, "4.1089"), (0.0013, "11.396"), (0.0001, "41.089")] {
        let v = borovkov_bounds(h).unwrap().lower;
        o.check(
            matches_printed(v, target),
            format!(
                "Borovkov lower H={h}: {v:.4} vs {target} (target/ours = {:.4}; (H pi 2.72 ln2)^(-1/2) = {:.4})",
                target.parse::<f64>().unwrap() / v,
                (h * std::f64::consts::PI * 2.72 * std::f64::consts::LN_2).powf(-0.5)
            ),
        );
    }
    for (k, h, target) in [(8, 0.09, "0.6853"), (19, 0.0001, "1.7367"), (12, 0.5, "0.0216")] {
        let v = sudakov_lower_bound(1 << k, h).unwrap();
        o.check(matches_printed(v, target), format!("Sudakov N=2^{k} H={h}: {v:.4} vs {target}"));
    }
    o.runtime(start.elapsed(), Duration::from_secs(1));
    o
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::new("constants c1 = 0.2055 and 16.765 to 4 significant figures");
    let c1 = lower_bound_coefficient();
    o.check(format!("{c1:.4}") == "0.2055", format!("c1 = {c1:.6}"));
    let slope = 2.0 * 3.4452 * (std::f64::consts::PI * std::f64::consts::E * std::f64::consts::LN_2).sqrt();
    o.check((slope - 16.765).abs() < 0.005, format!("2 * 3.4452 * sqrt(pi e ln2) = {slope:.5}"));
    o
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::new("discretization-error upper bound at N=2^20, H=0.05 is below 11.18");
    let d = delta_upper_bound(1 << 20, 0.05).unwrap();
    o.check(d.valid && d.value < 11.18, format!("bound = {:.4} (valid: {})", d.value, d.valid));
    o
}

fn criterion_6() -> Outcome {
    let mut o = Outcome::new("circulant covariance within 5 SE at N=64; circulant vs Cholesky max mean within 3 SE at N=128");
    let start = Instant::now();
    let paths = 20_000;
    for h in [0.0001, 0.1, 0.5, 0.9] {
        let grid = PathGrid::new(64, h).unwrap();
        let spectrum = build_embedding(grid).unwrap();
        let mut sample = Vec::with_capacity(paths);
        for s in 0..paths as u64 / 2 {
            let (a, b) = spectrum.sample_fgn_pair(&mut replication_rng(SEED, s));
            sample.push(path_from_increments(&a, grid).unwrap().into_values());
            sample.push(path_from_increments(&b, grid).unwrap().into_values());
        }
        let z = max_covariance_z(&sample, h);
        o.check(z < 5.0, format!("N=64 H={h}: largest |z| over 2080 entries = {z:.2}"));
    }
    for h in [0.0001, 0.1, 0.5, 0.9] {
        let grid = PathGrid::new(128, h).unwrap();
        let circ = simulate_functionals(&build_embedding(grid).unwrap(), paths, SEED, Execution::Parallel).max;
        let sampler = CholeskySampler::new(grid).unwrap();
        let chol: Vec<f64> = (0..paths as u64)
            .map(|r| {
                let p = sampler.sample(&mut replication_rng(SEED + 1, r));
                p.values().iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            })
            .collect();
        let (m1, se1) = mean_and_se(&circ);
        let (m2, se2) = mean_and_se(&chol);
        let z = (m1 - m2).abs() / se1.hypot(se2);
        o.check(z < 3.0, format!("N=128 H={h}: circulant {m1:.4} vs Cholesky {m2:.4} (z = {z:.2})"));
    }
    o.runtime(start.elapsed(), Duration::from_secs(120));
    o
}

fn criterion_7() -> Outcome {
    let mut o = Outcome::new("Monte Carlo max-functional cells within 3 run-local SE (n=1000)");
    for (k, h, target) in [(10, 0.0001, 2.2854), (14, 0.01, 2.7612)] {
        let start = Instant::now();
        let grid = PathGrid::with_exponent(k, h).unwrap();
        let s = summarize(&simulate_functionals(&build_embedding(grid).unwrap(), 1000, SEED, Execution::Parallel).max)
            .unwrap();
        let t = start.elapsed();
        o.check(
            s.z_score(target) < 3.0 && t < Duration::from_secs(300),
            format!(
                "N=2^{k} H={h}: {:.4} +- {:.4} vs {target} (z = {:.2}, {:.2}s)",
                s.mean,
                s.std_error(),
                s.z_score(target),
                t.as_secs_f64()
            ),
        );
    }
    o
}

fn criterion_8() -> Outcome {
    let mut o = Outcome::new("Clark: exact pair moments (20 cases, 1e-6) and table cells within 2%");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let (m1, m2) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let (v1, v2): (f64, f64) = (rng.random_range(0.2..3.0), rng.random_range(0.2..3.0));
        let cov = rng.random_range(-0.95..0.95) * (v1 * v2).sqrt();
        let pair = clark_pair_moments(m1, v1, m2, v2, cov).unwrap();
        let (first, second) = bivariate_max_moments(m1, v1, m2, v2, cov);
        worst = worst.max((pair.mean - first).abs()).max((pair.second_moment - second).abs());
    }
    o.check(worst < 1e-6, format!("largest pair error vs 2-D quadrature {worst:.2e}"));
    for (k, h, target) in [(8, 0.0001, 1.9839), (10, 0.09, 1.1971)] {
        let grid = PathGrid::with_exponent(k, h).unwrap();
        let start = Instant::now();
        let v = fbm_clark_expected_max(grid, ClarkOptions::default()).unwrap().expected_max;
        let t = start.elapsed();
        let n = grid.n_points();
        let reversed = DMatrix::from_fn(n, n, |i, j| grid.covariance(n - i, n - j));
        let descending = clark_expected_max(&DenseGaussianVector::new(vec![0.0; n], reversed).unwrap()).unwrap();
        let rel = (v - target).abs() / target;
        o.check(
            rel <= 0.02 && t <= Duration::from_secs(60),
            format!(
                "N=2^{k} H={h}: {v:.6} vs {target} (rel {:.2}%; descending order {descending:.6}; {:.2}s)",
                100.0 * rel,
                t.as_secs_f64()
            ),
        );
    }
    o
}

fn criterion_9() -> Outcome {
    let mut o = Outcome::new("average functional at H=0.01, N=2^12: mean CI covers 0, second moment in band; closed form vs double sum");
    let (h, n) = (0.01, 1000);
    let grid = PathGrid::with_exponent(12, h).unwrap();
    let avg = simulate_functionals(&build_embedding(grid).unwrap(), n, SEED, Execution::Parallel).average;
    let s = summarize(&avg).unwrap();
    o.check(
        s.ci_contains(0.0),
        format!("mean {:.4}, CI [{:.4}, {:.4}]", s.mean, s.ci95_low, s.ci95_high),
    );
    let sigma2 = average_second_moment_theoretical(grid);
    let second = avg.iter().map(|x| x * x).sum::<f64>() / n as f64;
    let half = Z_95 * sigma2 * (2.0 / n as f64).sqrt();
    o.check(
        (second - sigma2).abs() <= half,
        format!("second moment {second:.4} vs {sigma2:.4} +- {half:.4}"),
    );
    let mut worst: f64 = 0.0;
    for size in [1, 2, 3, 17, 64, 200, 512] {
        for h in [0.0001, 0.01, 0.3, 0.5, 0.9] {
            let mut sum = 0.0;
            for i in 1..=size {
                for j in 1..=size {
                    sum += fbm_cov(i as f64 / size as f64, j as f64 / size as f64, h);
                }
            }
            let brute = sum / (size * size) as f64;
            let closed = average_second_moment_theoretical(PathGrid::new(size, h).unwrap());
            worst = worst.max((closed - brute).abs() / brute);
        }
    }
    o.check(worst < 1e-10, format!("largest relative error of closed form, N <= 512: {worst:.2e}"));
    o
}

fn criterion_10() -> Outcome {
    let mut o = Outcome::new("small-H paradox: sample means below the continuous lower bound, inside [Sudakov, limit] up to 3 SE");
    let start = Instant::now();
    let mut cells = 0;
    let mut below = 0;
    let mut inside = 0;
    let mut worst_z: f64 = f64::NEG_INFINITY;
    for h in [0.0001, 0.0005, 0.0009, 0.0013] {
        let lower = borovkov_bounds(h).unwrap().lower;
        for k in 8..=19 {
            let n = 1u64 << k;
            let grid = PathGrid::with_exponent(k, h).unwrap();
            let s = summarize(&simulate_functionals(&build_embedding(grid).unwrap(), 1000, SEED, Execution::Parallel).max)
                .unwrap();
            let (sudakov, limit) = (sudakov_lower_bound(n, h).unwrap(), limit_integral(n).unwrap());
            let se = s.std_error();
            cells += 1;
            below += usize::from(s.mean < lower);
            let ok = s.mean + 3.0 * se >= sudakov && s.mean - 3.0 * se <= limit;
            inside += usize::from(ok);
            worst_z = worst_z.max((s.mean - limit) / se);
            if !ok {
                o.details.push(format!(
                    "     N=2^{k} H={h}: {:.4} +- {se:.4} outside [{sudakov:.4}, {limit:.4}]",
                    s.mean
                ));
            }
        }
    }
    o.check(below == cells, format!("{below}/{cells} cells below the continuous lower bound"));
    o.check(
        inside == cells,
        format!("{inside}/{cells} cells inside the sandwich (largest (mean - limit)/SE = {worst_z:.2})"),
    );
    o.details.push(format!("     {:.1}s", start.elapsed().as_secs_f64()));
    o
}

fn main() {
    let criteria: [(usize, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failed = Vec::new();
    for (k, run) in criteria {
        let o = run();
        println!("[{}] criterion {k}: {}", if o.pass { "PASS" } else { "FAIL" }, o.summary);
        for d in &o.details {
            println!("       {d}");
        }
        if !o.pass {
            failed.push(k);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 10 criteria pass");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
