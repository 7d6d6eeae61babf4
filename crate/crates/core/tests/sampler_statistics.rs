mod common;

use common::{fbm_cov, max_covariance_z, mean_and_se};
use fbmax::fbm::{build_embedding, path_from_increments, CholeskySampler};
use fbmax::montecarlo::{simulate_functionals, Execution};
use fbmax::rng::replication_rng;
use fbmax::PathGrid;

fn circulant_paths(grid: PathGrid, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let spectrum = build_embedding(grid).unwrap();
    let mut out = Vec::with_capacity(count);
    let mut index = 0;
    while out.len() < count {
        let (a, b) = spectrum.sample_fgn_pair(&mut replication_rng(seed, index));
        index += 1;
        for inc in [a, b] {
            out.push(path_from_increments(&inc, grid).unwrap().into_values());
        }
    }
    out.truncate(count);
    out
}

#[test]
fn circulant_covariance_small_grids() {
    for h in [0.0001, 0.01, 0.5, 0.9] {
        let grid = PathGrid::new(16, h).unwrap();
        let z = max_covariance_z(&circulant_paths(grid, 20_000, 3), h);
        assert!(z < 5.0, "H={h}: worst z {z}");
    }
}

#[test]
fn cholesky_covariance_small_grid() {
    let h = 0.25;
    let grid = PathGrid::new(16, h).unwrap();
    let sampler = CholeskySampler::new(grid).unwrap();
    let paths: Vec<Vec<f64>> = (0..20_000)
        .map(|r| sampler.sample(&mut replication_rng(4, r)).into_values())
        .collect();
    assert!(max_covariance_z(&paths, h) < 5.0);
}

#[test]
fn endpoint_variance_is_one() {
    // Self-similarity: Var B^H(1) = 1 whatever N is.
    for (k, h) in [(4, 0.3), (10, 0.05), (14, 0.7)] {
        let grid = PathGrid::with_exponent(k, h).unwrap();
        let ends: Vec<f64> = circulant_paths(grid, 4000, 5).iter().map(|p| p[p.len() - 1]).collect();
        let second = ends.iter().map(|x| x * x).sum::<f64>() / ends.len() as f64;
        // Var of the sample second moment of N(0, 1) is 2 / n.
        let se = (2.0 / ends.len() as f64).sqrt();
        assert!((second - 1.0).abs() < 5.0 * se, "N=2^{k} H={h}: {second}");
    }
}

#[test]
fn increments_are_stationary() {
    let (k, h) = (6, 0.8);
    let grid = PathGrid::with_exponent(k, h).unwrap();
    let n = grid.n_points();
    let paths = circulant_paths(grid, 20_000, 6);
    let lag1 = |i: usize| -> Vec<f64> {
        paths
            .iter()
            .map(|p| {
                let a = if i == 0 { p[0] } else { p[i] - p[i - 1] };
                let b = p[i + 1] - p[i];
                a * b
            })
            .collect()
    };
    let exact = fbm_cov(2.0 / n as f64, 1.0 / n as f64, h) - fbm_cov(1.0 / n as f64, 1.0 / n as f64, h);
    for i in [0, n / 2, n - 2] {
        let (mean, se) = mean_and_se(&lag1(i));
        assert!((mean - exact).abs() < 5.0 * se, "i={i}: {mean} vs {exact}");
    }
}

#[test]
fn samplers_agree_on_max_moments() {
    let (n, h) = (128, 0.05);
    let grid = PathGrid::new(n, h).unwrap();
    let count = 20_000;
    let circ = simulate_functionals(&build_embedding(grid).unwrap(), count, 8, Execution::Parallel).max;
    let sampler = CholeskySampler::new(grid).unwrap();
    let chol: Vec<f64> = (0..count as u64)
        .map(|r| {
            let p = sampler.sample(&mut replication_rng(9, r));
            p.values().iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    let (m1, se1) = mean_and_se(&circ);
    let (m2, se2) = mean_and_se(&chol);
    assert!((m1 - m2).abs() < 3.0 * se1.hypot(se2), "{m1} vs {m2}");
    let sq = |x: &[f64]| x.iter().map(|v| v * v).collect::<Vec<_>>();
    let (q1, sq1) = mean_and_se(&sq(&circ));
    let (q2, sq2) = mean_and_se(&sq(&chol));
    assert!((q1 - q2).abs() < 3.0 * sq1.hypot(sq2), "{q1} vs {q2}");
}

#[test]
fn circulant_matches_cholesky_across_sizes() {
    for n in [16, 64, 256] {
        for h in [0.0001, 0.01, 0.5, 0.9] {
            let grid = PathGrid::new(n, h).unwrap();
            let count = 6000;
            let circ = simulate_functionals(&build_embedding(grid).unwrap(), count, 10, Execution::Parallel).max;
            let sampler = CholeskySampler::new(grid).unwrap();
            let chol: Vec<f64> = (0..count as u64)
                .map(|r| {
                    let p = sampler.sample(&mut replication_rng(11, r));
                    p.values().iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                })
                .collect();
            let (m1, se1) = mean_and_se(&circ);
            let (m2, se2) = mean_and_se(&chol);
            assert!((m1 - m2).abs() < 4.0 * se1.hypot(se2), "N={n} H={h}: {m1} vs {m2}");
        }
    }
}

#[test]
fn embedding_is_nonnegative_on_experiment_grid() {
    for h in [0.0001, 0.0013, 0.01, 0.09, 0.5, 0.9, 0.99] {
        for k in [0, 1, 8, 14] {
            let spectrum = build_embedding(PathGrid::with_exponent(k, h).unwrap()).unwrap();
            assert!(spectrum.eigenvalues().iter().all(|&l| l >= 0.0));
        }
    }
}
