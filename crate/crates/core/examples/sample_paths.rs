//! Draws fBm paths by circulant embedding and by dense Cholesky factorization.
//!
//! `cargo run --example sample_paths -- [n_exp] [hurst]`

use fbmax::fbm::{build_embedding, path_from_increments, CholeskySampler};
use fbmax::rng::replication_rng;
use fbmax::PathGrid;

fn main() -> fbmax::Result<()> {
    let mut args = std::env::args().skip(1);
    let n_exp: u32 = args.next().map_or(6, |s| s.parse().expect("n_exp"));
    let hurst: f64 = args.next().map_or(0.3, |s| s.parse().expect("hurst"));
    let grid = PathGrid::with_exponent(n_exp, hurst)?;

    let spectrum = build_embedding(grid)?;
    println!(
        "N = {}, H = {}, embedding size {}, smallest raw eigenvalue {:.3e}",
        grid.n_points(),
        hurst,
        spectrum.size(),
        spectrum.min_raw_eigenvalue()
    );

    // One synthesis yields two independent paths.
    let (a, b) = spectrum.sample_fgn_pair(&mut replication_rng(7, 0));
    for (label, increments) in [("circulant re", a), ("circulant im", b)] {
        let path = path_from_increments(&increments, grid)?;
        print_path(label, path.values());
    }

    if grid.n_points() <= 1024 {
        let sampler = CholeskySampler::new(grid)?;
        let path = sampler.sample(&mut replication_rng(7, 1));
        print_path("cholesky", path.values());
    }
    Ok(())
}

fn print_path(label: &str, values: &[f64]) {
    let step = (values.len() / 8).max(1);
    let shown: Vec<String> = values.iter().step_by(step).map(|v| format!("{v:+.3}")).collect();
    println!("{label:>13}: {} ... B(1) = {:+.4}", shown.join(" "), values[values.len() - 1]);
}
