//! For small H the simulated expected maximum sits far below the continuous-time lower bound,
//! yet inside the discrete sandwich `[Sudakov(N, H), limit integral(N)]`.
//!
//! `cargo run --release --example small_hurst_paradox`

use fbmax::bounds::{borovkov_bounds, limit_integral, sudakov_lower_bound};
use fbmax::montecarlo::{run_fbm_experiment, ExperimentConfig};
use fbmax::{FunctionalKind, PathGrid};

fn main() -> fbmax::Result<()> {
    println!(
        "{:>7} {:>5} {:>9} {:>9} {:>9} {:>10}",
        "H", "N", "Sudakov", "E max", "limit", "continuous"
    );
    for hurst in [0.0001, 0.0013, 0.01, 0.09] {
        let lower = borovkov_bounds(hurst)?.lower;
        for n_exp in [8, 12, 16] {
            let n = 1u64 << n_exp;
            let config = ExperimentConfig::new(PathGrid::with_exponent(n_exp, hurst)?, 1000, 5)?
                .with_functionals(&[FunctionalKind::Max]);
            let mean = run_fbm_experiment(&config)?[&FunctionalKind::Max].mean;
            println!(
                "{hurst:>7} {:>5} {:>9.4} {:>9.4} {:>9.4} {:>10.4}",
                format!("2^{n_exp}"),
                sudakov_lower_bound(n, hurst)?,
                mean,
                limit_integral(n)?,
                lower
            );
        }
    }
    Ok(())
}
