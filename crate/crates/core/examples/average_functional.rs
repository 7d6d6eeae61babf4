//! Sample moments of the average functional against the closed-form second moment.
//!
//! `cargo run --release --example average_functional`

use fbmax::fbm::build_embedding;
use fbmax::functionals::{average_second_moment_limit, average_second_moment_theoretical};
use fbmax::montecarlo::{simulate_functionals, summarize, Execution};
use fbmax::PathGrid;

fn main() -> fbmax::Result<()> {
    let samples = 1000;
    println!("{:>7} {:>6} {:>10} {:>10} {:>10} {:>10}", "H", "N", "mean", "variance", "exact", "N -> inf");
    for hurst in [0.0001, 0.01, 0.09] {
        for n_exp in [8, 12, 16] {
            let grid = PathGrid::with_exponent(n_exp, hurst)?;
            let sims = simulate_functionals(&build_embedding(grid)?, samples, 11, Execution::Parallel);
            let s = summarize(&sims.average)?;
            println!(
                "{hurst:>7} {:>6} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
                format!("2^{n_exp}"),
                s.mean,
                s.variance,
                average_second_moment_theoretical(grid),
                average_second_moment_limit(hurst)
            );
        }
    }
    Ok(())
}
