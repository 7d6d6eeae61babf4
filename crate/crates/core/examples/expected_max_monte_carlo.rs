//! Seeded Monte Carlo estimates of `E max_i B^H(i/N)` and `E (1/N) sum_i B^H(i/N)`.
//!
//! `cargo run --release --example expected_max_monte_carlo -- [n_exp] [samples]`

use fbmax::montecarlo::{run_fbm_experiment, ExperimentConfig};
use fbmax::{FunctionalKind, PathGrid};

fn main() -> fbmax::Result<()> {
    let mut args = std::env::args().skip(1);
    let n_exp: u32 = args.next().map_or(10, |s| s.parse().expect("n_exp"));
    let samples: usize = args.next().map_or(1000, |s| s.parse().expect("samples"));

    println!("N = 2^{n_exp}, n = {samples}");
    println!("{:>8} {:>10} {:>8} {:>21} {:>10}", "H", "E max", "SE", "95% CI", "E avg");
    for hurst in [0.5, 0.09, 0.01, 0.0013, 0.0001] {
        let config = ExperimentConfig::new(PathGrid::with_exponent(n_exp, hurst)?, samples, 1)?;
        let summaries = run_fbm_experiment(&config)?;
        let max = &summaries[&FunctionalKind::Max];
        let avg = &summaries[&FunctionalKind::Average];
        println!(
            "{hurst:>8} {:>10.4} {:>8.4} [{:>8.4}, {:>8.4}] {:>10.4}",
            max.mean,
            max.std_error(),
            max.ci95_low,
            max.ci95_high,
            avg.mean
        );
    }
    Ok(())
}
