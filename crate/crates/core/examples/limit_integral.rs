//! The `H -> 0` limit `(1/sqrt 2) E (max of N iid normals)^+`, by two quadratures and by simulation.
//!
//! `cargo run --release --example limit_integral`

use fbmax::bounds::limit_integral_report;
use fbmax::montecarlo::run_iid_limit_experiment;

fn main() -> fbmax::Result<()> {
    println!("{:>6} {:>12} {:>12} {:>10} {:>14}", "N", "erf^-1 form", "tail form", "|diff|", "MC (n=2000)");
    for k in (8..=31).step_by(3) {
        let n = 1u64 << k;
        let r = limit_integral_report(n)?;
        let mc = if k <= 20 {
            let s = run_iid_limit_experiment(n, 2000, 3)?;
            format!("{:.4} ± {:.4}", s.mean, s.std_error())
        } else {
            "-".to_string()
        };
        println!(
            "{:>6} {:>12.6} {:>12.6} {:>10.2e} {:>14}",
            format!("2^{k}"),
            r.inverse_erf_form,
            r.tail_form,
            r.discrepancy(),
            mc
        );
    }
    Ok(())
}
