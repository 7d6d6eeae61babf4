//! Clark's approximation of the expected maximum, for fBm grids and for a hand-built vector.
//!
//! `cargo run --release --example clark_recursion -- [n_exp]`

use fbmax::clark::{clark_expected_max, clark_pair_moments, fbm_clark_expected_max, ClarkOptions, DenseGaussianVector};
use fbmax::PathGrid;
use nalgebra::DMatrix;

fn main() -> fbmax::Result<()> {
    let n_exp: u32 = std::env::args().nth(1).map_or(10, |s| s.parse().expect("n_exp"));

    let pair = clark_pair_moments(0.0, 1.0, 0.0, 1.0, 0.0)?;
    println!("max of two iid N(0,1): mean {:.6}, variance {:.6}", pair.mean, pair.variance());

    // Equicorrelated vector with correlation 1/2.
    let n = 5;
    let cov = DMatrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.5 });
    let vector = DenseGaussianVector::new(vec![0.0; n], cov)?;
    println!("max of 5 equicorrelated normals (rho = 0.5): {:.6}", clark_expected_max(&vector)?);

    println!("fBm on 2^{n_exp} points:");
    for hurst in [0.09, 0.01, 0.0013, 0.0001] {
        let report = fbm_clark_expected_max(PathGrid::with_exponent(n_exp, hurst)?, ClarkOptions::default())?;
        println!(
            "  H = {hurst:<7} E max ~ {:.4}  (clamped correlations: {}, degenerate pairs: {})",
            report.expected_max, report.clamp_events, report.degenerate_events
        );
    }
    Ok(())
}
