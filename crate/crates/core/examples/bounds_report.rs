//! Every closed-form bound for a few `(N, H)` pairs.
//!
//! `cargo run --example bounds_report -- [n_exp]`

use fbmax::bounds::{bounds_report, lower_bound_coefficient, sudakov_maximizer};

fn main() -> fbmax::Result<()> {
    let n_exp: u32 = std::env::args().nth(1).map_or(20, |s| s.parse().expect("n_exp"));
    let n = 1u64 << n_exp;
    println!("lower bound coefficient c1 = {:.6}", lower_bound_coefficient());
    println!("N = 2^{n_exp}");
    for hurst in [0.5, 0.09, 0.05, 0.01, 0.0013, 0.0001] {
        let r = bounds_report(n, hurst)?;
        let m = sudakov_maximizer(hurst)?;
        println!("H = {hurst}");
        println!("  Borovkov bounds        [{:.4}, {:.4}]", r.borovkov_lower, r.borovkov_upper);
        println!("  Sudakov bound at N     {:.4} (peak {:.4} at ln N = {:.1})", r.sudakov_lower, m.value, m.log_n_star);
        match r.delta_upper {
            Some(d) => println!("  discretization error   <= {d:.4}"),
            None => println!("  discretization error   upper bound not valid (N < 2^(1/H))"),
        }
        println!("  limit integral         {:.4}", r.limit_integral);
        println!("  discretization error   >= {:.4} (relative >= {:.4})", r.delta_lower, r.relative_error_lower);
    }
    Ok(())
}
