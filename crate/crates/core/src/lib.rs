//! Expected maximum of fractional Brownian motion on a uniform grid, with emphasis on the
//! small-Hurst-index regime where discrete approximations break down.
//!
//! The crate provides:
//!
//! * exact simulation of `(B^H(i/N))_{1<=i<=N}` by circulant embedding of fractional Gaussian
//!   noise ([`fbm`]), with a dense Cholesky sampler as a small-N reference;
//! * the maximum and average path functionals and the closed-form second moment of the
//!   average ([`functionals`]);
//! * Clark's moment-matching recursion for the expected maximum of a Gaussian vector
//!   ([`clark`]);
//! * closed-form bounds on the expected maximum and on the discretization error, and the
//!   `H -> 0` limit integral ([`bounds`]);
//! * a seeded, order-independent Monte Carlo harness ([`montecarlo`]);
//! * table and figure-data generation behind the `fbmax` binary ([`cli`]).

pub mod bounds;
pub mod clark;
pub mod cli;
pub mod error;
pub mod fbm;
pub mod functionals;
pub mod montecarlo;
pub mod quadrature;
pub mod rng;
pub mod special;

pub use error::{Error, Result};
pub use fbm::{FbmPath, PathGrid};
pub use functionals::FunctionalKind;
pub use montecarlo::SampleSummary;
