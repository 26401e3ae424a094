//! Numerical laboratory for the symmetric Riemann-sum integral of a planar
//! fractional Brownian motion.
//!
//! The crate is organised bottom-up:
//!
//! * [`kernels`]: closed-form covariances and discrete inner products of fBm
//!   together with the deterministic kernel sums and their growth rates.
//! * [`hermite`]: probabilists' Hermite polynomials, monomial decompositions
//!   and the Breuer–Major constants `sigma_H`.
//! * [`field`]: a closed catalog of test functions `f: R^2 -> R` with analytic
//!   partial derivatives up to total order four.
//! * [`rng`] and [`synth`]: reproducible random streams and two exact fBm
//!   samplers (Cholesky and circulant embedding).
//! * [`estimators`]: the symmetric integral, quadratic variations,
//!   weighted Hermite variations and the change-of-variable residual.
//! * [`stats`] and [`harness`]: Monte Carlo orchestration, goodness-of-fit
//!   tests and log-log rate regression.

pub mod error;
pub mod estimators;
pub mod field;
pub mod harness;
pub mod hermite;
pub mod kernels;
pub mod numeric;
pub mod rng;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
pub use field::{catalog_get, ScalarField, SeparableField};
pub use hermite::{hermite_eval, monomial_to_hermite, sigma_h, HermiteCoeffs, SigmaCertificate};
pub use kernels::{GridSpec, HurstIndex, Regime};
pub use rng::SeedSpec;
pub use stats::RateFit;
pub use synth::{Algorithm, FbmPath1D, FbmPath2D, PathSampler};
