//! Rejection-free, non-reversible MCMC via iterated random functions.
//!
//! The sampler draws a uniform direction `v` and a uniform variate `V`,
//! solves for the first arrival time `tau` of an inhomogeneous Poisson
//! process whose rate is the positive part of the directional derivative
//! of the potential `U = -log pi`, and moves the chain to `x + v * tau / 2`.
//! Every move is accepted; no step size or proposal scale is tuned.
//!
//! The crate provides:
//! - [`hit_and_run`]: the main sampler in any dimension,
//! - [`arrival`]: the first-arrival-time solver on a 1-D line section,
//! - [`decomposition`]: a univariate variant that replaces root finding
//!   with inverses of the increasing/decreasing parts of `U`,
//! - [`truncated`]: the specialization to log-concave densities restricted
//!   to a product of intervals, orthants, and cubes,
//! - [`distributions`]: a registry of ready-made targets with reference
//!   CDFs for validation,
//! - [`langevin`]: a projected Langevin baseline for comparisons,
//! - [`selective`]: post-selection inference for the randomized LASSO,
//!   sampling optimization variables from the selective density,
//! - [`diagnostics`]: KS statistics, histograms, ESS, and numerical
//!   stationarity checks of the transition kernels.
//!
//! ```
//! use irf_mcmc::distributions::make_gaussian;
//! use irf_mcmc::hit_and_run::{run, SamplerConfig};
//!
//! let target = make_gaussian(0.0, 1.0).unwrap();
//! let cfg = SamplerConfig { steps: 2000, seed: 7, axis_hold: 1 };
//! let batch = run(&target.potential, &cfg, &[0.5]).unwrap();
//! assert_eq!(batch.n_steps(), 2000);
//! ```

pub mod arrival;
pub mod chain;
pub mod decomposition;
pub mod diagnostics;
pub mod distributions;
mod error;
pub mod hit_and_run;
pub mod langevin;
pub mod potential;
pub mod rng;
pub mod selective;
pub mod special;
pub mod truncated;

pub use error::{Error, Result};
pub use potential::{DomainSet, LineSection, Potential};
