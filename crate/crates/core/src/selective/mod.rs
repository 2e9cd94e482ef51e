//! Post-selection inference for the randomized LASSO.
//!
//! The pipeline: solve the randomized LASSO, condition on the selected
//! support and signs, rewrite the randomization through the KKT map as a
//! function of the data vector and the optimization variables
//! `(beta_E, u_{-E})`, sample those variables from the selective density
//! over their orthant-times-cube domain with the truncated hit-and-run
//! sampler, and reweight the draws to get p-values and confidence
//! intervals for every selected coefficient from one chain.

mod density;
mod experiment;
mod inference;
mod lasso;
mod problem;

pub use density::{sample_opt_variables, selective_potential};
pub use experiment::{
    run_experiment, ExperimentConfig, ExperimentReport, MethodSummary, RandKind, ReplicateRecord,
};
pub use inference::{naive_inference, pvalues_and_intervals, CoordinateInference};
pub use lasso::{kkt_reconstruct, kkt_residual, solve_randomized_lasso, KktMap};
pub use problem::{
    default_scales, simulate_equicorrelated, OptVariables, RandomizationLaw, SelectionEvent,
    SelectiveProblem,
};
