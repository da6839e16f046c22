//! Priors, adaptive-covariance Metropolis MCMC, and convergence diagnostics.

pub mod diagnostics;
pub mod metropolis;
pub mod prior;

pub use diagnostics::r_hat;
pub use metropolis::{
    metropolis_accept_prob, run_adaptive_metropolis, run_adaptive_metropolis_scaled, Chain,
    ChainInit, ChainSet, McmcConfig, ProposalScale,
};
pub use prior::{prior_log_density, Prior};
