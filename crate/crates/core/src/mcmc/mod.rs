//! Markov chain samplers, the Erdős–Rényi spectral theory, and estimators of
//! normalizing constants.

pub mod chain;
pub mod estimate;
pub mod spectral;
pub mod variance;

pub use chain::{chain_trace, glauber_step, metropolis_step, Chain, ChainConfig, Sampler, Start, TraceRow};
pub use estimate::{
    default_proposal, enumerate_log_partition, enumerate_psi_n, er_log_partition, estimate_acceptance_ratio,
    estimate_importance, estimate_importance_self_normalized, estimate_mcmle, AlphaKind, EstimatorKind,
    EstimatorResult,
};
pub use spectral::{
    chi_square_distance, chi_square_ln, er_eigen, mixing_cutoff, spectral_check, Corner, SpectralCheck,
    SpectralComponent,
};
pub use variance::{
    fourier_coeff_exp_edges, fourier_coeff_normalized, mcmle_benchmark, mcmle_er_bound, variance_mcmc_mean,
    McmleBenchmark, McmleBound, VarianceReport,
};
