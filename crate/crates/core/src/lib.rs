//! Exponential random graph models: exact counting on small graphs, step-graphon
//! variational limits, and Markov chain samplers with normalizing-constant
//! estimators.

// `!(x >= 0.0)` style guards are used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cut;
pub mod error;
pub mod graph;
pub mod graphon;
pub mod io;
pub mod mcmc;
pub mod model;
pub mod motif;
pub mod numeric;
pub mod rng;
pub mod variational;

pub use error::{Error, Result};
pub use graph::Graph;
pub use graphon::{BlockKernel, StepGraphon};
pub use model::ModelSpec;
pub use motif::Motif;
