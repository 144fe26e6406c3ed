//! The limiting free energy `ψ = sup_h (T(h) − I(h))` and the tools built around
//! it: the scalar reduction, regime diagnostics, the Euler–Lagrange fixed point,
//! extremal limits and a heuristic graphon search.

mod euler_lagrange;
mod extremal;
mod phase;
mod scalar;
mod search;

pub use euler_lagrange::{
    combined_delta, euler_lagrange_solve, logistic_map, EulerLagrangeSolution, CONVERGENCE_TOLERANCE,
    DEFAULT_DAMPING, DEFAULT_MAX_ITER,
};
pub use extremal::{
    extremal_limit, graphon_objective, symmetry_breaking_check, transitivity_identity, transitivity_limit,
    transitivity_model, ExtremalLimit, SymmetryBreaking, TransitivityLimit,
};
pub use phase::{
    applicability_check, contraction_sum, degeneracy_constants, phase_scan, phase_scan_term, Applicability,
    DegeneracyReport, PhasePoint, PhaseScan, Regime, Transition, DEGENERACY_TOLERANCE, JUMP_THRESHOLD,
};
pub use scalar::{
    local_maxima, maximize_scalar, maximize_scalar_with, objective_logit, psi_limit_scalar, scalar_objective,
    stationarity_residual, top_statistic, LocalMax, MaximizerReport, DEFAULT_GRID, MULTIPLICITY_TOLERANCE,
};
pub use search::{graphon_search, SearchOptions, SearchResult, VALUE_FLOOR};

pub use crate::motif::chromatic_number;
