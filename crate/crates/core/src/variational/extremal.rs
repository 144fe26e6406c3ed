//! Limits for strongly negative or alternating coefficients, where the maximizers
//! of `T − I` stop being constant.

use super::scalar::{psi_limit_scalar, sigmoid, softplus};
use crate::error::{Error, Result};
use crate::graphon::{rate_entropy, StepGraphon};
use crate::model::ModelSpec;
use crate::motif::Motif;

/// `T(h) − ∬ I(h)`.
pub fn graphon_objective(model: &ModelSpec, h: &StepGraphon) -> Result<f64> {
    Ok(model.statistic_graphon(h)? - rate_entropy(h))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalLimit {
    /// `p` on pairs of distinct blocks, `0` within blocks, `χ(H) − 1` equal blocks.
    pub graphon: StepGraphon,
    pub p: f64,
    pub chromatic_number: usize,
    /// `(χ − 2) / (2(χ − 1)) · log(1/(1 − p))`.
    pub psi_limit: f64,
}

/// Limit object of the edge–`H` model as the `H` coefficient tends to `−∞`.
pub fn extremal_limit(motif: &Motif, beta1: f64) -> ExtremalLimit {
    let chi = motif.chromatic_number();
    let p = sigmoid(2.0 * beta1);
    let blocks = chi - 1;
    let graphon = StepGraphon::multipartite(blocks, p).expect("p lies in [0, 1]");
    // log(1/(1 − p)) = log(1 + e^{2β₁})
    let psi_limit = (chi - 2) as f64 / (2.0 * (chi - 1) as f64) * softplus(2.0 * beta1);
    ExtremalLimit { graphon, p, chromatic_number: chi, psi_limit }
}

/// Comparison between the best constant graphon and the two-block test graphon
/// `p·g` (`p = σ(2β₁)` across blocks, `0` within). When the test value is larger,
/// no maximizer of `T − I` is constant.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryBreaking {
    pub best_constant: f64,
    pub test_value: f64,
    pub breaks: bool,
}

pub fn symmetry_breaking_check(model: &ModelSpec) -> Result<SymmetryBreaking> {
    let best_constant = psi_limit_scalar(model);
    let g = StepGraphon::multipartite(2, sigmoid(2.0 * model.beta1()))?;
    let test_value = graphon_objective(model, &g)?;
    Ok(SymmetryBreaking { best_constant, test_value, breaks: test_value > best_constant })
}

/// The statistic `3β t(edge) − 3β t(2-star) + β t(triangle)`.
pub fn transitivity_model(beta: f64) -> ModelSpec {
    ModelSpec::new(vec![
        (Motif::edge(), 3.0 * beta),
        (Motif::star(2).expect("valid star"), -3.0 * beta),
        (Motif::triangle(), beta),
    ])
    .expect("finite coefficients")
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransitivityLimit {
    /// Two equal blocks, `1` within and `½` across.
    pub graphon: StepGraphon,
    /// Common value of `T(f) − S(1 − f)` with `S(g) = −β t(triangle, g)`.
    pub identity_constant: f64,
    /// Largest deviation from `identity_constant` over the sampled graphons.
    pub identity_residual: f64,
}

/// `T(f) − S(1 − f)` for the transitivity statistic.
pub fn transitivity_identity(beta: f64, f: &StepGraphon) -> Result<f64> {
    let t = transitivity_model(beta).statistic_graphon(f)?;
    let s = -beta * crate::graphon::hom_density_graphon(&Motif::triangle(), &f.complement())?;
    Ok(t - s)
}

/// Large-`β` limit of the transitivity model, with the rewrite identity checked on
/// the supplied graphons.
pub fn transitivity_limit(beta: f64, samples: &[StepGraphon]) -> Result<TransitivityLimit> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::domain(format!("the transitivity limit needs beta > 0, got {beta}")));
    }
    let graphon = StepGraphon::equal_blocks(2, vec![1.0, 0.5, 0.5, 1.0])?;
    let identity_constant = transitivity_identity(beta, &StepGraphon::constant(1.0)?)?;
    let mut identity_residual: f64 = 0.0;
    for f in samples {
        identity_residual = identity_residual.max((transitivity_identity(beta, f)? - identity_constant).abs());
    }
    Ok(TransitivityLimit { graphon, identity_constant, identity_residual })
}
