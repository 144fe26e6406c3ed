//! Fixed points of `h = σ(2 Σ β_i Δ_{H_i} h)`, the stationarity condition for
//! `T(h) − I(h)` over graphons.

use super::scalar::sigmoid;
use crate::error::{Error, Result};
use crate::graphon::{delta_h, BlockKernel, StepGraphon};
use crate::model::ModelSpec;

pub const DEFAULT_DAMPING: f64 = 0.5;
pub const DEFAULT_MAX_ITER: usize = 10_000;
pub const CONVERGENCE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct EulerLagrangeSolution {
    pub graphon: StepGraphon,
    /// `‖h − Φ(h)‖_∞` at the returned iterate.
    pub residual: f64,
    pub iterations: usize,
}

/// `Σ β_i Δ_{H_i} h` on the blocks of `h`.
pub fn combined_delta(model: &ModelSpec, h: &StepGraphon) -> Result<BlockKernel> {
    let mut total = BlockKernel::filled(h.k(), 0.0);
    for (m, b) in model.terms() {
        if *b != 0.0 {
            total.add_scaled(&delta_h(m, h)?, *b);
        }
    }
    Ok(total)
}

/// `Φ(h) = σ(2 Σ β_i Δ_{H_i} h)`, applied blockwise.
pub fn logistic_map(model: &ModelSpec, h: &StepGraphon) -> Result<StepGraphon> {
    let d = combined_delta(model, h)?;
    StepGraphon::new(h.weights().to_vec(), d.as_slice().iter().map(|&x| sigmoid(2.0 * x)).collect())
}

/// Damped iteration `h ← (1 − α) h + α Φ(h)` until successive iterates differ by
/// less than `1e-9` in sup norm.
pub fn euler_lagrange_solve(
    model: &ModelSpec,
    init: &StepGraphon,
    damping: f64,
    max_iter: usize,
) -> Result<EulerLagrangeSolution> {
    if !(damping > 0.0 && damping <= 1.0) {
        return Err(Error::domain(format!("damping must lie in (0, 1], got {damping}")));
    }
    let mut h = init.clone();
    for it in 1..=max_iter {
        let phi = logistic_map(model, &h)?;
        let values: Vec<f64> = h
            .values()
            .iter()
            .zip(phi.values())
            .map(|(a, b)| (1.0 - damping) * a + damping * b)
            .collect();
        let next = StepGraphon::new(h.weights().to_vec(), values)?;
        let change = next.sup_distance(&h);
        h = next;
        if change < CONVERGENCE_TOLERANCE {
            let residual = h.sup_distance(&logistic_map(model, &h)?);
            return Ok(EulerLagrangeSolution { graphon: h, residual, iterations: it });
        }
    }
    let residual = h.sup_distance(&logistic_map(model, &h)?);
    Err(Error::NoConvergence { iterations: max_iter, residual, last: Box::new(h) })
}
