//! Heuristic maximization of `T(h) − I(h)` over `k`-block graphons with equal
//! block weights. The result is a lower bound on the supremum, never a certificate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::euler_lagrange::combined_delta;
use super::extremal::graphon_objective;
use super::scalar::maximize_scalar;
use crate::error::{Error, Result};
use crate::graphon::StepGraphon;
use crate::model::ModelSpec;

pub const VALUE_FLOOR: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOptions {
    pub blocks: usize,
    pub restarts: usize,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { blocks: 4, restarts: 8, max_iter: 5_000, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub graphon: StepGraphon,
    /// `T(h) − I(h)` at `graphon`: a lower bound on the free energy limit.
    pub objective: f64,
    /// Index of the restart that produced the result.
    pub restart: usize,
    pub iterations: usize,
}

/// Projected gradient ascent on the block values. The gradient with respect to
/// the value on cell `(a, b)`, per unit area, is `Σ β_i Δ_{H_i} h − ½ log(v/(1−v))`.
/// Values are kept in `[1e-6, 1 − 1e-6]` and steps are accepted by Armijo
/// backtracking, with each cell moving at most 0.1 per iteration.
///
/// The best constant is a local maximum even when it is not global, so local ascent
/// from near-constant starts cannot leave it. Restart 0 starts from the best
/// constant, odd restarts from uniformly random values, and even restarts from a
/// random planted partition: blocks are split at random into two or three groups,
/// with small values within groups and random values across.
pub fn graphon_search(model: &ModelSpec, options: &SearchOptions) -> Result<SearchResult> {
    let k = options.blocks;
    if k == 0 || options.restarts == 0 {
        return Err(Error::domain("graphon search needs at least one block and one restart"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let u = maximize_scalar(model).u_star().clamp(VALUE_FLOOR, 1.0 - VALUE_FLOOR);
    let mut best: Option<SearchResult> = None;
    for restart in 0..options.restarts {
        let groups = rng.gen_range(2..=3usize);
        let labels: Vec<usize> = (0..k).map(|_| rng.gen_range(0..groups)).collect();
        let mut values = vec![0.0; k * k];
        for a in 0..k {
            for b in a..k {
                let v = match restart {
                    0 => u,
                    r if r % 2 == 1 => rng.gen_range(0.05..0.95),
                    _ if labels[a] == labels[b] => rng.gen_range(0.01..0.1),
                    _ => rng.gen_range(0.3..0.9),
                };
                values[a * k + b] = v;
                values[b * k + a] = v;
            }
        }
        let init = StepGraphon::equal_blocks(k, values)?;
        let (graphon, objective, iterations) = ascend(model, init, options.max_iter)?;
        if best.as_ref().is_none_or(|b| objective > b.objective) {
            best = Some(SearchResult { graphon, objective, restart, iterations });
        }
    }
    Ok(best.expect("at least one restart"))
}

fn ascend(model: &ModelSpec, mut h: StepGraphon, max_iter: usize) -> Result<(StepGraphon, f64, usize)> {
    let k = h.k();
    let w = h.weights().to_vec();
    let mut value = graphon_objective(model, &h)?;
    let mut step: f64 = 1.0;
    for it in 0..max_iter {
        let delta = combined_delta(model, &h)?;
        let grad: Vec<f64> = h
            .values()
            .iter()
            .zip(delta.as_slice())
            .map(|(&v, &d)| d - 0.5 * (v / (1.0 - v)).ln())
            .collect();
        // a trust region of 0.1 per cell keeps a single projected step from
        // flattening every value onto the bounds
        let largest = grad.iter().fold(0.0f64, |m, g| m.max(g.abs()));
        step = (step * 2.0).min(0.1 / largest.max(1e-300)).min(1.0);
        let mut accepted = None;
        while step > 1e-14 {
            let trial: Vec<f64> = h
                .values()
                .iter()
                .zip(&grad)
                .map(|(&v, &g)| (v + step * g).clamp(VALUE_FLOOR, 1.0 - VALUE_FLOOR))
                .collect();
            let mut predicted = 0.0;
            for a in 0..k {
                for b in 0..k {
                    predicted += w[a] * w[b] * grad[a * k + b] * (trial[a * k + b] - h.value(a, b));
                }
            }
            let candidate = StepGraphon::new(w.clone(), trial)?;
            let cv = graphon_objective(model, &candidate)?;
            if cv >= value + 1e-4 * predicted {
                accepted = Some((candidate, cv));
                break;
            }
            step *= 0.5;
        }
        let Some((next, nv)) = accepted else {
            return Ok((h, value, it));
        };
        let moved = next.sup_distance(&h);
        h = next;
        value = nv;
        if moved < 1e-10 {
            return Ok((h, value, it + 1));
        }
    }
    Ok((h, value, max_iter))
}
