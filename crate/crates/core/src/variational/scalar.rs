//! The scalar problem `sup_u ℓ(u)`, `ℓ(u) = Σ β_i u^{e(H_i)} − I(u)`.
//!
//! Critical points solve `x = 2 Σ β_i e_i σ(x)^{e_i − 1}` in the logit variable
//! `x = log(u/(1−u))`. The right-hand side is bounded by `2B` with
//! `B = Σ |β_i| e_i`, so every critical point has `|x| ≤ 2B` and a uniform grid on
//! `[−2B − 1, 2B + 1]` brackets all of them. Working in `x` keeps maximizers that
//! sit exponentially close to 0 or 1 resolvable.

use crate::graph::Graph;
use crate::graphon::entropy_rate;
use crate::model::ModelSpec;
pub(crate) use crate::numeric::{sigmoid, softplus};

pub const DEFAULT_GRID: usize = 10_000;
/// Maximizers whose objective is within this of the best are all reported.
pub const MULTIPLICITY_TOLERANCE: f64 = 1e-7;
const NEWTON_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct MaximizerReport {
    /// Global maximizers in increasing order.
    pub maximizers: Vec<f64>,
    pub psi: f64,
    /// `|Σ β_i e_i u^{e_i−1} − ½ log(u/(1−u))|` at each maximizer.
    pub stationarity_residuals: Vec<f64>,
    pub multiplicity_tolerance: f64,
    /// Objective value at each reported maximizer.
    pub objectives: Vec<f64>,
}

impl MaximizerReport {
    /// The maximizer with the largest objective (the first on exact ties).
    pub fn u_star(&self) -> f64 {
        let mut best = 0;
        for i in 1..self.maximizers.len() {
            if self.objectives[i] > self.objectives[best] {
                best = i;
            }
        }
        self.maximizers[best]
    }

    pub fn multiplicity(&self) -> usize {
        self.maximizers.len()
    }
}

/// A local maximum of `ℓ` located in the logit variable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalMax {
    pub x: f64,
    pub u: f64,
    pub objective: f64,
    pub residual: f64,
}

/// `ℓ(u)`; the endpoints use `0 log 0 = 0`.
pub fn scalar_objective(model: &ModelSpec, u: f64) -> f64 {
    polynomial(model, u) - entropy_rate(u)
}

fn polynomial(model: &ModelSpec, u: f64) -> f64 {
    model
        .terms()
        .iter()
        .map(|(m, b)| b * u.powi(m.edge_count() as i32))
        .sum()
}

/// `ℓ(σ(x))` with the entropy evaluated through `log σ(±x) = −softplus(∓x)`.
pub fn objective_logit(model: &ModelSpec, x: f64) -> f64 {
    let u = sigmoid(x);
    let v = sigmoid(-x);
    let entropy = -0.5 * (u * softplus(-x) + v * softplus(x));
    polynomial(model, u) - entropy
}

/// `G(x) = Σ β_i e_i σ(x)^{e_i−1} − x/2` and its derivative.
fn stationarity(model: &ModelSpec, x: f64) -> (f64, f64) {
    let u = sigmoid(x);
    let du = u * sigmoid(-x);
    let mut g = -0.5 * x;
    let mut dg = -0.5;
    for (m, b) in model.terms() {
        let e = m.edge_count() as i32;
        g += b * e as f64 * u.powi(e - 1);
        if e >= 2 {
            dg += b * (e * (e - 1)) as f64 * u.powi(e - 2) * du;
        }
    }
    (g, dg)
}

/// `|Σ β_i e_i u^{e_i−1} − ½ log(u/(1−u))|`.
pub fn stationarity_residual(model: &ModelSpec, u: f64) -> f64 {
    stationarity(model, (u / (1.0 - u)).ln()).0.abs()
}

fn logit_bound(model: &ModelSpec) -> f64 {
    let b: f64 = model
        .terms()
        .iter()
        .map(|(m, beta)| beta.abs() * m.edge_count() as f64)
        .sum();
    2.0 * b + 1.0
}

/// Root of `G` in `[lo, hi]` with `G(lo) > 0 > G(hi)`, by Newton steps kept inside
/// the shrinking bracket.
fn bracketed_root(model: &ModelSpec, mut lo: f64, mut hi: f64) -> f64 {
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (g, dg) = stationarity(model, x);
        if g.abs() < NEWTON_TOLERANCE {
            return x;
        }
        if g > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - g / dg;
        x = if dg < 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo < 1e-15 * (1.0 + x.abs()) {
            break;
        }
    }
    x
}

/// Every local maximum of `ℓ` in `(0,1)`, in increasing order.
pub fn local_maxima(model: &ModelSpec, grid: usize) -> Vec<LocalMax> {
    let bound = logit_bound(model);
    let grid = grid.max(2);
    let step = 2.0 * bound / (grid - 1) as f64;
    let mut out = Vec::new();
    let mut prev_x = -bound;
    let mut prev_g = stationarity(model, prev_x).0;
    for i in 1..grid {
        let x = -bound + step * i as f64;
        let g = stationarity(model, x).0;
        // ℓ increases then decreases: a + → − change of G
        if prev_g > 0.0 && g <= 0.0 {
            let root = if g == 0.0 { x } else { bracketed_root(model, prev_x, x) };
            let u = sigmoid(root);
            out.push(LocalMax {
                x: root,
                u,
                objective: objective_logit(model, root),
                residual: stationarity(model, root).0.abs(),
            });
        }
        prev_x = x;
        prev_g = g;
    }
    out
}

/// Local maximum reached by Newton iteration from `x0`, for following one branch
/// while a parameter moves.
pub(crate) fn track_local_max(model: &ModelSpec, x0: f64) -> Option<LocalMax> {
    let mut x = x0;
    for _ in 0..100 {
        let (g, dg) = stationarity(model, x);
        if dg >= 0.0 {
            return None;
        }
        let next = x - g / dg;
        if (next - x).abs() < 1e-14 * (1.0 + x.abs()) || g.abs() < NEWTON_TOLERANCE {
            x = next;
            let (g, dg) = stationarity(model, x);
            if dg >= 0.0 {
                return None;
            }
            return Some(LocalMax {
                x,
                u: sigmoid(x),
                objective: objective_logit(model, x),
                residual: g.abs(),
            });
        }
        x = next;
    }
    None
}

/// All global maximizers of `ℓ` on `[0,1]`.
pub fn maximize_scalar(model: &ModelSpec) -> MaximizerReport {
    maximize_scalar_with(model, DEFAULT_GRID, MULTIPLICITY_TOLERANCE)
}

pub fn maximize_scalar_with(model: &ModelSpec, grid: usize, tolerance: f64) -> MaximizerReport {
    let maxima = local_maxima(model, grid);
    let psi = maxima.iter().map(|m| m.objective).fold(f64::NEG_INFINITY, f64::max);
    let kept: Vec<&LocalMax> = maxima.iter().filter(|m| m.objective >= psi - tolerance).collect();
    MaximizerReport {
        maximizers: kept.iter().map(|m| m.u).collect(),
        psi,
        stationarity_residuals: kept.iter().map(|m| m.residual).collect(),
        multiplicity_tolerance: tolerance,
        objectives: kept.iter().map(|m| m.objective).collect(),
    }
}

/// `sup_u ℓ(u)`, the limiting free energy whenever the scalar reduction applies.
pub fn psi_limit_scalar(model: &ModelSpec) -> f64 {
    maximize_scalar(model).psi
}

/// `inf_u [2β₁ e(G)/n² + 6β₂ Δ(G)/n³ − β₁u − β₂u³ − I(u)]`: the graph statistic
/// minus the scalar supremum.
pub fn top_statistic(beta1: f64, beta2: f64, g: &Graph) -> f64 {
    let n = g.n() as f64;
    let stat = 2.0 * beta1 * g.edge_count() as f64 / (n * n) + 6.0 * beta2 * g.triangle_count() as f64 / (n * n * n);
    stat - psi_limit_scalar(&ModelSpec::edge_triangle(beta1, beta2))
}
