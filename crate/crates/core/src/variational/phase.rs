//! Regime diagnostics for the scalar problem: which hypotheses certify it, the
//! sparse/dense dichotomy for negative edge weight, and scans for jumps of the
//! maximizer as one coefficient varies.

use rayon::prelude::*;

use super::scalar::{local_maxima, maximize_scalar, sigmoid, track_local_max, LocalMax, DEFAULT_GRID};
use crate::error::{Error, Result};
use crate::model::ModelSpec;
use crate::motif::MotifKind;

/// Which sufficient condition, if any, makes the scalar problem give the true
/// limiting free energy with constant maximizers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Applicability {
    /// All non-edge coefficients are non-negative.
    NonnegValid,
    /// All non-edge motifs are stars with non-positive coefficients.
    NonposStarValid,
    /// `Σ_{i≥2} |β_i| e_i (e_i − 1) < 2`.
    ContractionValid,
    Unknown,
}

impl Applicability {
    pub fn as_str(self) -> &'static str {
        match self {
            Applicability::NonnegValid => "nonneg_valid",
            Applicability::NonposStarValid => "nonpos_star_valid",
            Applicability::ContractionValid => "contraction_valid",
            Applicability::Unknown => "unknown",
        }
    }
}

pub fn contraction_sum(model: &ModelSpec) -> f64 {
    model.terms()[1..]
        .iter()
        .map(|(m, b)| {
            let e = m.edge_count() as f64;
            b.abs() * e * (e - 1.0)
        })
        .sum()
}

pub fn applicability_check(model: &ModelSpec) -> Applicability {
    let rest = &model.terms()[1..];
    if rest.iter().all(|(_, b)| *b >= 0.0) {
        Applicability::NonnegValid
    } else if rest
        .iter()
        .all(|(m, b)| *b <= 0.0 && matches!(m.kind(), MotifKind::Star(_) | MotifKind::Edge))
    {
        Applicability::NonposStarValid
    } else if contraction_sum(model) < 2.0 {
        Applicability::ContractionValid
    } else {
        Applicability::Unknown
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Sparse,
    Dense,
    NearTransition,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Sparse => "sparse",
            Regime::Dense => "dense",
            Regime::NearTransition => "near-transition",
        }
    }
}

/// Thresholds for the edge–triangle model with `β₁ < 0`: maximizers avoid
/// `[c1, c2]`, and the global maximizer crosses from below `c1` to above `c2` at
/// `β₂ = q`.
#[derive(Clone, Debug, PartialEq)]
pub struct DegeneracyReport {
    pub beta1: f64,
    pub c1: f64,
    pub c2: f64,
    /// `None` if no crossing was found below `β₂ = 2^40`.
    pub q_estimate: Option<f64>,
    pub tolerance: f64,
}

impl DegeneracyReport {
    pub fn regime_at(&self, beta2: f64) -> Regime {
        if let Some(q) = self.q_estimate {
            if (beta2 - q).abs() <= 10.0 * self.tolerance {
                return Regime::NearTransition;
            }
        }
        let u = maximize_scalar(&ModelSpec::edge_triangle(self.beta1, beta2)).u_star();
        if u < self.c1 {
            Regime::Sparse
        } else if u > self.c2 {
            Regime::Dense
        } else {
            Regime::NearTransition
        }
    }
}

pub const DEGENERACY_TOLERANCE: f64 = 1e-6;

pub fn degeneracy_constants(beta1: f64) -> Result<DegeneracyReport> {
    if !(beta1 < 0.0) {
        return Err(Error::domain(format!("the degeneracy thresholds need beta1 < 0, got {beta1}")));
    }
    let c1 = sigmoid(beta1);
    let c2 = 1.0 + 1.0 / (2.0 * beta1);
    if c1 >= c2 {
        return Err(Error::domain(format!(
            "beta1 = {beta1} is not negative enough: c1 = {c1:.6} is not below c2 = {c2:.6}"
        )));
    }
    let dense = |beta2: f64| maximize_scalar(&ModelSpec::edge_triangle(beta1, beta2)).u_star() > c2;
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut q_estimate = None;
    while hi <= 2f64.powi(40) {
        if dense(hi) {
            while hi - lo > DEGENERACY_TOLERANCE {
                let mid = 0.5 * (lo + hi);
                if dense(mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            q_estimate = Some(0.5 * (lo + hi));
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    Ok(DegeneracyReport { beta1, c1, c2, q_estimate, tolerance: DEGENERACY_TOLERANCE })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhasePoint {
    pub beta: f64,
    pub u_star: f64,
    pub psi: f64,
    pub multiplicity: usize,
}

/// A jump of the global maximizer between two grid points, located where the two
/// competing local maxima have equal objective.
#[derive(Clone, Debug, PartialEq)]
pub struct Transition {
    pub beta: f64,
    pub u_low: f64,
    pub u_high: f64,
    /// `|ℓ(u_high) − ℓ(u_low)|` at `beta`.
    pub objective_gap: f64,
    /// Grid index of the left end of the bracketing interval.
    pub grid_index: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseScan {
    pub points: Vec<PhasePoint>,
    pub transitions: Vec<Transition>,
}

pub const JUMP_THRESHOLD: f64 = 0.1;
const BISECTION_WIDTH: f64 = 1e-6;

/// Scans `β₂ ∈ [lo, hi]` for the edge–triangle model with fixed `β₁`.
pub fn phase_scan(beta1: f64, lo: f64, hi: f64, steps: usize) -> Result<PhaseScan> {
    phase_scan_term(&ModelSpec::edge_triangle(beta1, 0.0), 1, lo, hi, steps)
}

/// Scans the coefficient of term `term` of `base` over `steps` evenly spaced values.
pub fn phase_scan_term(base: &ModelSpec, term: usize, lo: f64, hi: f64, steps: usize) -> Result<PhaseScan> {
    if steps < 2 {
        return Err(Error::domain(format!("a phase scan needs at least 2 steps, got {steps}")));
    }
    if term >= base.terms().len() {
        return Err(Error::Mismatch(format!("model has no term {term}")));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::domain(format!("invalid scan range {lo}:{hi}")));
    }
    let at = |beta: f64| {
        let mut betas = base.betas();
        betas[term] = beta;
        base.with_betas(&betas).expect("same length")
    };
    let grid: Vec<f64> = (0..steps)
        .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
        .collect();
    let points: Vec<PhasePoint> = grid
        .par_iter()
        .map(|&beta| {
            let r = maximize_scalar(&at(beta));
            PhasePoint { beta, u_star: r.u_star(), psi: r.psi, multiplicity: r.multiplicity() }
        })
        .collect();
    let exponent = base.terms()[term].0.edge_count() as i32;
    let transitions = (0..steps - 1)
        .into_par_iter()
        .filter(|&i| (points[i + 1].u_star - points[i].u_star).abs() > JUMP_THRESHOLD)
        .map(|i| locate_transition(&at, exponent, &points[i], &points[i + 1], i))
        .collect();
    Ok(PhaseScan { points, transitions })
}

fn locate_transition(
    at: &(dyn Fn(f64) -> ModelSpec + Sync),
    exponent: i32,
    left: &PhasePoint,
    right: &PhasePoint,
    grid_index: usize,
) -> Transition {
    let midpoint = 0.5 * (left.u_star + right.u_star);
    let on_right_side = |u: f64| (u > midpoint) == (right.u_star > midpoint);
    let (mut a, mut b) = (left.beta, right.beta);
    while b - a > BISECTION_WIDTH {
        let m = 0.5 * (a + b);
        if on_right_side(maximize_scalar(&at(m)).u_star()) {
            b = m;
        } else {
            a = m;
        }
    }
    let mut beta = 0.5 * (a + b);
    let pick = |model: &ModelSpec| -> Option<(LocalMax, LocalMax)> {
        let maxima = local_maxima(model, DEFAULT_GRID);
        let below = maxima.iter().filter(|m| m.u < midpoint).max_by(|x, y| x.objective.total_cmp(&y.objective))?;
        let above = maxima.iter().filter(|m| m.u > midpoint).max_by(|x, y| x.objective.total_cmp(&y.objective))?;
        Some((*below, *above))
    };
    let Some((mut low, mut high)) = pick(&at(beta)) else {
        return Transition { beta, u_low: left.u_star.min(right.u_star), u_high: left.u_star.max(right.u_star), objective_gap: f64::NAN, grid_index };
    };
    // Newton on D(β) = ℓ(u_high) − ℓ(u_low); since each branch is stationary in u,
    // D'(β) = u_high^e − u_low^e.
    for _ in 0..50 {
        let gap = high.objective - low.objective;
        if gap.abs() < 1e-14 {
            break;
        }
        let slope = high.u.powi(exponent) - low.u.powi(exponent);
        let next = (beta - gap / slope).clamp(a, b);
        let model = at(next);
        let (Some(l), Some(h)) = (track_local_max(&model, low.x), track_local_max(&model, high.x)) else {
            break;
        };
        beta = next;
        low = l;
        high = h;
    }
    Transition {
        beta,
        u_low: low.u,
        u_high: high.u,
        objective_gap: (high.objective - low.objective).abs(),
        grid_index,
    }
}
