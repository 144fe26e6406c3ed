//! Normalizing-constant estimators. Every estimate is carried as a natural log.

use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;

use super::chain::{Chain, ChainConfig, Sampler};
use super::variance::mcmle_er_bound;
use crate::error::{Error, Result};
use crate::graph::{pair_order, Graph};
use crate::model::ModelSpec;
use crate::numeric::{softplus, LogSum};
use crate::rng::stream_rng;
use crate::variational::maximize_scalar;

/// Largest vertex count for exhaustive enumeration (`2^15` graphs).
pub const MAX_ENUMERATION_VERTICES: usize = 6;
const CHUNK: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EstimatorKind {
    Importance,
    SelfNormalizedImportance,
    Mcmle,
    AcceptanceRatio,
}

impl EstimatorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EstimatorKind::Importance => "importance",
            EstimatorKind::SelfNormalizedImportance => "importance_self_normalized",
            EstimatorKind::Mcmle => "mcmle",
            EstimatorKind::AcceptanceRatio => "acceptance_ratio",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimatorResult {
    pub kind: EstimatorKind,
    /// Log of the estimate: `log z` for importance sampling, `log z(β)/z(β⁰)` for
    /// the ratio estimators.
    pub log_estimate: f64,
    pub n_samples: usize,
    /// Empirical standard error of the estimate divided by the estimate.
    pub relative_std_error: f64,
    /// Upper bound on `Var/mean²` of the estimate when one is known in closed form.
    pub variance_bound: Option<f64>,
    pub seed: u64,
}

impl EstimatorResult {
    /// Flat `key = value` lines.
    pub fn to_key_value(&self) -> String {
        let mut out = String::new();
        writeln!(out, "estimator = {}", self.kind.as_str()).unwrap();
        writeln!(out, "seed = {}", self.seed).unwrap();
        writeln!(out, "n_samples = {}", self.n_samples).unwrap();
        writeln!(out, "log_estimate = {:.12e}", self.log_estimate).unwrap();
        writeln!(out, "relative_std_error = {:.6e}", self.relative_std_error).unwrap();
        match self.variance_bound {
            Some(v) => writeln!(out, "variance_bound = {v:.6e}").unwrap(),
            None => writeln!(out, "variance_bound = none").unwrap(),
        }
        out
    }
}

/// `log z(β) = C(n,2) log(1 + e^β)` for the law `∝ e^{β e(G)}`.
pub fn er_log_partition(beta: f64, n: usize) -> f64 {
    let m = (n * n.saturating_sub(1) / 2) as f64;
    m * softplus(beta)
}

/// `log Σ_G exp(n² T(G))` by enumerating every labeled graph on `n ≤ 6` vertices.
pub fn enumerate_log_partition(model: &ModelSpec, n: usize) -> Result<f64> {
    if !(1..=MAX_ENUMERATION_VERTICES).contains(&n) {
        return Err(Error::TooLarge {
            what: "vertex count for exhaustive enumeration".into(),
            size: n as f64,
            bound: MAX_ENUMERATION_VERTICES as f64,
        });
    }
    let m = n * (n - 1) / 2;
    let total = (0..1u64 << m)
        .into_par_iter()
        .map(|code| -> Result<LogSum> {
            let mut s = LogSum::default();
            s.add(model.scaled_statistic(&Graph::from_edge_code(n, code)?)?);
            Ok(s)
        })
        .try_reduce(LogSum::default, |a, b| Ok(a.merge(b)))?;
    Ok(total.value())
}

/// Exact `ψ_n = n^{−2} log Σ_G exp(n² T(G))`.
pub fn enumerate_psi_n(model: &ModelSpec, n: usize) -> Result<f64> {
    Ok(enumerate_log_partition(model, n)? / (n * n) as f64)
}

/// The proposal density `u*` of the constant maximizer.
pub fn default_proposal(model: &ModelSpec) -> f64 {
    maximize_scalar(model).u_star()
}

fn sample_er(n: usize, p: f64, rng: &mut impl Rng) -> Result<Graph> {
    let mut g = Graph::empty(n)?;
    for (i, j) in pair_order(n) {
        if rng.gen::<f64>() < p {
            g.set_edge(i, j, true);
        }
    }
    Ok(g)
}

/// Per-chunk sums of `w`, `w²` and `1/Q̄` in log domain.
#[derive(Clone, Copy, Default)]
struct WeightSums {
    w: LogSum,
    w2: LogSum,
    inv_q: LogSum,
}

impl WeightSums {
    fn merge(self, o: WeightSums) -> WeightSums {
        WeightSums { w: self.w.merge(o.w), w2: self.w2.merge(o.w2), inv_q: self.inv_q.merge(o.inv_q) }
    }
}

fn importance_sums(model: &ModelSpec, n: usize, p: f64, samples: usize, seed: u64) -> Result<WeightSums> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("the proposal density must lie in (0, 1), got {p}")));
    }
    if samples == 0 {
        return Err(Error::domain("need at least one sample"));
    }
    if n < 2 {
        return Err(Error::InvalidGraph(format!("need n >= 2, got {n}")));
    }
    let m = (n * (n - 1) / 2) as f64;
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| -> Result<WeightSums> {
            let mut rng = stream_rng(seed, c as u64);
            let mut sums = WeightSums::default();
            for _ in 0..CHUNK.min(samples - c * CHUNK) {
                let g = sample_er(n, p, &mut rng)?;
                let e = g.edge_count() as f64;
                // unnormalized proposal mass Q̄ = (p/(1−p))^E; Q = Q̄ (1−p)^m
                let log_q_bar = e * (lp - lq);
                let log_q = log_q_bar + m * lq;
                let log_w = model.scaled_statistic(&g)? - log_q;
                sums.w.add(log_w);
                sums.w2.add(2.0 * log_w);
                sums.inv_q.add(-log_q_bar);
            }
            Ok(sums)
        })
        .try_reduce(WeightSums::default, |a, b| Ok(a.merge(b)))
}

fn relative_error(log_sum: f64, log_sum_sq: f64, samples: usize) -> f64 {
    // Var(mean)/mean² = (N Σw² / (Σw)² − 1) / N
    let n = samples as f64;
    let ratio = (n.ln() + log_sum_sq - 2.0 * log_sum).exp();
    ((ratio - 1.0).max(0.0) / n).sqrt()
}

/// `(1/N) Σ exp(n² T(G_i)) / Q(G_i)` with `G_i` i.i.d. Erdős–Rényi(`n`, `p`).
/// Unbiased for `Σ_G exp(n² T(G))`; samples are drawn in fixed-size chunks, each
/// on its own random stream, so the result does not depend on the thread count.
pub fn estimate_importance(model: &ModelSpec, n: usize, p: f64, samples: usize, seed: u64) -> Result<EstimatorResult> {
    let sums = importance_sums(model, n, p, samples, seed)?;
    let log_sum = sums.w.value();
    Ok(EstimatorResult {
        kind: EstimatorKind::Importance,
        log_estimate: log_sum - (samples as f64).ln(),
        n_samples: samples,
        relative_std_error: relative_error(log_sum, sums.w2.value(), samples),
        variance_bound: None,
        seed,
    })
}

/// Variant for a proposal known only up to its normalizing constant: with
/// `Q̄ = (p/(1−p))^E`, `Σ q/Q̄ / Σ 1/Q̄` estimates `z / 2^{C(n,2)}`.
pub fn estimate_importance_self_normalized(
    model: &ModelSpec,
    n: usize,
    p: f64,
    samples: usize,
    seed: u64,
) -> Result<EstimatorResult> {
    let sums = importance_sums(model, n, p, samples, seed)?;
    let m = (n * (n - 1) / 2) as f64;
    // Σ q/Q̄ = Σ w · (1−p)^m
    let log_num = sums.w.value() + m * (1.0 - p).ln();
    let log_estimate = log_num - sums.inv_q.value() + m * std::f64::consts::LN_2;
    Ok(EstimatorResult {
        kind: EstimatorKind::SelfNormalizedImportance,
        log_estimate,
        n_samples: samples,
        relative_std_error: relative_error(sums.w.value(), sums.w2.value(), samples),
        variance_bound: None,
        seed,
    })
}

fn check_pair(model: &ModelSpec, model0: &ModelSpec) -> Result<()> {
    if !model.same_motifs(model0) {
        return Err(Error::Mismatch("the two models must share the same motif list".into()));
    }
    Ok(())
}

/// Runs one chain for `model` and returns `log Σ exp(g(G_i))` and `log Σ exp(2g(G_i))`.
fn chain_sums(
    model: &ModelSpec,
    sampler: Sampler,
    config: &ChainConfig,
    stream: u64,
    samples: usize,
    mut g: impl FnMut(&Graph) -> Result<f64>,
) -> Result<(f64, f64)> {
    if samples == 0 {
        return Err(Error::domain("need at least one sample"));
    }
    let mut chain = Chain::new(model, sampler, config, stream)?;
    let mut s = LogSum::default();
    let mut s2 = LogSum::default();
    chain.collect(config, samples, |graph| {
        let v = g(graph)?;
        s.add(v);
        s2.add(2.0 * v);
        Ok(())
    })?;
    Ok((s.value(), s2.value()))
}

/// `(1/N) Σ exp(n² [T_β(G_j) − T_{β⁰}(G_j)])` over a chain run at `model0`.
/// Estimates `z(β)/z(β⁰)`.
pub fn estimate_mcmle(
    model: &ModelSpec,
    model0: &ModelSpec,
    samples: usize,
    sampler: Sampler,
    config: &ChainConfig,
) -> Result<EstimatorResult> {
    check_pair(model, model0)?;
    let diff = model.difference(model0)?;
    let (log_sum, log_sum_sq) = chain_sums(model0, sampler, config, 0, samples, |g| diff.scaled_statistic(g))?;
    let variance_bound = if model.is_edge_only() && model0.is_edge_only() && model0.beta1() >= 0.0 {
        let n = config.n;
        let bound = mcmle_er_bound(n, 2.0 * model0.beta1(), 2.0 * model.beta1())?;
        Some((bound.ln_relative_asymptotic_bound - (samples as f64).ln()).exp())
    } else {
        None
    };
    Ok(EstimatorResult {
        kind: EstimatorKind::Mcmle,
        log_estimate: log_sum - (samples as f64).ln(),
        n_samples: samples,
        relative_std_error: relative_error(log_sum, log_sum_sq, samples),
        variance_bound,
        seed: config.seed,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlphaKind {
    /// `α ≡ 1`.
    Constant,
    /// `α = (q_β q_{β⁰})^{−1/2}`, so the two averages become
    /// `exp(±½ n² [T_β − T_{β⁰}])`.
    GeometricMean,
}

impl AlphaKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AlphaKind::Constant => "constant",
            AlphaKind::GeometricMean => "geometric-mean",
        }
    }
}

/// `z(β)/z(β⁰) = E_{β⁰}[q_β α] / E_β[q_{β⁰} α]` with `q = exp(n² T)`. The
/// numerator averages `samples0` states of a chain at `model0` (stream 0); the
/// denominator averages `samples1` states of a chain at `model` (stream 1).
pub fn estimate_acceptance_ratio(
    model: &ModelSpec,
    model0: &ModelSpec,
    alpha: AlphaKind,
    samples0: usize,
    samples1: usize,
    sampler: Sampler,
    config: &ChainConfig,
) -> Result<EstimatorResult> {
    check_pair(model, model0)?;
    let diff = model.difference(model0)?;
    let (num, num_sq) = match alpha {
        AlphaKind::Constant => chain_sums(model0, sampler, config, 0, samples0, |g| model.scaled_statistic(g))?,
        AlphaKind::GeometricMean => chain_sums(model0, sampler, config, 0, samples0, |g| Ok(0.5 * diff.scaled_statistic(g)?))?,
    };
    let (den, den_sq) = match alpha {
        AlphaKind::Constant => chain_sums(model, sampler, config, 1, samples1, |g| model0.scaled_statistic(g))?,
        AlphaKind::GeometricMean => chain_sums(model, sampler, config, 1, samples1, |g| Ok(-0.5 * diff.scaled_statistic(g)?))?,
    };
    if !den.is_finite() || !num.is_finite() {
        return Err(Error::EstimatorCollapse(format!(
            "numerator log-mean {num}, denominator log-mean {den}"
        )));
    }
    let log_estimate = (num - (samples0 as f64).ln()) - (den - (samples1 as f64).ln());
    let rel_num = relative_error(num, num_sq, samples0);
    let rel_den = relative_error(den, den_sq, samples1);
    Ok(EstimatorResult {
        kind: EstimatorKind::AcceptanceRatio,
        log_estimate,
        n_samples: samples0 + samples1,
        relative_std_error: (rel_num * rel_num + rel_den * rel_den).sqrt(),
        variance_bound: None,
        seed: config.seed,
    })
}
