//! Step-function graphons and the functionals evaluated on them.
//!
//! A [`StepGraphon`] partitions `[0,1]` into `k` consecutive intervals of measure
//! `weights[a]` and takes the constant value `values[a][b]` on each product cell.
//! Homomorphism densities, the entropy functionals and the `Δ_H` kernel are
//! evaluated exactly by summing over block assignments.

use crate::error::{guard_enumeration, Error, Result};
use crate::motif::Motif;

pub const WEIGHT_TOLERANCE: f64 = 1e-12;
/// Largest motif for exact block-assignment sums.
pub const MAX_DENSITY_MOTIF: usize = 8;
pub const MAX_DELTA_MOTIF: usize = 6;

#[derive(Clone, Debug, PartialEq)]
pub struct StepGraphon {
    weights: Vec<f64>,
    /// Row-major `k × k`, symmetric.
    values: Vec<f64>,
}

impl StepGraphon {
    pub fn new(weights: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let k = weights.len();
        if k == 0 {
            return Err(Error::InvalidGraphon("at least one block is required".into()));
        }
        if values.len() != k * k {
            return Err(Error::InvalidGraphon(format!(
                "expected {} values for {k} blocks, got {}",
                k * k,
                values.len()
            )));
        }
        if weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidGraphon("block weights must be non-negative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::InvalidGraphon(format!("block weights sum to {total}, not 1")));
        }
        for a in 0..k {
            for b in 0..k {
                let v = values[a * k + b];
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidGraphon(format!("value {v} at ({a}, {b}) outside [0, 1]")));
                }
                if v != values[b * k + a] {
                    return Err(Error::InvalidGraphon(format!("values not symmetric at ({a}, {b})")));
                }
            }
        }
        Ok(StepGraphon { weights, values })
    }

    /// `k` equal blocks.
    pub fn equal_blocks(k: usize, values: Vec<f64>) -> Result<Self> {
        Self::new(vec![1.0 / k as f64; k], values)
    }

    pub fn constant(u: f64) -> Result<Self> {
        Self::new(vec![1.0], vec![u])
    }

    /// `p` off the diagonal blocks and `0` on them: the complete `k`-partite
    /// pattern scaled by `p`.
    pub fn multipartite(k: usize, p: f64) -> Result<Self> {
        let mut values = vec![p; k * k];
        for a in 0..k {
            values[a * k + a] = 0.0;
        }
        Self::equal_blocks(k, values)
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn value(&self, a: usize, b: usize) -> f64 {
        self.values[a * self.k() + b]
    }

    /// Applies `f` to every value; the result must stay in `[0,1]`.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.weights.clone(), self.values.iter().map(|&v| f(v)).collect())
    }

    /// `1 − h`.
    pub fn complement(&self) -> Self {
        self.map_values(|v| 1.0 - v).expect("complement stays in range")
    }

    pub fn is_constant(&self, tol: f64) -> bool {
        let first = self.values[0];
        self.values.iter().all(|&v| (v - first).abs() <= tol)
    }

    pub fn has_equal_weights(&self, tol: f64) -> bool {
        let target = 1.0 / self.k() as f64;
        self.weights.iter().all(|&w| (w - target).abs() <= tol)
    }

    /// Splits every block into `factor` equal sub-blocks (same function on `[0,1]²`).
    pub fn split_blocks(&self, factor: usize) -> Self {
        assert!(factor >= 1);
        let k = self.k();
        let nk = k * factor;
        let weights = self
            .weights
            .iter()
            .flat_map(|&w| std::iter::repeat_n(w / factor as f64, factor))
            .collect();
        let mut values = vec![0.0; nk * nk];
        for a in 0..nk {
            for b in 0..nk {
                values[a * nk + b] = self.value(a / factor, b / factor);
            }
        }
        StepGraphon { weights, values }
    }

    /// Reorders blocks: block `a` of the result is block `perm[a]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let k = self.k();
        assert_eq!(perm.len(), k);
        let weights = perm.iter().map(|&p| self.weights[p]).collect();
        let mut values = vec![0.0; k * k];
        for a in 0..k {
            for b in 0..k {
                values[a * k + b] = self.value(perm[a], perm[b]);
            }
        }
        StepGraphon { weights, values }
    }

    /// Sup-norm distance between value matrices on identical partitions.
    pub fn sup_distance(&self, other: &StepGraphon) -> f64 {
        assert_eq!(self.k(), other.k());
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// `∬ φ(h(x,y)) dx dy`.
    pub fn integrate(&self, phi: impl Fn(f64) -> f64) -> f64 {
        let k = self.k();
        let mut total = 0.0;
        for a in 0..k {
            for b in 0..k {
                total += self.weights[a] * self.weights[b] * phi(self.value(a, b));
            }
        }
        total
    }
}

/// A `k × k` real kernel on the block partition of some graphon (values are not
/// restricted to `[0,1]`).
#[derive(Clone, Debug, PartialEq)]
pub struct BlockKernel {
    k: usize,
    data: Vec<f64>,
}

impl BlockKernel {
    pub fn filled(k: usize, v: f64) -> Self {
        BlockKernel { k, data: vec![v; k * k] }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.data[a * self.k + b]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn add_scaled(&mut self, other: &BlockKernel, scale: f64) {
        assert_eq!(self.k, other.k);
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x += scale * y;
        }
    }
}

/// `t(H, h) = ∫ Π_{(i,j) ∈ E(H)} h(x_i, x_j) dx`.
pub fn hom_density_graphon(motif: &Motif, h: &StepGraphon) -> Result<f64> {
    let v = motif.vertex_count();
    if v > MAX_DENSITY_MOTIF {
        return Err(Error::TooLarge {
            what: "motif vertex count for graphon densities".into(),
            size: v as f64,
            bound: MAX_DENSITY_MOTIF as f64,
        });
    }
    guard_enumeration("graphon homomorphism density", h.k(), v)?;
    let mut assign = vec![0usize; v];
    Ok(BlockSum::new(motif, h, None).sum(&mut assign, 0, 1.0))
}

/// Sums `Π weights × Π edge values` over block assignments of the motif vertices.
/// When `pinned = Some((r, s, skip))`, vertices `r, s` keep their preset blocks,
/// contribute no weight, and edge `skip` is left out of the product.
struct BlockSum<'a> {
    h: &'a StepGraphon,
    order: Vec<usize>,
    /// For each vertex in `order`: edges to earlier-ordered (or pinned) vertices.
    checks: Vec<Vec<usize>>,
}

impl<'a> BlockSum<'a> {
    fn new(motif: &Motif, h: &'a StepGraphon, pinned: Option<(usize, usize, usize)>) -> Self {
        let mut order = Vec::new();
        if let Some((r, s, _)) = pinned {
            order.push(r);
            order.push(s);
        }
        for v in motif.search_order() {
            if !order.contains(&v) {
                order.push(v);
            }
        }
        let mut position = vec![0; motif.vertex_count()];
        for (p, &v) in order.iter().enumerate() {
            position[v] = p;
        }
        let skip = pinned.map(|(_, _, e)| e);
        let mut checks = vec![Vec::new(); order.len()];
        for (idx, &(a, b)) in motif.edges().iter().enumerate() {
            if Some(idx) == skip {
                continue;
            }
            let later = if position[a] > position[b] { a } else { b };
            let earlier = if later == a { b } else { a };
            checks[position[later]].push(earlier);
        }
        BlockSum { h, order, checks }
    }

    fn sum(&self, assign: &mut [usize], depth: usize, acc: f64) -> f64 {
        if depth == self.order.len() {
            return acc;
        }
        let v = self.order[depth];
        let mut total = 0.0;
        for c in 0..self.h.k() {
            let mut term = acc * self.h.weights[c];
            if term == 0.0 {
                continue;
            }
            for &u in &self.checks[depth] {
                term *= self.h.value(c, assign[u]);
            }
            if term != 0.0 {
                assign[v] = c;
                total += self.sum(assign, depth + 1, term);
            }
        }
        total
    }

    /// Sum with the first two ordered vertices pinned to blocks `a`, `b` (no weight
    /// for them), including any edge factor between the pinned pair.
    fn pinned_sum(&self, assign: &mut [usize], a: usize, b: usize) -> f64 {
        assign[self.order[0]] = a;
        assign[self.order[1]] = b;
        let mut acc = 1.0;
        for &u in &self.checks[1] {
            acc *= self.h.value(b, assign[u]);
        }
        if acc == 0.0 {
            return 0.0;
        }
        self.sum(assign, 2, acc)
    }
}

/// `I(u) = ½ u log u + ½ (1−u) log(1−u)` with `0 log 0 = 0`.
pub fn entropy_rate(u: f64) -> f64 {
    0.5 * (xlogx(u) + xlogx(1.0 - u))
}

/// `I_p(u) = ½ u log(u/p) + ½ (1−u) log((1−u)/(1−p))`.
pub fn relative_rate(u: f64, p: f64) -> f64 {
    let a = if u > 0.0 { u * (u / p).ln() } else { 0.0 };
    let b = if u < 1.0 { (1.0 - u) * ((1.0 - u) / (1.0 - p)).ln() } else { 0.0 };
    0.5 * (a + b)
}

#[inline]
fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `∬ I(h(x,y)) dx dy`, so that a constant graphon `u` has rate `I(u)`.
pub fn rate_entropy(h: &StepGraphon) -> f64 {
    h.integrate(entropy_rate)
}

/// `∬ I_p(h(x,y)) dx dy`.
pub fn rate_relative(h: &StepGraphon, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("reference density p must lie in (0,1), got {p}")));
    }
    Ok(h.integrate(|u| relative_rate(u, p)))
}

/// The kernel `Δ_H h`: for each block pair `(a, b)`, the sum over edges `(r, s)` of
/// `H` of the integral of the remaining edge factors with `x_r` in block `a` and
/// `x_s` in block `b`. Each edge term is averaged over both orientations, so the
/// kernel is symmetric and `d/dε t(H, h + εg) = ∬ g Δ_H h` for symmetric `g`.
/// A single edge gives the all-ones kernel.
pub fn delta_h(motif: &Motif, h: &StepGraphon) -> Result<BlockKernel> {
    let v = motif.vertex_count();
    if v > MAX_DELTA_MOTIF {
        return Err(Error::TooLarge {
            what: "motif vertex count for the delta kernel".into(),
            size: v as f64,
            bound: MAX_DELTA_MOTIF as f64,
        });
    }
    let k = h.k();
    guard_enumeration("delta kernel", k, v)?;
    let mut out = BlockKernel::filled(k, 0.0);
    let mut assign = vec![0usize; v];
    for (idx, &(r, s)) in motif.edges().iter().enumerate() {
        let forward = BlockSum::new(motif, h, Some((r, s, idx)));
        for a in 0..k {
            for b in 0..k {
                let t = forward.pinned_sum(&mut assign, a, b);
                out.data[a * k + b] += 0.5 * t;
                out.data[b * k + a] += 0.5 * t;
            }
        }
    }
    Ok(out)
}
