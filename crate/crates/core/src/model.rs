//! Exponential random graph models given as weighted lists of motifs.
//!
//! The statistic is `T(G) = Σ β_i t(H_i, G)` with homomorphism densities, and the
//! model assigns `G` probability proportional to `exp(n² T(G))`. With this scaling
//! an edge coefficient `β₁` contributes `2β₁ e(G)`, so the Erdős–Rényi law
//! `∝ e^{β e(G)}` is the edge-only model with `β₁ = β/2`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{hom_density_graph, Graph};
use crate::graphon::{hom_density_graphon, StepGraphon};
use crate::motif::{Motif, MotifKind};

#[derive(Clone, Debug, PartialEq)]
pub struct ModelSpec {
    terms: Vec<(Motif, f64)>,
}

impl ModelSpec {
    /// Term 0 is always the single edge; an edge term with `β = 0` is prepended
    /// when the list does not start with one.
    pub fn new(mut terms: Vec<(Motif, f64)>) -> Result<Self> {
        if terms.iter().any(|(_, b)| !b.is_finite()) {
            return Err(Error::domain("model coefficients must be finite"));
        }
        if terms.first().map(|(m, _)| m.kind()) != Some(MotifKind::Edge) {
            terms.insert(0, (Motif::edge(), 0.0));
        }
        Ok(ModelSpec { terms })
    }

    pub fn edge_only(beta1: f64) -> Self {
        ModelSpec { terms: vec![(Motif::edge(), beta1)] }
    }

    /// The Erdős–Rényi law `∝ e^{β e(G)}`, edge probability `e^β / (1 + e^β)`.
    pub fn erdos_renyi(beta: f64) -> Self {
        Self::edge_only(beta / 2.0)
    }

    pub fn edge_triangle(beta1: f64, beta2: f64) -> Self {
        ModelSpec {
            terms: vec![(Motif::edge(), beta1), (Motif::triangle(), beta2)],
        }
    }

    pub fn terms(&self) -> &[(Motif, f64)] {
        &self.terms
    }

    pub fn beta1(&self) -> f64 {
        self.terms[0].1
    }

    pub fn betas(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.1).collect()
    }

    /// Same motifs with new coefficients.
    pub fn with_betas(&self, betas: &[f64]) -> Result<Self> {
        if betas.len() != self.terms.len() {
            return Err(Error::Mismatch(format!(
                "{} coefficients for {} terms",
                betas.len(),
                self.terms.len()
            )));
        }
        Ok(ModelSpec {
            terms: self.terms.iter().zip(betas).map(|((m, _), &b)| (m.clone(), b)).collect(),
        })
    }

    pub fn same_motifs(&self, other: &ModelSpec) -> bool {
        self.terms.len() == other.terms.len()
            && self.terms.iter().zip(&other.terms).all(|((a, _), (b, _))| a == b)
    }

    /// Coefficient-wise `self − other`; errors when the motif lists differ.
    pub fn difference(&self, other: &ModelSpec) -> Result<ModelSpec> {
        if !self.same_motifs(other) {
            return Err(Error::Mismatch("models have different motif lists".into()));
        }
        let betas: Vec<f64> = self.terms.iter().zip(&other.terms).map(|(a, b)| a.1 - b.1).collect();
        self.with_betas(&betas)
    }

    pub fn scaled(&self, factor: f64) -> ModelSpec {
        ModelSpec {
            terms: self.terms.iter().map(|(m, b)| (m.clone(), b * factor)).collect(),
        }
    }

    /// Whether only the edge term carries weight.
    pub fn is_edge_only(&self) -> bool {
        self.terms[1..].iter().all(|(_, b)| *b == 0.0)
    }

    pub fn max_motif_vertices(&self) -> usize {
        self.terms.iter().map(|(m, _)| m.vertex_count()).max().unwrap_or(2)
    }

    /// `T(G) = Σ β_i t(H_i, G)`.
    pub fn statistic(&self, g: &Graph) -> Result<f64> {
        let n = g.n() as f64;
        Ok(self.scaled_statistic(g)? / (n * n))
    }

    /// `n² T(G)`, the exponent of the unnormalized probability.
    pub fn scaled_statistic(&self, g: &Graph) -> Result<f64> {
        let n = g.n();
        let nf = n as f64;
        let mut total = 0.0;
        for (m, beta) in &self.terms {
            if *beta == 0.0 {
                continue;
            }
            let scaled = match m.kind() {
                MotifKind::Edge => 2.0 * g.edge_count() as f64,
                MotifKind::Triangle => 6.0 * g.triangle_count() as f64 / nf,
                MotifKind::Star(j) => {
                    let s: f64 = (0..n).map(|v| (g.degree(v) as f64).powi(j as i32)).sum();
                    s / nf.powi(j as i32 - 1)
                }
                MotifKind::General => hom_density_graph(m, g)? * nf * nf,
            };
            total += beta * scaled;
        }
        Ok(total)
    }

    /// `n² [T(G ∪ {ij}) − T(G ∖ {ij})]`, from local counts for edges, triangles
    /// and stars. `g` itself is left unchanged.
    pub fn toggle_gain(&self, g: &mut Graph, i: usize, j: usize) -> Result<f64> {
        let n = g.n();
        let nf = n as f64;
        let present = g.has_edge(i, j);
        let mut total = 0.0;
        for (m, beta) in &self.terms {
            if *beta == 0.0 {
                continue;
            }
            let gain = match m.kind() {
                MotifKind::Edge => 2.0,
                MotifKind::Triangle => 6.0 * g.common_neighbors(i, j) as f64 / nf,
                MotifKind::Star(k) => {
                    let off = usize::from(present);
                    let di = (g.degree(i) - off) as f64;
                    let dj = (g.degree(j) - off) as f64;
                    let k = k as i32;
                    let d = (di + 1.0).powi(k) - di.powi(k) + (dj + 1.0).powi(k) - dj.powi(k);
                    d / nf.powi(k - 1)
                }
                MotifKind::General => {
                    g.set_edge(i, j, true);
                    let on = hom_density_graph(m, g);
                    g.set_edge(i, j, false);
                    let off = hom_density_graph(m, g);
                    g.set_edge(i, j, present);
                    (on? - off?) * nf * nf
                }
            };
            total += beta * gain;
        }
        Ok(total)
    }

    /// `T(h) = Σ β_i t(H_i, h)`.
    pub fn statistic_graphon(&self, h: &StepGraphon) -> Result<f64> {
        let mut total = 0.0;
        for (m, beta) in &self.terms {
            if *beta != 0.0 {
                total += beta * hom_density_graphon(m, h)?;
            }
        }
        Ok(total)
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (m, b) in &self.terms {
            writeln!(f, "{m} {b}")?;
        }
        Ok(())
    }
}

/// One `motif beta` pair per line; blank lines and `#` comments are ignored.
impl FromStr for ModelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for (idx, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |msg: String| Error::Parse { line: idx + 1, msg };
            let mut parts = line.split_whitespace();
            let (Some(motif), Some(beta), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(parse_err(format!("expected `motif beta`, got `{line}`")));
            };
            let motif: Motif = motif.parse().map_err(|e: Error| parse_err(e.to_string()))?;
            let beta: f64 = beta
                .parse()
                .map_err(|_| parse_err(format!("invalid coefficient `{beta}`")))?;
            terms.push((motif, beta));
        }
        if terms.is_empty() {
            return Err(Error::Parse { line: 0, msg: "model has no terms".into() });
        }
        ModelSpec::new(terms)
    }
}
