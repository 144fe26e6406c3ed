use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ergm_core::io::read_model;
use ergm_core::ModelSpec;

#[derive(Debug, Parser)]
#[command(name = "ergm-lab", version, about = "Exponential random graph models: free energies, phase diagrams, samplers and estimators")]
pub struct Cli {
    /// Write output here instead of standard output.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a Glauber or Metropolis chain and emit a CSV trace.
    Sample(SampleArgs),
    /// Solve the scalar problem and report u*, psi and its certificate.
    Psi(PsiArgs),
    /// Sweep beta2 (and optionally beta1) for the edge-triangle model.
    PhaseDiagram(PhaseArgs),
    /// Sparse/dense thresholds and the crossing point for beta1 < 0.
    Degeneracy(DegeneracyArgs),
    /// Estimate a normalizing constant or a ratio of them.
    EstimateZ(EstimateArgs),
    /// Check the closed-form spectral theory against dense matrices at n = 3.
    SpectralCheck(SpectralArgs),
    /// Iterate the Euler-Lagrange fixed point from a step graphon.
    EulerLagrange(EulerLagrangeArgs),
    /// Limit graphon for a strongly negative motif coefficient.
    Extremal(ExtremalArgs),
    /// Grid of the graph statistic minus the scalar free energy for one graph.
    TopContour(TopContourArgs),
}

/// `lo:hi:steps`, or a single value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lo];
        }
        (0..self.steps)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.steps - 1) as f64)
            .collect()
    }

    pub fn is_single(&self) -> bool {
        self.steps == 1
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("invalid number `{t}` in `{s}`"));
        match parts.as_slice() {
            [x] => {
                let v = num(x)?;
                Ok(Range { lo: v, hi: v, steps: 1 })
            }
            [lo, hi, steps] => {
                let (lo, hi) = (num(lo)?, num(hi)?);
                let steps: usize = steps.trim().parse().map_err(|_| format!("invalid step count in `{s}`"))?;
                if steps < 2 || lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
                    return Err(format!("`{s}` needs lo < hi and at least 2 steps"));
                }
                Ok(Range { lo, hi, steps })
            }
            _ => Err(format!("expected `value` or `lo:hi:steps`, got `{s}`")),
        }
    }
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Model file: one `motif beta` term per line.
    #[arg(long, conflicts_with_all = ["beta1", "beta2"])]
    pub model: Option<PathBuf>,
    /// Edge coefficient of the edge-triangle model.
    #[arg(long, allow_hyphen_values = true)]
    pub beta1: Option<f64>,
    /// Triangle coefficient of the edge-triangle model.
    #[arg(long, allow_hyphen_values = true)]
    pub beta2: Option<f64>,
}

impl ModelArgs {
    pub fn resolve(&self) -> anyhow::Result<ModelSpec> {
        if let Some(path) = &self.model {
            return read_model(path).with_context(|| format!("reading model {}", path.display()));
        }
        match (self.beta1, self.beta2) {
            (None, None) => bail!("give a model with --model FILE or --beta1/--beta2"),
            (b1, b2) => Ok(ModelSpec::edge_triangle(b1.unwrap_or(0.0), b2.unwrap_or(0.0))),
        }
    }
}

#[derive(Debug, Args)]
pub struct ReferenceArgs {
    /// Reference model file for ratio estimators.
    #[arg(long, conflicts_with_all = ["ref_beta1", "ref_beta2"])]
    pub ref_model: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub ref_beta1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub ref_beta2: Option<f64>,
}

impl ReferenceArgs {
    pub fn resolve(&self) -> anyhow::Result<Option<ModelSpec>> {
        if let Some(path) = &self.ref_model {
            return Ok(Some(read_model(path).with_context(|| format!("reading model {}", path.display()))?));
        }
        Ok(match (self.ref_beta1, self.ref_beta2) {
            (None, None) => None,
            (b1, b2) => Some(ModelSpec::edge_triangle(b1.unwrap_or(0.0), b2.unwrap_or(0.0))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SamplerArg {
    Glauber,
    Metropolis,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StartArg {
    Empty,
    Complete,
}

#[derive(Debug, Args)]
pub struct ChainArgs {
    #[arg(long, default_value_t = 30)]
    pub n: usize,
    #[arg(long, default_value_t = 10_000)]
    pub steps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = SamplerArg::Glauber)]
    pub sampler: SamplerArg,
    #[arg(long, value_enum, default_value_t = StartArg::Empty)]
    pub start: StartArg,
    /// Start from this graph (edge-list file) instead.
    #[arg(long, conflicts_with = "start")]
    pub start_graph: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub chain: ChainArgs,
    #[arg(long, default_value_t = 100)]
    pub record_every: usize,
}

#[derive(Debug, Args)]
pub struct PsiArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Also compute the exact finite-n value by enumeration (n <= 6).
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PhaseArgs {
    /// A value, or `lo:hi:steps` for a surface.
    #[arg(long, allow_hyphen_values = true)]
    pub beta1: Range,
    #[arg(long, allow_hyphen_values = true)]
    pub beta2: Range,
}

#[derive(Debug, Args)]
pub struct DegeneracyArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub beta1: f64,
    /// Classify this triangle coefficient as well.
    #[arg(long, allow_hyphen_values = true)]
    pub beta2: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Importance,
    ImportanceSelfNormalized,
    Mcmle,
    AcceptanceRatio,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlphaArg {
    Constant,
    GeometricMean,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub reference: ReferenceArgs,
    #[arg(long, value_enum, default_value_t = Method::Importance)]
    pub method: Method,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Erdős–Rényi proposal density; defaults to u*.
    #[arg(long)]
    pub proposal: Option<f64>,
    #[arg(long, value_enum, default_value_t = AlphaArg::GeometricMean)]
    pub alpha: AlphaArg,
    #[command(flatten)]
    pub chain: ChainArgs,
}

#[derive(Debug, Args)]
pub struct SpectralArgs {
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 0.5, 1.0])]
    pub beta: Vec<f64>,
    /// Also report the cutoff and chi-square distances at this vertex count.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub c: f64,
}

#[derive(Debug, Args)]
pub struct EulerLagrangeArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Initial step graphon file; random equal blocks otherwise.
    #[arg(long)]
    pub init: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    pub blocks: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = ergm_core::variational::DEFAULT_DAMPING)]
    pub damping: f64,
    #[arg(long, default_value_t = ergm_core::variational::DEFAULT_MAX_ITER)]
    pub max_iter: usize,
}

#[derive(Debug, Args)]
pub struct ExtremalArgs {
    /// `edge`, `triangle`, `star:j`, `cycle:j`, `complete:r`, or `0-1,1-2,...`.
    #[arg(long, default_value = "triangle")]
    pub motif: String,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub beta1: f64,
    /// Also run the graphon search at this motif coefficient.
    #[arg(long, allow_hyphen_values = true)]
    pub search_beta: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct TopContourArgs {
    /// Edge-list file of the graph.
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub beta1: Range,
    #[arg(long, allow_hyphen_values = true)]
    pub beta2: Range,
}
