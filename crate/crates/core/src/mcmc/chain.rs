//! Single-edge Markov chains on labeled graphs.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::model::ModelSpec;
use crate::rng::{stream_rng, StreamRng};
use crate::numeric::sigmoid;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Start {
    Empty,
    Complete,
    Graph(Graph),
}

impl Start {
    pub fn initial(&self, n: usize) -> Result<Graph> {
        match self {
            Start::Empty => Graph::empty(n),
            Start::Complete => Graph::complete(n),
            Start::Graph(g) => {
                if g.n() != n {
                    return Err(Error::Mismatch(format!("start graph has {} vertices, chain has {n}", g.n())));
                }
                Ok(g.clone())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampler {
    /// Resample one uniformly chosen pair from its conditional law.
    Glauber,
    /// Add an absent pair; delete a present one with probability `e^{−β}`.
    /// Targets the Erdős–Rényi law `∝ e^{β e(G)}`, `β ≥ 0`.
    Metropolis,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainConfig {
    pub n: usize,
    pub steps: usize,
    pub seed: u64,
    pub start: Start,
    /// Keep every `thin`-th state after burn-in.
    pub thin: usize,
}

impl ChainConfig {
    pub fn new(n: usize, steps: usize, seed: u64) -> Self {
        ChainConfig { n, steps, seed, start: Start::Empty, thin: 1 }
    }

    /// Total and burn-in step counts for collecting `samples` states: at least
    /// `steps` in total, with the first 10% (or more) discarded.
    pub fn schedule(&self, samples: usize) -> (usize, usize) {
        let kept = samples * self.thin.max(1);
        let total = self.steps.max((kept as f64 / 0.9).ceil() as usize);
        (total, total - kept)
    }
}

/// Uniform unordered pair `i < j`.
#[inline]
pub fn random_pair(n: usize, rng: &mut impl Rng) -> (usize, usize) {
    let i = rng.gen_range(0..n);
    let mut j = rng.gen_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    (i.min(j), i.max(j))
}

/// One Metropolis transition for the Erdős–Rényi law `∝ e^{β e(G)}`.
pub fn metropolis_step(g: &mut Graph, beta: f64, rng: &mut impl Rng) -> Result<()> {
    if !(beta >= 0.0) {
        return Err(Error::domain(format!(
            "the Metropolis chain needs beta >= 0, got {beta}; sample the complement graph at -beta instead"
        )));
    }
    let (i, j) = random_pair(g.n(), rng);
    if !g.has_edge(i, j) {
        g.set_edge(i, j, true);
    } else if rng.gen::<f64>() < (-beta).exp() {
        g.set_edge(i, j, false);
    }
    Ok(())
}

/// One Glauber transition for the law `∝ exp(n² T(G))`: a uniform pair is set
/// present with probability `σ(n² [T(G ∪ ij) − T(G ∖ ij)])`.
pub fn glauber_step(g: &mut Graph, model: &ModelSpec, rng: &mut impl Rng) -> Result<()> {
    let (i, j) = random_pair(g.n(), rng);
    let gain = model.toggle_gain(g, i, j)?;
    let on = rng.gen::<f64>() < sigmoid(gain);
    g.set_edge(i, j, on);
    Ok(())
}

/// A running chain owning its state and random stream.
pub struct Chain<'a> {
    model: &'a ModelSpec,
    sampler: Sampler,
    beta: f64,
    graph: Graph,
    rng: StreamRng,
    step: usize,
}

impl<'a> Chain<'a> {
    /// `stream` selects an independent random stream for the same seed.
    pub fn new(model: &'a ModelSpec, sampler: Sampler, config: &ChainConfig, stream: u64) -> Result<Self> {
        if config.n < 2 {
            return Err(Error::InvalidGraph(format!("chains need n >= 2, got {}", config.n)));
        }
        let beta = match sampler {
            Sampler::Glauber => 0.0,
            Sampler::Metropolis => {
                if !model.is_edge_only() {
                    return Err(Error::Mismatch("the Metropolis chain samples edge-only models".into()));
                }
                let beta = 2.0 * model.beta1();
                if beta < 0.0 {
                    return Err(Error::domain(format!(
                        "the Metropolis chain needs beta >= 0, got {beta}; sample the complement graph at -beta instead"
                    )));
                }
                beta
            }
        };
        Ok(Chain {
            model,
            sampler,
            beta,
            graph: config.start.initial(config.n)?,
            rng: stream_rng(config.seed, stream),
            step: 0,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn steps_taken(&self) -> usize {
        self.step
    }

    pub fn advance(&mut self) -> Result<()> {
        match self.sampler {
            Sampler::Glauber => glauber_step(&mut self.graph, self.model, &mut self.rng)?,
            Sampler::Metropolis => metropolis_step(&mut self.graph, self.beta, &mut self.rng)?,
        }
        self.step += 1;
        Ok(())
    }

    pub fn run(&mut self, steps: usize) -> Result<()> {
        for _ in 0..steps {
            self.advance()?;
        }
        Ok(())
    }

    /// Burns in, then calls `visit` on `samples` states spaced `thin` steps apart.
    pub fn collect(&mut self, config: &ChainConfig, samples: usize, mut visit: impl FnMut(&Graph) -> Result<()>) -> Result<()> {
        let (_, burn) = config.schedule(samples);
        self.run(burn)?;
        for _ in 0..samples {
            self.run(config.thin.max(1))?;
            visit(&self.graph)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub step: usize,
    pub edges: usize,
    pub triangles: usize,
    /// `T(G) = Σ β_i t(H_i, G)`.
    pub statistic: f64,
}

/// Runs `config.steps` transitions, recording the state at step 0 and every
/// `record_every` steps.
pub fn chain_trace(model: &ModelSpec, sampler: Sampler, config: &ChainConfig, record_every: usize) -> Result<Vec<TraceRow>> {
    let every = record_every.max(1);
    let mut chain = Chain::new(model, sampler, config, 0)?;
    let row = |c: &Chain| -> Result<TraceRow> {
        Ok(TraceRow {
            step: c.steps_taken(),
            edges: c.graph().edge_count(),
            triangles: c.graph().triangle_count(),
            statistic: model.statistic(c.graph())?,
        })
    };
    let mut rows = vec![row(&chain)?];
    while chain.steps_taken() < config.steps {
        let todo = every.min(config.steps - chain.steps_taken());
        chain.run(todo)?;
        if chain.steps_taken() % every == 0 || chain.steps_taken() == config.steps {
            rows.push(row(&chain)?);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    #[test]
    fn empty_graph_always_gains_an_edge() {
        let mut rng = stream_rng(3, 0);
        for _ in 0..50 {
            let mut g = Graph::empty(6).unwrap();
            metropolis_step(&mut g, 0.7, &mut rng).unwrap();
            assert_eq!(g.edge_count(), 1);
        }
    }

    #[test]
    fn negative_beta_rejected() {
        let mut g = Graph::empty(4).unwrap();
        let err = metropolis_step(&mut g, -0.1, &mut stream_rng(0, 0)).unwrap_err();
        assert!(err.to_string().contains("complement"));
        let m = ModelSpec::erdos_renyi(-1.0);
        assert!(Chain::new(&m, Sampler::Metropolis, &ChainConfig::new(4, 10, 0), 0).is_err());
    }

    #[test]
    fn pairs_are_uniform_and_ordered() {
        let mut rng = stream_rng(11, 0);
        let mut counts = [0usize; 6];
        let index = |i: usize, j: usize| match (i, j) {
            (0, 1) => 0,
            (0, 2) => 1,
            (0, 3) => 2,
            (1, 2) => 3,
            (1, 3) => 4,
            (2, 3) => 5,
            _ => unreachable!(),
        };
        for _ in 0..60_000 {
            let (i, j) = random_pair(4, &mut rng);
            counts[index(i, j)] += 1;
        }
        for c in counts {
            assert!((c as f64 - 10_000.0).abs() < 400.0);
        }
    }

    #[test]
    fn same_seed_same_path() {
        let m = ModelSpec::edge_triangle(0.4, 0.2);
        let config = ChainConfig::new(12, 500, 99);
        let a = chain_trace(&m, Sampler::Glauber, &config, 50).unwrap();
        let b = chain_trace(&m, Sampler::Glauber, &config, 50).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 11);
        assert_eq!(a[0].edges, 0);
        assert_eq!(a.last().unwrap().step, 500);
    }

    #[test]
    fn schedule_burns_in_a_tenth() {
        let mut c = ChainConfig::new(5, 100, 0);
        assert_eq!(c.schedule(10), (100, 90));
        assert_eq!(c.schedule(900), (1000, 100));
        c.thin = 2;
        assert_eq!(c.schedule(900), (2000, 200));
    }
}
