//! Edge-driven opinion dynamics on a finite graph.
//!
//! At each step a directed edge `(v, u)` is drawn from an [`EdgeDistribution`]
//! and `u` adopts the current opinion of `v`. The Invasion model draws `v`
//! uniformly and then a uniform neighbor `u`; the Voter model is the same
//! measure with every edge reversed.

use rand::Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Distribution;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::replica_rng;

/// Tolerance on the total mass of an edge distribution.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Default step cap for [`run_to_consensus`].
pub const DEFAULT_MAX_STEPS: u64 = 1_000_000_000;

/// A probability measure with full support on the directed edges of a graph.
#[derive(Debug, Clone)]
pub struct EdgeDistribution {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    weights: Vec<f64>,
    sampler: WeightedAliasIndex<f64>,
}

impl EdgeDistribution {
    /// Builds the measure from a weight function over `graph.directed_edges()`.
    pub fn from_fn(graph: &Graph, mut weight: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let edges: Vec<_> = graph.directed_edges().collect();
        let weights: Vec<f64> = edges.iter().map(|&(v, u)| weight(v, u)).collect();
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(**w > 0.0 && **w <= 1.0))
        {
            let (v, u) = edges[i];
            return Err(Error::invalid(format!(
                "edge ({v},{u}) has weight {w}, expected a value in (0,1]"
            )));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::invalid(format!("edge weights sum to {total}, not 1")));
        }
        let sampler = WeightedAliasIndex::new(weights.clone())
            .map_err(|e| Error::invalid(format!("alias table: {e}")))?;
        Ok(EdgeDistribution {
            vertex_count: graph.vertex_count(),
            edges,
            weights,
            sampler,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Directed edges in the order used by [`weights`](Self::weights).
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weight of `(v, u)`, or 0 if it is not a directed edge.
    pub fn weight(&self, v: usize, u: usize) -> f64 {
        self.edges
            .binary_search(&(v, u))
            .map_or(0.0, |i| self.weights[i])
    }

    pub fn contains(&self, v: usize, u: usize) -> bool {
        self.edges.binary_search(&(v, u)).is_ok()
    }

    /// Draws a directed edge in O(1).
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (usize, usize) {
        self.edges[self.sampler.sample(rng)]
    }

    /// Marginal law of the receiving vertex: `rho_2(u) = sum_v rho(v, u)`.
    pub fn receiver_marginal(&self) -> Vec<f64> {
        let mut marginal = vec![0.0; self.vertex_count];
        for (&(_, u), &w) in self.edges.iter().zip(&self.weights) {
            marginal[u] += w;
        }
        marginal
    }

    fn check_graph(&self, graph: &Graph) -> Result<()> {
        if self.vertex_count != graph.vertex_count()
            || self.edges.len() != graph.directed_edge_count()
        {
            return Err(Error::invalid("edge distribution belongs to a different graph"));
        }
        Ok(())
    }
}

/// Invasion kernel: `rho(v, u) = 1 / (|V| deg(v))`.
pub fn rho_invasion(graph: &Graph) -> Result<EdgeDistribution> {
    let size = graph.vertex_count() as f64;
    EdgeDistribution::from_fn(graph, |v, _| 1.0 / (size * graph.degree(v) as f64))
}

/// Voter kernel: `rho_V(u, v) = rho_I(v, u)`.
pub fn rho_voter(graph: &Graph) -> Result<EdgeDistribution> {
    let size = graph.vertex_count() as f64;
    EdgeDistribution::from_fn(graph, |_, u| 1.0 / (size * graph.degree(u) as f64))
}

/// A 0/1 opinion per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OpinionConfig {
    opinions: Vec<u8>,
    ones: usize,
}

impl OpinionConfig {
    pub fn new(graph: &Graph, opinions: Vec<u8>) -> Result<Self> {
        if opinions.len() != graph.vertex_count() {
            return Err(Error::invalid(format!(
                "configuration has {} entries, graph has {} vertices",
                opinions.len(),
                graph.vertex_count()
            )));
        }
        if opinions.iter().any(|&o| o > 1) {
            return Err(Error::invalid("opinions must be 0 or 1"));
        }
        let ones = opinions.iter().filter(|&&o| o == 1).count();
        Ok(OpinionConfig { opinions, ones })
    }

    /// Configuration read from the low bits of `mask` (bit `v` is vertex `v`).
    pub fn from_mask(graph: &Graph, mask: u64) -> Result<Self> {
        let opinions = (0..graph.vertex_count())
            .map(|v| ((mask >> v) & 1) as u8)
            .collect();
        Self::new(graph, opinions)
    }

    /// `k` ones on the first vertices of the small partition and `l` ones on
    /// the first vertices of the large one.
    pub fn bipartite_counts(graph: &Graph, k: usize, l: usize) -> Result<Self> {
        let part = graph
            .bipartition()
            .ok_or_else(|| Error::invalid("graph has no bipartite tag"))?;
        if k > part.small || l > part.large {
            return Err(Error::invalid(format!(
                "counts ({k},{l}) exceed partition sizes ({},{})",
                part.small, part.large
            )));
        }
        let mut opinions = vec![0u8; graph.vertex_count()];
        opinions[..k].fill(1);
        opinions[part.small..part.small + l].fill(1);
        Self::new(graph, opinions)
    }

    pub fn len(&self) -> usize {
        self.opinions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.opinions.is_empty()
    }

    pub fn get(&self, v: usize) -> u8 {
        self.opinions[v]
    }

    pub fn opinions(&self) -> &[u8] {
        &self.opinions
    }

    pub fn ones(&self) -> usize {
        self.ones
    }

    /// Membership in the absorbing set of consensus configurations.
    pub fn is_consensus(&self) -> bool {
        self.ones == 0 || self.ones == self.opinions.len()
    }

    /// `u` takes the opinion of `v`. The edge is not validated.
    pub(crate) fn apply(&mut self, v: usize, u: usize) {
        let new = self.opinions[v];
        let old = std::mem::replace(&mut self.opinions[u], new);
        if old != new {
            if new == 1 {
                self.ones += 1;
            } else {
                self.ones -= 1;
            }
        }
    }
}

/// One update along the directed edge `(v, u)`.
pub fn step(graph: &Graph, config: &OpinionConfig, edge: (usize, usize)) -> Result<OpinionConfig> {
    let (v, u) = edge;
    if config.len() != graph.vertex_count() {
        return Err(Error::invalid("configuration does not match graph"));
    }
    if !graph.has_edge(v, u) {
        return Err(Error::invalid(format!("({v},{u}) is not an edge")));
    }
    let mut next = config.clone();
    next.apply(v, u);
    Ok(next)
}

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Absorption {
    /// Consensus reached after this many steps.
    Absorbed(u64),
    /// Still undecided after the step cap.
    Censored(u64),
}

impl Absorption {
    pub fn time(self) -> Option<u64> {
        match self {
            Absorption::Absorbed(t) => Some(t),
            Absorption::Censored(_) => None,
        }
    }

    pub fn steps(self) -> u64 {
        match self {
            Absorption::Absorbed(t) | Absorption::Censored(t) => t,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub outcome: Absorption,
    /// Sampled edges `(V_t, U_t)`, one per step, when recording was requested.
    pub edge_log: Option<Vec<(usize, usize)>>,
    pub final_config: OpinionConfig,
}

/// Runs the chain from `initial` until consensus or `max_steps` steps.
pub fn run_to_consensus<R: Rng + ?Sized>(
    graph: &Graph,
    rho: &EdgeDistribution,
    initial: &OpinionConfig,
    rng: &mut R,
    record_edges: bool,
    max_steps: u64,
) -> Result<Trajectory> {
    rho.check_graph(graph)?;
    if initial.len() != graph.vertex_count() {
        return Err(Error::invalid("initial configuration does not match graph"));
    }
    let mut config = initial.clone();
    let mut log = record_edges.then(Vec::new);
    let mut t = 0u64;
    while !config.is_consensus() {
        if t == max_steps {
            return Ok(Trajectory {
                outcome: Absorption::Censored(t),
                edge_log: log,
                final_config: config,
            });
        }
        let (v, u) = rho.sample(rng);
        config.apply(v, u);
        if let Some(log) = log.as_mut() {
            log.push((v, u));
        }
        t += 1;
    }
    Ok(Trajectory {
        outcome: Absorption::Absorbed(t),
        edge_log: log,
        final_config: config,
    })
}

/// Survivor counts `#{tau > t}` for `t = 0..=horizon` over a batch of replicas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurvivalTail {
    pub replicas: u64,
    pub survivors: Vec<u64>,
}

impl SurvivalTail {
    /// Builds the tail from absorption times; `None` means "alive at the horizon".
    pub fn from_times<I>(times: I, horizon: u64) -> Self
    where
        I: IntoIterator<Item = Option<u64>>,
    {
        let mut histogram = vec![0u64; horizon as usize + 1];
        let mut replicas = 0u64;
        let mut alive_at_horizon = 0u64;
        for time in times {
            replicas += 1;
            match time {
                Some(t) if t <= horizon => histogram[t as usize] += 1,
                _ => alive_at_horizon += 1,
            }
        }
        Self::from_histogram(replicas, histogram, alive_at_horizon)
    }

    fn from_histogram(replicas: u64, histogram: Vec<u64>, alive_at_horizon: u64) -> Self {
        // survivors[t] = #{tau > t} = alive_at_horizon + #{t < tau <= horizon}
        let mut survivors = vec![0u64; histogram.len()];
        let mut acc = alive_at_horizon;
        for t in (0..histogram.len()).rev() {
            survivors[t] = acc;
            acc += histogram[t];
        }
        SurvivalTail {
            replicas,
            survivors,
        }
    }

    pub fn horizon(&self) -> u64 {
        self.survivors.len() as u64 - 1
    }

    /// Empirical `P(tau > t)`.
    pub fn p_hat(&self) -> Vec<f64> {
        let r = self.replicas as f64;
        self.survivors.iter().map(|&s| s as f64 / r).collect()
    }

    /// Merges two batches over the same horizon.
    pub fn merge(mut self, other: &SurvivalTail) -> Self {
        assert_eq!(self.survivors.len(), other.survivors.len());
        self.replicas += other.replicas;
        for (a, b) in self.survivors.iter_mut().zip(&other.survivors) {
            *a += b;
        }
        self
    }
}

/// Runs `replicas` independent copies until consensus or `horizon`; replica
/// `i` uses the generator seeded with `seed + i`.
pub fn survival_tail(
    graph: &Graph,
    rho: &EdgeDistribution,
    initial: &OpinionConfig,
    horizon: u64,
    replicas: u64,
    seed: u64,
) -> Result<SurvivalTail> {
    if replicas == 0 {
        return Err(Error::invalid("survival_tail needs at least one replica"));
    }
    rho.check_graph(graph)?;
    let times = (0..replicas)
        .into_par_iter()
        .map(|i| {
            let mut rng = replica_rng(seed, i);
            run_to_consensus(graph, rho, initial, &mut rng, false, horizon)
                .map(|traj| traj.outcome.time())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SurvivalTail::from_times(times, horizon))
}
