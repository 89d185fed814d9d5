//! Reference topologies and the iterated hub-growth procedure.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::centrality::PairConvention;
use crate::entropy::{full_report, Conventions, EntropyError, EntropyReport, UpsilonSource};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("ring lattice needs n > 2k >= 2, got n={n}, k={k}")]
    InvalidRingParams { n: usize, k: usize },
    #[error("dumbbell needs an even node count of at least 6, got {0}")]
    InvalidSize(usize),
    #[error("invalid growth config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
}

/// Every pair adjacent, unit weights.
pub fn complete_graph(n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .collect();
    Graph::build(n, edges).expect("complete graph is simple")
}

/// Each node joined to its `k` nearest neighbours on either side.
pub fn ring_lattice(n: usize, k: usize) -> Result<Graph, GeneratorError> {
    if k == 0 || n <= 2 * k {
        return Err(GeneratorError::InvalidRingParams { n, k });
    }
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (1..=k).map(move |j| (i, (i + j) % n)))
        .collect();
    Ok(Graph::build(n, edges).expect("ring lattice is simple when n > 2k"))
}

/// Two complete halves of `n / 2` nodes joined by one bridge edge
/// `(n/2 − 1, n/2)`.
pub fn dumbbell(n: usize) -> Result<Graph, GeneratorError> {
    if n < 6 || !n.is_multiple_of(2) {
        return Err(GeneratorError::InvalidSize(n));
    }
    let half = n / 2;
    let mut edges = Vec::new();
    for offset in [0, half] {
        for u in 0..half {
            for v in (u + 1)..half {
                edges.push((offset + u, offset + v));
            }
        }
    }
    edges.push((half - 1, half));
    Ok(Graph::build(n, edges).expect("dumbbell is simple"))
}

pub fn path_graph(n: usize) -> Graph {
    Graph::build(n, (1..n).map(|i| (i - 1, i))).expect("path is simple")
}

/// Cycle on `n ≥ 3` nodes.
pub fn cycle_graph(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 nodes");
    Graph::build(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle is simple")
}

/// Star with centre 0 and `n − 1` leaves.
pub fn star_graph(n: usize) -> Graph {
    Graph::build(n, (1..n).map(|i| (0, i))).expect("star is simple")
}

/// Circulant graph: `i ~ i ± j (mod n)` for every `j` in `jumps`.
/// Vertex-transitive for any jump set.
pub fn circulant(n: usize, jumps: &[usize]) -> Graph {
    let mut edges = BTreeSet::new();
    for i in 0..n {
        for &j in jumps {
            let j = j % n;
            if j == 0 {
                continue;
            }
            let v = (i + j) % n;
            edges.insert((i.min(v), i.max(v)));
        }
    }
    Graph::build(n, edges).expect("circulant edges are deduplicated")
}

/// Knobs of the hub-growth procedure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GrowthConfig {
    pub seed_nodes: usize,
    /// Ring coupling width of the starting lattice.
    pub neighbor_k: usize,
    pub iterations: usize,
    /// Per-node chance of gaining one edge to a random non-neighbour.
    pub random_link_prob: f64,
    /// Fraction of nodes, by descending degree, forming the central set.
    pub central_fraction: f64,
    /// Overall attachment probability; split across central nodes in
    /// proportion to their degree.
    pub attach_prob_scale: f64,
    pub rng_seed: u64,
}

impl Default for GrowthConfig {
    fn default() -> Self {
        GrowthConfig {
            seed_nodes: 100,
            neighbor_k: 2,
            iterations: 10,
            random_link_prob: 0.05,
            central_fraction: 0.05,
            attach_prob_scale: 0.1,
            rng_seed: 0,
        }
    }
}

impl GrowthConfig {
    pub fn validate(&self) -> Result<(), GeneratorError> {
        let bad = |msg: String| Err(GeneratorError::InvalidConfig(msg));
        if self.seed_nodes < 3 {
            return bad(format!("seed_nodes must be >= 3, got {}", self.seed_nodes));
        }
        if self.neighbor_k == 0 || self.seed_nodes <= 2 * self.neighbor_k {
            return bad(format!(
                "neighbor_k must satisfy seed_nodes > 2k >= 2, got k={} with {} nodes",
                self.neighbor_k, self.seed_nodes
            ));
        }
        if !(0.0..=1.0).contains(&self.random_link_prob) {
            return bad(format!(
                "random_link_prob must lie in [0, 1], got {}",
                self.random_link_prob
            ));
        }
        if !(self.central_fraction > 0.0 && self.central_fraction <= 1.0) {
            return bad(format!(
                "central_fraction must lie in (0, 1], got {}",
                self.central_fraction
            ));
        }
        if !(self.attach_prob_scale > 0.0 && self.attach_prob_scale <= 1.0) {
            return bad(format!(
                "attach_prob_scale must lie in (0, 1], got {}",
                self.attach_prob_scale
            ));
        }
        Ok(())
    }

    fn central_count(&self) -> usize {
        ((self.central_fraction * self.seed_nodes as f64).ceil() as usize).clamp(1, self.seed_nodes)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthSnapshot {
    pub iteration: usize,
    pub node_count: usize,
    pub edge_count: usize,
    pub e_t: f64,
}

/// Snapshots for iteration 0 (the bare lattice) through `iterations`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GrowthTrace {
    pub snapshots: Vec<GrowthSnapshot>,
}

impl GrowthTrace {
    pub fn e_t_at(&self, iteration: usize) -> Option<f64> {
        self.snapshots
            .iter()
            .find(|s| s.iteration == iteration)
            .map(|s| s.e_t)
    }
}

/// Mutable adjacency used only while growing.
struct GrowingGraph {
    adj: Vec<BTreeSet<usize>>,
}

impl GrowingGraph {
    fn from_graph(g: &Graph) -> Self {
        let adj = (0..g.node_count())
            .map(|i| g.neighbors(i).iter().map(|&(v, _)| v).collect())
            .collect();
        GrowingGraph { adj }
    }

    /// Skips self-links and existing edges.
    fn add_edge(&mut self, u: usize, v: usize) {
        if u != v && self.adj[u].insert(v) {
            self.adj[v].insert(u);
        }
    }

    fn freeze(&self) -> Graph {
        let edges = self
            .adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.range((u + 1)..).map(move |&v| (u, v)));
        Graph::build(self.adj.len(), edges).expect("growth keeps the graph simple")
    }
}

/// Conventions used for growth traces unless the caller overrides them.
///
/// Exponents come from the betweenness share: with raw counts every grown
/// graph has a single dominant node and `E_T` is pinned near zero from the
/// first round on, which hides the trend the trace is meant to show.
pub fn growth_conventions() -> Conventions {
    Conventions::new(PairConvention::Unordered, UpsilonSource::Normalized)
}

/// Runs the growth procedure under [`growth_conventions`].
pub fn grow_scale_free(cfg: &GrowthConfig) -> Result<(Graph, GrowthTrace), GeneratorError> {
    grow_scale_free_observed(cfg, &growth_conventions(), |_, _, _| {})
}

/// Grows a hub-dominated network from a ring lattice by repeated rounds of
/// random linking and degree-proportional attachment to a central set.
///
/// Each round, in node order:
/// 1. every node, with probability `random_link_prob`, links to a uniformly
///    chosen non-neighbour;
/// 2. the central set is recomputed as the top `⌈central_fraction · n⌉` nodes
///    by degree (ties to lower id), then every node draws once and attaches to
///    central `c` with probability `attach_prob_scale · deg(c) / Σ deg`.
///
/// Self-links and existing edges are skipped. All draws come from one
/// ChaCha8 stream seeded by `rng_seed`. `observe` sees every snapshot,
/// including iteration 0, together with its entropy report.
pub fn grow_scale_free_observed<F>(
    cfg: &GrowthConfig,
    conventions: &Conventions,
    mut observe: F,
) -> Result<(Graph, GrowthTrace), GeneratorError>
where
    F: FnMut(usize, &Graph, &EntropyReport),
{
    cfg.validate()?;
    let n = cfg.seed_nodes;
    let seed = ring_lattice(n, cfg.neighbor_k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut trace = GrowthTrace::default();

    let mut record = |iteration: usize, g: &Graph| -> Result<(), GeneratorError> {
        let report = full_report(g, conventions)?;
        trace.snapshots.push(GrowthSnapshot {
            iteration,
            node_count: g.node_count(),
            edge_count: g.edge_count(),
            e_t: report.e_t,
        });
        observe(iteration, g, &report);
        Ok(())
    };
    record(0, &seed)?;

    let mut state = GrowingGraph::from_graph(&seed);
    let mut current = seed;
    let central_count = cfg.central_count();

    for iteration in 1..=cfg.iterations {
        for u in 0..n {
            if rng.gen::<f64>() < cfg.random_link_prob {
                let candidates: Vec<usize> =
                    (0..n).filter(|&v| v != u && !state.adj[u].contains(&v)).collect();
                if !candidates.is_empty() {
                    let v = candidates[rng.gen_range(0..candidates.len())];
                    state.add_edge(u, v);
                }
            }
        }

        let mut by_degree: Vec<usize> = (0..n).collect();
        by_degree.sort_by(|&a, &b| state.adj[b].len().cmp(&state.adj[a].len()).then(a.cmp(&b)));
        let centrals: Vec<(usize, f64)> = by_degree[..central_count]
            .iter()
            .map(|&c| (c, state.adj[c].len() as f64))
            .collect();
        let central_degree: f64 = centrals.iter().map(|&(_, d)| d).sum();

        for u in 0..n {
            let draw = rng.gen::<f64>();
            let mut cumulative = 0.0;
            for &(c, d) in &centrals {
                cumulative += cfg.attach_prob_scale * d / central_degree;
                if draw < cumulative {
                    state.add_edge(u, c);
                    break;
                }
            }
        }

        current = state.freeze();
        record(iteration, &current)?;
    }

    Ok((current, trace))
}
