//! Degree distribution and shortest-path betweenness.
//!
//! [`betweenness`] runs the per-source dependency accumulation of Brandes
//! (BFS for unit weights, Dijkstra otherwise). Sources are processed in fixed
//! blocks whose partial sums are reduced in block order, so the result is
//! bit-identical for any rayon pool size.
//!
//! [`brute_force_betweenness`] is the exhaustive-enumeration oracle used by the
//! test suites; it lives in [`brute_force`] and shares nothing with the fast
//! path except [`Graph`].

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

pub mod brute_force;

pub use brute_force::{
    all_pairs_shortest_path_counts, brute_force_betweenness, ShortestPathCounts, ORACLE_MAX_NODES,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CentralityError {
    #[error("graph has no edges; degree distribution is undefined")]
    EmptyGraph,
    #[error("graph with {node_count} nodes is too large for the brute-force oracle (max {max})")]
    TooLargeForOracle { node_count: usize, max: usize },
}

/// How source/target pairs are counted in the betweenness sum.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairConvention {
    /// Each unordered pair `{s, t}` contributes once.
    #[default]
    Unordered,
    /// `(s, t)` and `(t, s)` both contribute; raw values are doubled.
    Ordered,
}

impl PairConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            PairConvention::Unordered => "unordered",
            PairConvention::Ordered => "ordered",
        }
    }
}

impl fmt::Display for PairConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PairConvention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "unordered" => Ok(PairConvention::Unordered),
            "ordered" => Ok(PairConvention::Ordered),
            other => Err(format!(
                "unknown pair convention `{other}` (expected `unordered` or `ordered`)"
            )),
        }
    }
}

/// Per-node degree share and betweenness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityVector {
    /// Degree share `Degree(i) / Σ Degree`; all zero for an edgeless graph.
    pub p: Vec<f64>,
    /// Raw betweenness under `pair_convention`.
    pub upsilon_raw: Vec<f64>,
    /// Betweenness share `υ(i) / Σ υ`; all zero when `degenerate`.
    pub upsilon_norm: Vec<f64>,
    pub pair_convention: PairConvention,
    /// Set when total betweenness is zero (every pair adjacent or unreachable).
    pub degenerate: bool,
}

impl CentralityVector {
    /// Assembles the vector from raw betweenness, deriving the normalised
    /// share and the degenerate flag.
    pub fn from_raw(p: Vec<f64>, upsilon_raw: Vec<f64>, pair_convention: PairConvention) -> Self {
        let total: f64 = upsilon_raw.iter().sum();
        let degenerate = total <= 0.0;
        let upsilon_norm = if degenerate {
            vec![0.0; upsilon_raw.len()]
        } else {
            upsilon_raw.iter().map(|u| u / total).collect()
        };
        CentralityVector {
            p,
            upsilon_raw,
            upsilon_norm,
            pair_convention,
            degenerate,
        }
    }

    pub fn len(&self) -> usize {
        self.upsilon_raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.upsilon_raw.is_empty()
    }
}

/// `p_i = Degree(i) / Σ_j Degree(j)`.
pub fn degree_distribution(g: &Graph) -> Result<Vec<f64>, CentralityError> {
    if g.edge_count() == 0 {
        return Err(CentralityError::EmptyGraph);
    }
    let total = (2 * g.edge_count()) as f64;
    Ok(g.degrees().into_iter().map(|d| d as f64 / total).collect())
}

/// Shortest-path search used for the forward phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathSearch {
    /// BFS for unit-weight graphs, Dijkstra otherwise.
    Auto,
    Bfs,
    Dijkstra,
}

/// Exact betweenness `υ(i) = Σ_{s≠i≠t} σ_st(i)/σ_st`. Unreachable pairs
/// contribute nothing; edge weights (when present) define path lengths.
pub fn betweenness(g: &Graph, convention: PairConvention) -> CentralityVector {
    betweenness_with(g, convention, PathSearch::Auto)
}

/// [`betweenness`] with an explicit forward search. `PathSearch::Bfs` ignores
/// weights.
pub fn betweenness_with(g: &Graph, convention: PairConvention, search: PathSearch) -> CentralityVector {
    let use_bfs = match search {
        PathSearch::Auto => !g.is_weighted(),
        PathSearch::Bfs => true,
        PathSearch::Dijkstra => false,
    };
    let ordered = accumulate_all_sources(g, use_bfs);
    let raw = match convention {
        PairConvention::Ordered => ordered,
        PairConvention::Unordered => ordered.into_iter().map(|x| x / 2.0).collect(),
    };
    let p = degree_distribution(g).unwrap_or_else(|_| vec![0.0; g.node_count()]);
    CentralityVector::from_raw(p, raw, convention)
}

const SOURCE_BLOCK: usize = 32;

/// Ordered-pair betweenness summed over every source.
fn accumulate_all_sources(g: &Graph, use_bfs: bool) -> Vec<f64> {
    let n = g.node_count();
    let sources: Vec<usize> = (0..n).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_BLOCK)
        .map(|block| {
            let mut ws = Workspace::new(n);
            let mut acc = vec![0.0; n];
            for &s in block {
                ws.single_source(g, s, use_bfs);
                for (a, &d) in acc.iter_mut().zip(&ws.delta) {
                    *a += d;
                }
            }
            acc
        })
        .collect();

    let mut total = vec![0.0; n];
    for part in partials {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    total
}

#[derive(Clone, Copy, PartialEq)]
struct HeapEntry {
    dist: f64,
    node: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance, ties by node id
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Scratch buffers for one source, reused across a block.
struct Workspace {
    dist: Vec<f64>,
    sigma: Vec<f64>,
    delta: Vec<f64>,
    settled: Vec<usize>,
    done: Vec<bool>,
    queue: VecDeque<usize>,
    heap: BinaryHeap<HeapEntry>,
}

impl Workspace {
    fn new(n: usize) -> Self {
        Workspace {
            dist: vec![f64::INFINITY; n],
            sigma: vec![0.0; n],
            delta: vec![0.0; n],
            settled: Vec::with_capacity(n),
            done: vec![false; n],
            queue: VecDeque::new(),
            heap: BinaryHeap::new(),
        }
    }

    /// Leaves in `delta` the dependency of `s` on every node (zero at `s`).
    fn single_source(&mut self, g: &Graph, s: usize, use_bfs: bool) {
        self.dist.fill(f64::INFINITY);
        self.sigma.fill(0.0);
        self.delta.fill(0.0);
        self.settled.clear();
        self.dist[s] = 0.0;
        self.sigma[s] = 1.0;

        if use_bfs {
            self.bfs(g, s);
        } else {
            self.dijkstra(g, s);
        }

        // Pull-form back-propagation: each node sums over its successors in
        // adjacency order, so BFS and Dijkstra produce the same floating-point
        // result whenever they agree on `dist` and `sigma`.
        for &v in self.settled.iter().rev() {
            let dv = self.dist[v];
            let sv = self.sigma[v];
            let mut dep = 0.0;
            for &(w, weight) in g.neighbors(v) {
                let step = if use_bfs { 1.0 } else { weight };
                if dv + step == self.dist[w] {
                    dep += sv / self.sigma[w] * (1.0 + self.delta[w]);
                }
            }
            self.delta[v] = dep;
        }
        self.delta[s] = 0.0;
    }

    fn bfs(&mut self, g: &Graph, s: usize) {
        self.queue.clear();
        self.queue.push_back(s);
        while let Some(v) = self.queue.pop_front() {
            self.settled.push(v);
            let next = self.dist[v] + 1.0;
            for &(w, _) in g.neighbors(v) {
                if self.dist[w].is_infinite() {
                    self.dist[w] = next;
                    self.queue.push_back(w);
                }
                if self.dist[w] == next {
                    self.sigma[w] += self.sigma[v];
                }
            }
        }
    }

    fn dijkstra(&mut self, g: &Graph, s: usize) {
        self.done.fill(false);
        self.heap.clear();
        self.heap.push(HeapEntry { dist: 0.0, node: s });
        while let Some(HeapEntry { dist, node: v }) = self.heap.pop() {
            if self.done[v] || dist > self.dist[v] {
                continue;
            }
            self.done[v] = true;
            self.settled.push(v);
            for &(w, weight) in g.neighbors(v) {
                if self.done[w] {
                    continue;
                }
                let cand = dist + weight;
                if cand < self.dist[w] {
                    self.dist[w] = cand;
                    self.sigma[w] = self.sigma[v];
                    self.heap.push(HeapEntry { dist: cand, node: w });
                } else if cand == self.dist[w] {
                    self.sigma[w] += self.sigma[v];
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::build(3, [(0, 1), (1, 2)]).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
            .collect();
        Graph::build(n, edges).unwrap()
    }

    #[test]
    fn degree_distribution_examples() {
        let p = degree_distribution(&complete(6)).unwrap();
        for x in p {
            assert!((x - 1.0 / 6.0).abs() < 1e-15);
        }
        assert_eq!(degree_distribution(&path3()).unwrap(), vec![0.25, 0.5, 0.25]);
        let edgeless = Graph::build(3, Vec::<(usize, usize)>::new()).unwrap();
        assert_eq!(
            degree_distribution(&edgeless).unwrap_err(),
            CentralityError::EmptyGraph
        );
    }

    #[test]
    fn path_betweenness() {
        let cv = betweenness(&path3(), PairConvention::Unordered);
        assert_eq!(cv.upsilon_raw, vec![0.0, 1.0, 0.0]);
        assert_eq!(cv.upsilon_norm, vec![0.0, 1.0, 0.0]);
        assert!(!cv.degenerate);
        let cv = betweenness(&path3(), PairConvention::Ordered);
        assert_eq!(cv.upsilon_raw, vec![0.0, 2.0, 0.0]);
    }

    #[test]
    fn complete_graph_is_degenerate() {
        let cv = betweenness(&complete(6), PairConvention::Unordered);
        assert!(cv.upsilon_raw.iter().all(|&x| x == 0.0));
        assert!(cv.upsilon_norm.iter().all(|&x| x == 0.0));
        assert!(cv.degenerate);
    }

    #[test]
    fn star_center() {
        let g = Graph::build(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let cv = betweenness(&g, PairConvention::Unordered);
        assert_eq!(cv.upsilon_raw, vec![3.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn cycle_four_splits_paths() {
        let g = Graph::build(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let cv = betweenness(&g, PairConvention::Unordered);
        assert_eq!(cv.upsilon_raw, vec![0.5; 4]);
    }

    #[test]
    fn weights_reroute_paths() {
        // Direct 0-2 edge is longer than going through 1.
        let g = Graph::build(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 3.0)]).unwrap();
        let cv = betweenness(&g, PairConvention::Unordered);
        assert_eq!(cv.upsilon_raw, vec![0.0, 1.0, 0.0]);
        // Tie between direct edge and two-hop route.
        let g = Graph::build(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 2.0)]).unwrap();
        let cv = betweenness(&g, PairConvention::Unordered);
        assert_eq!(cv.upsilon_raw, vec![0.0, 0.5, 0.0]);
    }

    #[test]
    fn disconnected_pairs_contribute_nothing() {
        let g = Graph::build(6, [(0, 1), (1, 2), (3, 4)]).unwrap();
        let cv = betweenness(&g, PairConvention::Unordered);
        assert_eq!(cv.upsilon_raw, vec![0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(cv.p[5], 0.0);
    }

    #[test]
    fn edgeless_graph_has_zero_vectors() {
        let g = Graph::build(3, Vec::<(usize, usize)>::new()).unwrap();
        let cv = betweenness(&g, PairConvention::Unordered);
        assert!(cv.degenerate);
        assert_eq!(cv.p, vec![0.0; 3]);
    }

    #[test]
    fn unit_weights_bfs_and_dijkstra_agree_exactly() {
        let g = Graph::build(
            7,
            [(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (4, 5), (5, 6), (6, 2), (1, 5)],
        )
        .unwrap();
        let a = betweenness_with(&g, PairConvention::Unordered, PathSearch::Bfs);
        let b = betweenness_with(&g, PairConvention::Unordered, PathSearch::Dijkstra);
        assert_eq!(a, b);
    }

    #[test]
    fn parse_convention() {
        assert_eq!("ordered".parse::<PairConvention>(), Ok(PairConvention::Ordered));
        assert_eq!(" Unordered ".parse::<PairConvention>(), Ok(PairConvention::Unordered));
        assert!("both".parse::<PairConvention>().is_err());
    }
}
