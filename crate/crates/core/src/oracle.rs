//! Brute-force cross-checking for the test suites.
//!
//! The oracle recomputes every entropy by direct summation on top of
//! [`brute_force_betweenness`]. Apart from [`Graph`] it uses none of the
//! production shortest-path or entropy helpers, so agreement between the two
//! routes is evidence rather than a tautology.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::centrality::{brute_force_betweenness, PairConvention};
use crate::entropy::{full_report, Conventions, EntropyReport, GraphMeta, LogBase, UpsilonSource};
use crate::graph::Graph;

/// Largest node count [`enumerate_small_graphs`] accepts.
pub const SMALL_GRAPH_MAX_NODES: usize = 8;

/// A graph with the entropies it is expected to produce.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleCase {
    pub graph: Graph,
    pub expected: EntropyReport,
    pub tolerance: f64,
}

impl OracleCase {
    /// Expected values are `(e_deg, e_bet, e_t)` under `conventions`.
    pub fn new(graph: Graph, conventions: Conventions, expected: (f64, f64, f64), tolerance: f64) -> Self {
        let meta = GraphMeta {
            nodes: graph.node_count(),
            edges: graph.edge_count(),
        };
        OracleCase {
            graph,
            expected: EntropyReport {
                e_deg: expected.0,
                e_bet: expected.1,
                e_t: expected.2,
                log_base: LogBase::Natural,
                conventions,
                graph: meta,
            },
            tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct FieldDeltas {
    pub e_deg: f64,
    pub e_bet: f64,
    pub e_t: f64,
}

impl FieldDeltas {
    fn between(a: &EntropyReport, b: &EntropyReport) -> Self {
        FieldDeltas {
            e_deg: (a.e_deg - b.e_deg).abs(),
            e_bet: (a.e_bet - b.e_bet).abs(),
            e_t: (a.e_t - b.e_t).abs(),
        }
    }

    pub fn max(&self) -> f64 {
        self.e_deg.max(self.e_bet).max(self.e_t)
    }
}

/// Outcome of [`cross_check`]; failures are data, not errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub passed: bool,
    pub nodes: usize,
    pub edges: usize,
    pub tolerance: f64,
    /// Fast path against the case's expected values.
    pub vs_expected: FieldDeltas,
    /// Fast path against the oracle recomputation.
    pub vs_oracle: FieldDeltas,
    pub max_delta: f64,
    pub error: Option<String>,
}

impl CrossCheck {
    /// One JSON record for a case-result log.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("plain data serialises")
    }
}

fn shannon_direct(w: &[f64]) -> f64 {
    let mut s = 0.0;
    for &x in w {
        if x > 0.0 {
            s -= x * x.ln();
        }
    }
    s
}

/// Entropies recomputed by direct summation over brute-force betweenness.
/// Only for graphs within the oracle's node limit.
pub fn oracle_report(g: &Graph, conventions: &Conventions) -> Result<EntropyReport, String> {
    if g.edge_count() == 0 {
        return Err("graph has no edges".into());
    }
    let cv = brute_force_betweenness(g, conventions.pair_convention).map_err(|e| e.to_string())?;
    let n = g.node_count();

    let e_deg = shannon_direct(&cv.p);

    let total_bet: f64 = cv.upsilon_raw.iter().sum();
    let p_bet: Vec<f64> = if total_bet > 0.0 {
        cv.upsilon_raw.iter().map(|u| u / total_bet).collect()
    } else {
        vec![1.0 / n as f64; n]
    };
    let e_bet = shannon_direct(&p_bet);

    let source: Vec<f64> = match conventions.upsilon_source {
        UpsilonSource::Raw => cv.upsilon_raw.clone(),
        UpsilonSource::Normalized if total_bet > 0.0 => p_bet.clone(),
        UpsilonSource::Normalized => vec![0.0; n],
    };
    let max = source.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let powered: Vec<f64> = cv
        .p
        .iter()
        .zip(&source)
        .map(|(&p, &u)| p.powf(1.0 + (max - u)))
        .collect();
    let z: f64 = powered.iter().sum();
    if z.is_nan() || z <= 0.0 {
        return Err(format!("normaliser underflowed to {z}"));
    }
    let h: Vec<f64> = powered.iter().map(|x| x / z).collect();
    let e_t = shannon_direct(&h);

    Ok(EntropyReport {
        e_deg,
        e_bet,
        e_t,
        log_base: LogBase::Natural,
        conventions: *conventions,
        graph: GraphMeta {
            nodes: n,
            edges: g.edge_count(),
        },
    })
}

/// Compares the fast `full_report` with both the case's expected values and
/// the oracle recomputation.
pub fn cross_check(case: &OracleCase) -> CrossCheck {
    let conventions = case.expected.conventions;
    let mut result = CrossCheck {
        passed: false,
        nodes: case.graph.node_count(),
        edges: case.graph.edge_count(),
        tolerance: case.tolerance,
        vs_expected: FieldDeltas::default(),
        vs_oracle: FieldDeltas::default(),
        max_delta: f64::NAN,
        error: None,
    };
    let fast = match full_report(&case.graph, &conventions) {
        Ok(r) => r,
        Err(e) => {
            result.error = Some(format!("fast path: {e}"));
            return result;
        }
    };
    let oracle = match oracle_report(&case.graph, &conventions) {
        Ok(r) => r,
        Err(e) => {
            result.error = Some(format!("oracle: {e}"));
            return result;
        }
    };
    result.vs_expected = FieldDeltas::between(&fast, &case.expected);
    result.vs_oracle = FieldDeltas::between(&fast, &oracle);
    result.max_delta = result.vs_expected.max().max(result.vs_oracle.max());
    result.passed = result.max_delta <= case.tolerance;
    result
}

/// Largest per-node difference between fast and brute-force betweenness.
pub fn betweenness_delta(g: &Graph, convention: PairConvention) -> Result<f64, String> {
    let fast = crate::centrality::betweenness(g, convention);
    let slow = brute_force_betweenness(g, convention).map_err(|e| e.to_string())?;
    Ok(fast
        .upsilon_raw
        .iter()
        .zip(&slow.upsilon_raw)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// Random connected graphs on `n` nodes: every pair is an edge with
/// probability 1/2, and disconnected draws are rejected. Deterministic per
/// seed.
pub fn enumerate_small_graphs(n: usize, sample: usize, rng_seed: u64) -> impl Iterator<Item = Graph> {
    SmallGraphs::new(n, sample, rng_seed, None)
}

/// As [`enumerate_small_graphs`], with integer weights drawn uniformly from
/// `1..=max_weight`. Integer weights keep path-length sums exact, so ties are
/// unambiguous for both the fast path and the oracle.
pub fn enumerate_small_weighted_graphs(
    n: usize,
    sample: usize,
    rng_seed: u64,
    max_weight: u32,
) -> impl Iterator<Item = Graph> {
    SmallGraphs::new(n, sample, rng_seed, Some(max_weight.max(1)))
}

struct SmallGraphs {
    n: usize,
    remaining: usize,
    rng: ChaCha8Rng,
    max_weight: Option<u32>,
}

impl SmallGraphs {
    fn new(n: usize, sample: usize, rng_seed: u64, max_weight: Option<u32>) -> Self {
        assert!(
            (1..=SMALL_GRAPH_MAX_NODES).contains(&n),
            "small graphs have 1..={SMALL_GRAPH_MAX_NODES} nodes, got {n}"
        );
        SmallGraphs {
            n,
            remaining: sample,
            rng: ChaCha8Rng::seed_from_u64(rng_seed),
            max_weight,
        }
    }
}

impl Iterator for SmallGraphs {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let n = self.n;
        loop {
            let mut edges = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if self.rng.gen::<bool>() {
                        let w = match self.max_weight {
                            Some(m) => self.rng.gen_range(1..=m) as f64,
                            None => 1.0,
                        };
                        edges.push((u, v, w));
                    }
                }
            }
            let g = Graph::build(n, edges).expect("pairs are distinct");
            if g.is_connected() {
                return Some(g);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_graph, path_graph};

    #[test]
    fn three_node_graphs_are_path_or_triangle() {
        let graphs: Vec<Graph> = enumerate_small_graphs(3, 10, 1).collect();
        assert_eq!(graphs.len(), 10);
        for g in graphs {
            assert!(g.is_connected());
            assert!(g.edge_count() == 2 || g.edge_count() == 3);
        }
    }

    #[test]
    fn single_node_repeats() {
        let graphs: Vec<Graph> = enumerate_small_graphs(1, 3, 0).collect();
        assert_eq!(graphs.len(), 3);
        assert!(graphs.iter().all(|g| g.node_count() == 1 && g.edge_count() == 0));
    }

    #[test]
    fn stream_is_deterministic() {
        let a: Vec<Graph> = enumerate_small_graphs(6, 20, 42).collect();
        let b: Vec<Graph> = enumerate_small_graphs(6, 20, 42).collect();
        assert_eq!(a, b);
        let w: Vec<Graph> = enumerate_small_weighted_graphs(5, 20, 42, 4).collect();
        assert!(w.iter().flat_map(|g| g.edges()).all(|e| (1.0..=4.0).contains(&e.w) && e.w.fract() == 0.0));
    }

    #[test]
    fn complete_case_passes_with_zero_delta() {
        let ln6 = 6f64.ln();
        let case = OracleCase::new(complete_graph(6), Conventions::default(), (ln6, ln6, ln6), 1e-9);
        let r = cross_check(&case);
        assert!(r.passed, "{r:?}");
        assert!(r.max_delta < 1e-15);
    }

    #[test]
    fn path_case_matches_hand_values() {
        let case = OracleCase::new(path_graph(3), Conventions::default(), (1.0397, 0.0, 0.6390), 1e-3);
        let r = cross_check(&case);
        assert!(r.passed, "{r:?}");
        assert!(r.vs_oracle.max() < 1e-12);
    }

    #[test]
    fn corrupted_expectation_fails() {
        let case = OracleCase::new(path_graph(3), Conventions::default(), (1.0397, 0.0, 0.7390), 1e-3);
        let r = cross_check(&case);
        assert!(!r.passed);
        assert!((r.vs_expected.e_t - 0.1).abs() < 1e-3);
        assert!(r.to_json_line().contains("\"passed\":false"));
    }

    #[test]
    fn edgeless_case_reports_error() {
        let g = Graph::build(2, Vec::<(usize, usize)>::new()).unwrap();
        let r = cross_check(&OracleCase::new(g, Conventions::default(), (0.0, 0.0, 0.0), 1.0));
        assert!(!r.passed);
        assert!(r.error.is_some());
    }
}
