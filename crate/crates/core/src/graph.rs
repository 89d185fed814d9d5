//! Undirected simple graph with optional positive edge weights.
//!
//! A [`Graph`] is validated once at construction and never mutated afterwards,
//! so it can be shared read-only across threads. Node ids are dense indices in
//! `0..node_count`; adjacency lists are sorted by neighbor id.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a node inside the graph that owns it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for NodeId {
    fn from(i: usize) -> Self {
        NodeId(i)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge ({0}, {1}) has non-positive weight {2}")]
    NonPositiveWeight(usize, usize, f64),
    #[error("node {node} out of range for graph with {node_count} nodes")]
    NodeOutOfRange { node: usize, node_count: usize },
}

/// Input edge for [`Graph::build`]; `w` defaults to 1.0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeSpec {
    pub u: usize,
    pub v: usize,
    pub w: Option<f64>,
}

impl From<(usize, usize)> for EdgeSpec {
    fn from((u, v): (usize, usize)) -> Self {
        EdgeSpec { u, v, w: None }
    }
}

impl From<(usize, usize, f64)> for EdgeSpec {
    fn from((u, v, w): (usize, usize, f64)) -> Self {
        EdgeSpec { u, v, w: Some(w) }
    }
}

/// Stored edge with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    node_count: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(usize, f64)>>,
    weighted: bool,
}

impl Graph {
    /// Validates `edges` and builds the graph. Edges are canonicalised to
    /// `u < v` and stored sorted, so any permutation of the input (or of the
    /// endpoints within an edge) yields an identical graph.
    pub fn build<I, E>(node_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = E>,
        E: Into<EdgeSpec>,
    {
        let mut stored = Vec::new();
        let mut seen = HashSet::new();
        for spec in edges {
            let EdgeSpec { u, v, w } = spec.into();
            for node in [u, v] {
                if node >= node_count {
                    return Err(GraphError::NodeOutOfRange { node, node_count });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let w = w.unwrap_or(1.0);
            // NaN fails this too.
            if !(w > 0.0 && w.is_finite()) {
                return Err(GraphError::NonPositiveWeight(u, v, w));
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            if !seen.insert((a, b)) {
                return Err(GraphError::DuplicateEdge(a, b));
            }
            stored.push(Edge { u: a, v: b, w });
        }
        stored.sort_by_key(|e| (e.u, e.v));

        let mut adjacency = vec![Vec::new(); node_count];
        for e in &stored {
            adjacency[e.u].push((e.v, e.w));
            adjacency[e.v].push((e.u, e.w));
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(n, _)| n);
        }
        let weighted = stored.iter().any(|e| e.w != 1.0);

        Ok(Graph {
            node_count,
            edges: stored,
            adjacency,
            weighted,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical order, each with `u < v`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// True if any edge weight differs from 1.0.
    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    /// Neighbors of `i` with edge weights, sorted by neighbor id.
    ///
    /// Panics if `i` is out of range; use [`Graph::degree`] for a checked query.
    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.adjacency[i]
    }

    /// Number of incident edges. Weights are ignored.
    pub fn degree(&self, i: NodeId) -> Result<usize, GraphError> {
        self.adjacency
            .get(i.0)
            .map(Vec::len)
            .ok_or(GraphError::NodeOutOfRange {
                node: i.0,
                node_count: self.node_count,
            })
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.node_count
            && self.adjacency[u]
                .binary_search_by_key(&v, |&(n, _)| n)
                .is_ok()
    }

    /// True iff a single connected component spans every node. The graph with
    /// zero nodes is treated as connected.
    pub fn is_connected(&self) -> bool {
        if self.node_count <= 1 {
            return true;
        }
        let mut seen = vec![false; self.node_count];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached == self.node_count
    }

    /// Graph with node `i` renamed to `perm[i]`. `perm` must be a permutation
    /// of `0..node_count`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph, GraphError> {
        Graph::build(
            self.node_count,
            self.edges.iter().map(|e| EdgeSpec {
                u: perm[e.u],
                v: perm[e.v],
                w: Some(e.w),
            }),
        )
    }

    /// Same topology with every weight multiplied by `factor`.
    pub fn scale_weights(&self, factor: f64) -> Result<Graph, GraphError> {
        Graph::build(
            self.node_count,
            self.edges.iter().map(|e| (e.u, e.v, e.w * factor)),
        )
    }

    /// Same topology with every weight reset to 1.0.
    pub fn unweighted(&self) -> Graph {
        Graph::build(self.node_count, self.edges.iter().map(|e| (e.u, e.v)))
            .expect("topology already validated")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k6() -> Graph {
        let edges: Vec<(usize, usize)> = (0..6)
            .flat_map(|u| ((u + 1)..6).map(move |v| (u, v)))
            .collect();
        Graph::build(6, edges).unwrap()
    }

    #[test]
    fn path_graph_degrees() {
        let g = Graph::build(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.degrees(), vec![1, 2, 1]);
        assert_eq!(g.degree(NodeId(1)).unwrap(), 2);
        assert!(!g.is_weighted());
    }

    #[test]
    fn complete_graph_degrees() {
        let g = k6();
        assert_eq!(g.edge_count(), 15);
        for i in 0..6 {
            assert_eq!(g.degree(NodeId(i)).unwrap(), 5);
        }
    }

    #[test]
    fn star_center_degree() {
        let g = Graph::build(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(g.degree(NodeId(0)).unwrap(), 3);
    }

    #[test]
    fn rejects_invalid_edges() {
        assert_eq!(
            Graph::build(2, [(0, 0)]).unwrap_err(),
            GraphError::SelfLoop(0)
        );
        assert_eq!(
            Graph::build(3, [(0, 1), (1, 0)]).unwrap_err(),
            GraphError::DuplicateEdge(0, 1)
        );
        assert!(matches!(
            Graph::build(3, [(0, 1, 0.0)]).unwrap_err(),
            GraphError::NonPositiveWeight(0, 1, _)
        ));
        assert!(matches!(
            Graph::build(3, [(0, 1, f64::NAN)]).unwrap_err(),
            GraphError::NonPositiveWeight(..)
        ));
        assert_eq!(
            Graph::build(3, [(0, 3)]).unwrap_err(),
            GraphError::NodeOutOfRange {
                node: 3,
                node_count: 3
            }
        );
    }

    #[test]
    fn degree_out_of_range() {
        let g = k6();
        assert!(matches!(
            g.degree(NodeId(6)),
            Err(GraphError::NodeOutOfRange { node: 6, .. })
        ));
    }

    #[test]
    fn connectivity() {
        assert!(k6().is_connected());
        let two_edges = Graph::build(4, [(0, 1), (2, 3)]).unwrap();
        assert!(!two_edges.is_connected());
        let single = Graph::build(1, Vec::<(usize, usize)>::new()).unwrap();
        assert!(single.is_connected());
        let isolated = Graph::build(3, [(0, 1)]).unwrap();
        assert!(!isolated.is_connected());
    }

    #[test]
    fn adjacency_is_sorted() {
        let g = Graph::build(5, [(4, 0), (2, 0), (0, 3), (1, 0)]).unwrap();
        let ids: Vec<usize> = g.neighbors(0).iter().map(|&(n, _)| n).collect();
        assert_eq!(ids, vec![1, 2, 3, 4]);
    }

    #[test]
    fn weights_do_not_change_degree() {
        let g = Graph::build(3, [(0, 1, 2.5), (1, 2, 0.1)]).unwrap();
        assert_eq!(g.degrees(), vec![1, 2, 1]);
        assert!(g.is_weighted());
        assert!(g.has_edge(1, 0));
        assert!(!g.has_edge(0, 2));
    }
}
