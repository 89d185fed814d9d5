//! Exhaustive shortest-path enumeration.
//!
//! Distances come from Floyd–Warshall; every shortest `s`–`t` path is then
//! listed explicitly by depth-first search and each interior node is counted.
//! Exponential in the worst case, hence the node-count guard.

use super::{CentralityError, CentralityVector, PairConvention};
use crate::graph::Graph;

pub const ORACLE_MAX_NODES: usize = 12;

/// All-pairs distances and shortest-path counts.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortestPathCounts {
    /// `sigma[s][t]`: number of distinct shortest paths; `sigma[s][s] = 1`,
    /// zero for unreachable pairs.
    pub sigma: Vec<Vec<u64>>,
    /// `dist[s][t]`: weighted distance, infinite when unreachable.
    pub dist: Vec<Vec<f64>>,
    /// `through[s][t][v]`: shortest `s`–`t` paths with `v` as an interior node.
    pub through: Vec<Vec<Vec<u64>>>,
}

fn weight_matrix(g: &Graph) -> Vec<Vec<Option<f64>>> {
    let n = g.node_count();
    let mut w = vec![vec![None; n]; n];
    for e in g.edges() {
        w[e.u][e.v] = Some(e.w);
        w[e.v][e.u] = Some(e.w);
    }
    w
}

fn floyd_warshall(w: &[Vec<Option<f64>>]) -> Vec<Vec<f64>> {
    let n = w.len();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for i in 0..n {
        d[i][i] = 0.0;
        for j in 0..n {
            if let Some(x) = w[i][j] {
                d[i][j] = x;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Enumerates shortest paths for every ordered pair.
pub fn all_pairs_shortest_path_counts(g: &Graph) -> Result<ShortestPathCounts, CentralityError> {
    let n = g.node_count();
    if n > ORACLE_MAX_NODES {
        return Err(CentralityError::TooLargeForOracle {
            node_count: n,
            max: ORACLE_MAX_NODES,
        });
    }
    let w = weight_matrix(g);
    let dist = floyd_warshall(&w);
    let mut sigma = vec![vec![0u64; n]; n];
    let mut through = vec![vec![vec![0u64; n]; n]; n];

    for s in 0..n {
        for t in 0..n {
            if s == t {
                sigma[s][t] = 1;
                continue;
            }
            if dist[s][t].is_infinite() {
                continue;
            }
            let mut path = vec![s];
            enumerate(&w, &dist, s, t, &mut path, &mut |p: &[usize]| {
                sigma[s][t] += 1;
                for &v in &p[1..p.len() - 1] {
                    through[s][t][v] += 1;
                }
            });
        }
    }
    Ok(ShortestPathCounts {
        sigma,
        dist,
        through,
    })
}

fn enumerate(
    w: &[Vec<Option<f64>>],
    dist: &[Vec<f64>],
    s: usize,
    t: usize,
    path: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    let u = *path.last().expect("path starts at the source");
    if u == t {
        visit(path);
        return;
    }
    for x in 0..w.len() {
        let Some(wx) = w[u][x] else { continue };
        // x must extend a shortest prefix from s and still lie on a shortest
        // route to t.
        if dist[s][u] + wx == dist[s][x] && dist[s][x] + dist[x][t] == dist[s][t] {
            path.push(x);
            enumerate(w, dist, s, t, path, visit);
            path.pop();
        }
    }
}

/// Betweenness by explicit path enumeration. Unordered sums over `s < t`,
/// ordered over all `s ≠ t`.
pub fn brute_force_betweenness(
    g: &Graph,
    convention: PairConvention,
) -> Result<CentralityVector, CentralityError> {
    let counts = all_pairs_shortest_path_counts(g)?;
    let n = g.node_count();
    let mut upsilon = vec![0.0; n];
    for s in 0..n {
        for t in 0..n {
            let counted = match convention {
                PairConvention::Unordered => s < t,
                PairConvention::Ordered => s != t,
            };
            if !counted || counts.sigma[s][t] == 0 {
                continue;
            }
            let total = counts.sigma[s][t] as f64;
            for (v, acc) in upsilon.iter_mut().enumerate() {
                if v != s && v != t {
                    *acc += counts.through[s][t][v] as f64 / total;
                }
            }
        }
    }

    let mut degree = vec![0usize; n];
    for e in g.edges() {
        degree[e.u] += 1;
        degree[e.v] += 1;
    }
    let stubs: usize = degree.iter().sum();
    let p = if stubs == 0 {
        vec![0.0; n]
    } else {
        degree.iter().map(|&d| d as f64 / stubs as f64).collect()
    };
    Ok(CentralityVector::from_raw(p, upsilon, convention))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_three() {
        let g = Graph::build(3, [(0, 1), (1, 2)]).unwrap();
        let cv = brute_force_betweenness(&g, PairConvention::Unordered).unwrap();
        assert_eq!(cv.upsilon_raw, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn cycle_four() {
        let g = Graph::build(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let counts = all_pairs_shortest_path_counts(&g).unwrap();
        assert_eq!(counts.sigma[0][2], 2);
        assert_eq!(counts.through[0][2][1], 1);
        let cv = brute_force_betweenness(&g, PairConvention::Unordered).unwrap();
        assert_eq!(cv.upsilon_raw, vec![0.5; 4]);
    }

    #[test]
    fn complete_six_is_zero() {
        let edges: Vec<(usize, usize)> = (0..6)
            .flat_map(|u| ((u + 1)..6).map(move |v| (u, v)))
            .collect();
        let g = Graph::build(6, edges).unwrap();
        let cv = brute_force_betweenness(&g, PairConvention::Ordered).unwrap();
        assert!(cv.upsilon_raw.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn counts_invariants() {
        let g = Graph::build(
            6,
            [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 1.0), (3, 4, 1.0), (4, 0, 3.0), (1, 4, 1.0), (2, 5, 1.0)],
        )
        .unwrap();
        let c = all_pairs_shortest_path_counts(&g).unwrap();
        for s in 0..6 {
            assert_eq!(c.sigma[s][s], 1);
            for t in 0..6 {
                assert_eq!(c.sigma[s][t], c.sigma[t][s]);
                for k in 0..6 {
                    assert!(c.dist[s][t] <= c.dist[s][k] + c.dist[k][t]);
                }
            }
        }
    }

    #[test]
    fn rejects_large_graphs() {
        let g = Graph::build(13, Vec::<(usize, usize)>::new()).unwrap();
        assert_eq!(
            brute_force_betweenness(&g, PairConvention::Unordered).unwrap_err(),
            CentralityError::TooLargeForOracle {
                node_count: 13,
                max: 12
            }
        );
    }
}
