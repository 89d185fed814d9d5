//! Entropy functionals over node distributions.
//!
//! All entropies are in nats with `k = 1` and use `0 · ln 0 = 0`.
//!
//! * [`shannon_entropy`], [`tsallis_entropy`] and [`q_logarithm`] act on plain
//!   distributions.
//! * [`degree_structure_entropy`] is the Shannon entropy of the degree share.
//! * [`betweenness_structure_entropy`] is the Shannon entropy of the betweenness
//!   share (uniform when total betweenness is zero).
//! * [`tsallis_structure_entropy`] raises each degree share to a per-node
//!   exponent `q_i = 1 + (υ_max − υ_i)`, renormalises, and takes the Shannon
//!   entropy of the result. Nodes off the betweenness maximum get `q_i > 1`,
//!   which shrinks their weight.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::centrality::{betweenness, CentralityError, CentralityVector, PairConvention};
use crate::graph::Graph;

/// Tolerance on `Σ w = 1` accepted by [`DiscreteDistribution::new`].
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EntropyError {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("q-logarithm requires a positive argument, got {0}")]
    NonPositiveArgument(f64),
    #[error("graph has no edges; structure entropy is undefined")]
    EmptyGraph,
    #[error(
        "Σ p_i^q_i is not a usable normaliser ({normalizer}); q range [{q_min}, {q_max}], \
         smallest positive p {p_min}"
    )]
    DegenerateWeights {
        normalizer: f64,
        q_min: f64,
        q_max: f64,
        p_min: f64,
    },
}

impl From<CentralityError> for EntropyError {
    fn from(e: CentralityError) -> Self {
        match e {
            CentralityError::EmptyGraph => EntropyError::EmptyGraph,
            other => EntropyError::InvalidDistribution(other.to_string()),
        }
    }
}

/// Non-negative weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteDistribution {
    weights: Vec<f64>,
}

impl DiscreteDistribution {
    pub fn new(weights: Vec<f64>) -> Result<Self, EntropyError> {
        if weights.is_empty() {
            return Err(EntropyError::InvalidDistribution("no items".into()));
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w >= 0.0))
        {
            return Err(EntropyError::InvalidDistribution(format!(
                "weight {i} is {w}"
            )));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(EntropyError::InvalidDistribution(format!(
                "weights sum to {total}"
            )));
        }
        Ok(DiscreteDistribution { weights })
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform distribution needs at least one item");
        DiscreteDistribution {
            weights: vec![1.0 / n as f64; n],
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// `−Σ w ln w`.
pub fn shannon_entropy(d: &DiscreteDistribution) -> f64 {
    let s: f64 = d
        .weights
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| w * w.ln())
        .sum();
    // avoid returning -0.0 for point masses
    if s == 0.0 {
        0.0
    } else {
        -s
    }
}

/// `ln_q x = (x^{1−q} − 1)/(1 − q)`, and `ln x` at `q = 1`.
pub fn q_logarithm(x: f64, q: f64) -> Result<f64, EntropyError> {
    if x.is_nan() || x <= 0.0 {
        return Err(EntropyError::NonPositiveArgument(x));
    }
    if q == 1.0 {
        return Ok(x.ln());
    }
    let a = 1.0 - q;
    Ok((x.powf(a) - 1.0) / a)
}

/// Closed form `S_q = (1 − Σ p^q)/(q − 1)`; `q = 1` gives the Shannon entropy.
pub fn tsallis_entropy(d: &DiscreteDistribution, q: f64) -> f64 {
    if q == 1.0 {
        return shannon_entropy(d);
    }
    let sum: f64 = d
        .weights
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| w.powf(q))
        .sum();
    (1.0 - sum) / (q - 1.0)
}

/// `S_q = −Σ p^q ln_q p`, summed term by term through [`q_logarithm`].
/// Agrees with [`tsallis_entropy`] up to rounding.
pub fn tsallis_entropy_qlog(d: &DiscreteDistribution, q: f64) -> f64 {
    let s: f64 = d
        .weights
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| w.powf(q) * q_logarithm(w, q).expect("positive weight"))
        .sum();
    -s
}

/// Shannon entropy of the degree share.
pub fn degree_structure_entropy(g: &Graph) -> Result<f64, EntropyError> {
    let p = crate::centrality::degree_distribution(g)?;
    Ok(shannon_entropy(&DiscreteDistribution::new(p)?))
}

/// What to do when Σ υ = 0 and the betweenness share is undefined.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZeroBetweennessPolicy {
    /// Treat every node as carrying an equal share.
    #[default]
    Uniform,
}

impl fmt::Display for ZeroBetweennessPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("uniform")
    }
}

/// Betweenness share as a distribution; uniform when the graph carries no
/// betweenness at all.
pub fn betweenness_distribution(cv: &CentralityVector) -> Result<DiscreteDistribution, EntropyError> {
    if cv.is_empty() {
        return Err(EntropyError::InvalidDistribution("graph has no nodes".into()));
    }
    if cv.degenerate {
        Ok(DiscreteDistribution::uniform(cv.len()))
    } else {
        DiscreteDistribution::new(cv.upsilon_norm.clone())
    }
}

pub fn betweenness_structure_entropy(
    g: &Graph,
    convention: PairConvention,
) -> Result<f64, EntropyError> {
    let cv = betweenness(g, convention);
    Ok(shannon_entropy(&betweenness_distribution(&cv)?))
}

/// Which betweenness values feed `q_i`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UpsilonSource {
    /// Raw path-fraction sums.
    #[default]
    Raw,
    /// Betweenness share `υ / Σ υ`.
    Normalized,
}

impl UpsilonSource {
    pub fn as_str(self) -> &'static str {
        match self {
            UpsilonSource::Raw => "raw",
            UpsilonSource::Normalized => "normalized",
        }
    }
}

impl fmt::Display for UpsilonSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for UpsilonSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "raw" => Ok(UpsilonSource::Raw),
            "normalized" | "normalised" => Ok(UpsilonSource::Normalized),
            other => Err(format!(
                "unknown upsilon source `{other}` (expected `raw` or `normalized`)"
            )),
        }
    }
}

/// Per-node nonextensive exponents and the conventions that produced them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonextensiveParams {
    pub q: Vec<f64>,
    pub upsilon_source: UpsilonSource,
    pub pair_convention: PairConvention,
}

/// `q_i = 1 + (υ_max − υ_i)`. Every node attaining the maximum gets exactly 1.
pub fn nonextensive_parameters(cv: &CentralityVector, source: UpsilonSource) -> NonextensiveParams {
    let upsilon = match source {
        UpsilonSource::Raw => &cv.upsilon_raw,
        UpsilonSource::Normalized => &cv.upsilon_norm,
    };
    let max = upsilon.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let q = upsilon
        .iter()
        .map(|&u| if u == max { 1.0 } else { 1.0 + (max - u) })
        .collect();
    NonextensiveParams {
        q,
        upsilon_source: source,
        pair_convention: cv.pair_convention,
    }
}

/// Result of [`tsallis_structure_entropy`], kept together for auditing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TsallisStructure {
    pub entropy: f64,
    pub params: NonextensiveParams,
    pub h: DiscreteDistribution,
}

/// `h_i = p_i^{q_i} / Σ_j p_j^{q_j}`, evaluated in log space and shifted by
/// the largest exponent so the normaliser cannot underflow.
pub fn basic_factors(p: &[f64], q: &[f64]) -> Result<DiscreteDistribution, EntropyError> {
    debug_assert_eq!(p.len(), q.len());
    if q.iter().all(|&x| x == 1.0) {
        return DiscreteDistribution::new(p.to_vec());
    }
    let logs: Vec<Option<f64>> = p
        .iter()
        .zip(q)
        .map(|(&pi, &qi)| (pi > 0.0).then(|| qi * pi.ln()))
        .collect();
    let shift = logs
        .iter()
        .flatten()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let scaled: Vec<f64> = logs
        .iter()
        .map(|l| l.map_or(0.0, |l| (l - shift).exp()))
        .collect();
    let normalizer: f64 = scaled.iter().sum();
    if !(normalizer.is_finite() && normalizer > 0.0) {
        let q_min = q.iter().copied().fold(f64::INFINITY, f64::min);
        let q_max = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let p_min = p
            .iter()
            .copied()
            .filter(|&x| x > 0.0)
            .fold(f64::INFINITY, f64::min);
        return Err(EntropyError::DegenerateWeights {
            normalizer,
            q_min,
            q_max,
            p_min,
        });
    }
    DiscreteDistribution::new(scaled.into_iter().map(|x| x / normalizer).collect())
}

/// Tsallis structure entropy from an already computed centrality vector.
pub fn tsallis_structure_entropy_from(
    cv: &CentralityVector,
    source: UpsilonSource,
) -> Result<TsallisStructure, EntropyError> {
    if cv.p.iter().all(|&x| x == 0.0) {
        return Err(EntropyError::EmptyGraph);
    }
    let params = nonextensive_parameters(cv, source);
    let h = basic_factors(&cv.p, &params.q)?;
    Ok(TsallisStructure {
        entropy: shannon_entropy(&h),
        params,
        h,
    })
}

pub fn tsallis_structure_entropy(
    g: &Graph,
    convention: PairConvention,
    source: UpsilonSource,
) -> Result<TsallisStructure, EntropyError> {
    if g.edge_count() == 0 {
        return Err(EntropyError::EmptyGraph);
    }
    tsallis_structure_entropy_from(&betweenness(g, convention), source)
}

/// Conventions that affect entropy values; echoed into every report.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Conventions {
    pub pair_convention: PairConvention,
    pub upsilon_source: UpsilonSource,
    pub zero_betweenness: ZeroBetweennessPolicy,
}

impl Conventions {
    pub fn new(pair_convention: PairConvention, upsilon_source: UpsilonSource) -> Self {
        Conventions {
            pair_convention,
            upsilon_source,
            zero_betweenness: ZeroBetweennessPolicy::Uniform,
        }
    }
}

impl fmt::Display for Conventions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pair_convention={} upsilon_source={} zero_betweenness={} log_base=natural",
            self.pair_convention, self.upsilon_source, self.zero_betweenness
        )
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    Natural,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphMeta {
    pub nodes: usize,
    pub edges: usize,
}

/// Degree, betweenness and Tsallis structure entropies of one graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub e_deg: f64,
    pub e_bet: f64,
    pub e_t: f64,
    pub log_base: LogBase,
    pub conventions: Conventions,
    pub graph: GraphMeta,
}

/// All three entropies from a single betweenness pass.
pub fn full_report(g: &Graph, conventions: &Conventions) -> Result<EntropyReport, EntropyError> {
    if g.edge_count() == 0 {
        return Err(EntropyError::EmptyGraph);
    }
    let cv = betweenness(g, conventions.pair_convention);
    let e_deg = shannon_entropy(&DiscreteDistribution::new(cv.p.clone())?);
    let e_bet = shannon_entropy(&betweenness_distribution(&cv)?);
    let e_t = tsallis_structure_entropy_from(&cv, conventions.upsilon_source)?.entropy;
    Ok(EntropyReport {
        e_deg,
        e_bet,
        e_t,
        log_base: LogBase::Natural,
        conventions: *conventions,
        graph: GraphMeta {
            nodes: g.node_count(),
            edges: g.edge_count(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(w: &[f64]) -> DiscreteDistribution {
        DiscreteDistribution::new(w.to_vec()).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
            .collect();
        Graph::build(n, edges).unwrap()
    }

    fn path3() -> Graph {
        Graph::build(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn distribution_validation() {
        assert!(DiscreteDistribution::new(vec![]).is_err());
        assert!(DiscreteDistribution::new(vec![0.5, 0.6]).is_err());
        assert!(DiscreteDistribution::new(vec![1.5, -0.5]).is_err());
        assert!(DiscreteDistribution::new(vec![f64::NAN, 1.0]).is_err());
        assert!(DiscreteDistribution::new(vec![0.5, 0.5 + 1e-10]).is_ok());
    }

    #[test]
    fn shannon_examples() {
        assert!((shannon_entropy(&DiscreteDistribution::uniform(6)) - 1.791759).abs() < 1e-6);
        assert_eq!(shannon_entropy(&dist(&[1.0, 0.0, 0.0])), 0.0);
        assert!((shannon_entropy(&dist(&[0.25, 0.5, 0.25])) - 1.039721).abs() < 1e-6);
    }

    #[test]
    fn q_logarithm_examples() {
        assert!((q_logarithm(2.0, 1.0).unwrap() - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(q_logarithm(0.5, 2.0).unwrap(), -1.0);
        for q in [-1.0, 0.0, 0.5, 1.0, 2.0, 7.5] {
            assert_eq!(q_logarithm(1.0, q).unwrap(), 0.0);
        }
        assert_eq!(
            q_logarithm(0.0, 2.0).unwrap_err(),
            EntropyError::NonPositiveArgument(0.0)
        );
        assert!(q_logarithm(-1.0, 1.0).is_err());
    }

    #[test]
    fn tsallis_examples() {
        assert!((tsallis_entropy(&DiscreteDistribution::uniform(2), 2.0) - 0.5).abs() < 1e-15);
        assert_eq!(tsallis_entropy(&dist(&[0.0, 1.0]), 3.0), 0.0);
        let d = dist(&[0.2, 0.3, 0.5]);
        assert_eq!(tsallis_entropy(&d, 1.0), shannon_entropy(&d));
        assert!((tsallis_entropy(&d, 1.0 + 1e-6) - shannon_entropy(&d)).abs() < 1e-4);
        assert!((tsallis_entropy_qlog(&d, 2.5) - tsallis_entropy(&d, 2.5)).abs() < 1e-12);
    }

    #[test]
    fn degree_entropy_examples() {
        assert!((degree_structure_entropy(&complete(6)).unwrap() - 1.7918).abs() < 1e-4);
        assert!((degree_structure_entropy(&path3()).unwrap() - 1.039721).abs() < 1e-6);
        let edgeless = Graph::build(2, Vec::<(usize, usize)>::new()).unwrap();
        assert_eq!(
            degree_structure_entropy(&edgeless).unwrap_err(),
            EntropyError::EmptyGraph
        );
    }

    #[test]
    fn betweenness_entropy_examples() {
        let u = PairConvention::Unordered;
        assert!((betweenness_structure_entropy(&complete(6), u).unwrap() - 6f64.ln()).abs() < 1e-15);
        assert_eq!(betweenness_structure_entropy(&path3(), u).unwrap(), 0.0);
        let star = Graph::build(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(betweenness_structure_entropy(&star, u).unwrap(), 0.0);
    }

    #[test]
    fn nonextensive_parameter_examples() {
        let cv = betweenness(&complete(6), PairConvention::Unordered);
        assert_eq!(nonextensive_parameters(&cv, UpsilonSource::Raw).q, vec![1.0; 6]);
        let cv = betweenness(&path3(), PairConvention::Unordered);
        assert_eq!(nonextensive_parameters(&cv, UpsilonSource::Raw).q, vec![2.0, 1.0, 2.0]);
        assert_eq!(
            nonextensive_parameters(&cv, UpsilonSource::Normalized).q,
            vec![2.0, 1.0, 2.0]
        );
        // ordered doubles raw betweenness and so the exponent gap
        let cv = betweenness(&path3(), PairConvention::Ordered);
        assert_eq!(nonextensive_parameters(&cv, UpsilonSource::Raw).q, vec![3.0, 1.0, 3.0]);
    }

    #[test]
    fn tsallis_structure_examples() {
        let u = PairConvention::Unordered;
        let k6 = tsallis_structure_entropy(&complete(6), u, UpsilonSource::Raw).unwrap();
        assert!((k6.entropy - 1.7918).abs() < 1e-4);

        let p3 = tsallis_structure_entropy(&path3(), u, UpsilonSource::Raw).unwrap();
        let h = p3.h.weights();
        assert!((h[0] - 0.1).abs() < 1e-15 && (h[1] - 0.8).abs() < 1e-15 && (h[2] - 0.1).abs() < 1e-15);
        assert!((p3.entropy - 0.639032).abs() < 1e-6);
    }

    #[test]
    fn equal_betweenness_collapses_exactly() {
        let c6 = Graph::build(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        let t = tsallis_structure_entropy(&c6, PairConvention::Unordered, UpsilonSource::Raw).unwrap();
        assert_eq!(t.entropy, degree_structure_entropy(&c6).unwrap());
    }

    #[test]
    fn huge_exponent_gap_does_not_underflow() {
        // star with many leaves: leaves get q ≈ C(n-1, 2)
        let n = 400;
        let g = Graph::build(n, (1..n).map(|i| (0, i))).unwrap();
        let t = tsallis_structure_entropy(&g, PairConvention::Ordered, UpsilonSource::Raw).unwrap();
        assert_eq!(t.h.weights()[0], 1.0);
        assert_eq!(t.entropy, 0.0);
    }

    #[test]
    fn degenerate_weights_are_reported() {
        let err = basic_factors(&[0.5, 0.5], &[f64::NAN, 1.0]).unwrap_err();
        assert!(matches!(err, EntropyError::DegenerateWeights { .. }));
    }

    #[test]
    fn isolated_nodes_get_zero_weight() {
        let g = Graph::build(4, [(0, 1), (1, 2)]).unwrap();
        let t = tsallis_structure_entropy(&g, PairConvention::Unordered, UpsilonSource::Raw).unwrap();
        assert_eq!(t.h.weights()[3], 0.0);
        assert_eq!(t.params.q[3], 2.0);
    }

    #[test]
    fn full_report_examples() {
        let c = Conventions::default();
        let r = full_report(&complete(6), &c).unwrap();
        for e in [r.e_deg, r.e_bet, r.e_t] {
            assert!((e - 1.7918).abs() < 1e-4);
        }
        let r = full_report(&path3(), &c).unwrap();
        assert!((r.e_deg - 1.039721).abs() < 1e-6);
        assert_eq!(r.e_bet, 0.0);
        assert!((r.e_t - 0.639032).abs() < 1e-6);
        assert_eq!(r.graph, GraphMeta { nodes: 3, edges: 2 });

        let k2 = Graph::build(2, [(0, 1)]).unwrap();
        let r = full_report(&k2, &c).unwrap();
        let ln2 = 2f64.ln();
        assert!((r.e_deg - ln2).abs() < 1e-15);
        assert!((r.e_bet - ln2).abs() < 1e-15);
        assert!((r.e_t - ln2).abs() < 1e-15);
    }
}
