//! Structure entropies of complex networks.
//!
//! Computes the degree structure entropy, the betweenness structure entropy
//! and a Tsallis-nonextensive structure entropy that couples the two: each
//! node's degree share is raised to an exponent derived from its betweenness
//! gap to the most central node.
//!
//! ```
//! use netentropy::{entropy::{full_report, Conventions}, generators::complete_graph};
//!
//! let report = full_report(&complete_graph(6), &Conventions::default()).unwrap();
//! assert!((report.e_t - 6f64.ln()).abs() < 1e-12);
//! ```

pub mod centrality;
pub mod entropy;
pub mod generators;
pub mod graph;
pub mod io;
pub mod oracle;

pub use centrality::{betweenness, CentralityVector, PairConvention};
pub use entropy::{full_report, Conventions, EntropyReport, UpsilonSource};
pub use graph::{Graph, GraphError, NodeId};
