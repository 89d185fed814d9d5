//! Edge-list ingestion, report serialisation, and flat key-value config files.
//!
//! Edge lists are read line by line. Duplicate undirected edges and self-loops
//! are common in published datasets, so the loader collapses or drops them and
//! reports how many it saw instead of failing.
//!
//! Report documents are written either as JSON lines (one header record, then
//! one record per network, keys sorted) or as CSV with six-decimal floats.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::centrality::PairConvention;
use crate::entropy::{Conventions, EntropyReport, UpsilonSource};
use crate::generators::{growth_conventions, GrowthConfig};
use crate::graph::{Graph, GraphError};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: node id {id} is invalid for one-based indexing")]
    InconsistentIndexing { line: usize, id: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("write failed: {0}")]
    WriteFailure(#[source] io::Error),
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
}

impl IoError {
    fn io(path: &Path, source: io::Error) -> Self {
        IoError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Delimiter {
    #[default]
    Whitespace,
    Comma,
}

impl FromStr for Delimiter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "whitespace" | "space" | "tab" => Ok(Delimiter::Whitespace),
            "comma" | "," => Ok(Delimiter::Comma),
            other => Err(format!("unknown delimiter `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum IndexBase {
    #[default]
    Zero,
    One,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeListFormat {
    pub delimiter: Delimiter,
    pub has_weights: bool,
    pub index_base: IndexBase,
    pub comment_prefix: char,
}

impl Default for EdgeListFormat {
    fn default() -> Self {
        EdgeListFormat {
            delimiter: Delimiter::Whitespace,
            has_weights: false,
            index_base: IndexBase::Zero,
            comment_prefix: '#',
        }
    }
}

/// A graph read from an edge list plus what the loader had to clean up.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// Repeated undirected edges collapsed into the first occurrence.
    pub duplicate_edges: usize,
    pub self_loops: usize,
    /// SHA-256 of the raw input bytes, lowercase hex.
    pub digest: String,
}

pub fn load_edge_list(path: impl AsRef<Path>, fmt: &EdgeListFormat) -> Result<LoadedGraph, IoError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| IoError::io(path, e))?;
    read_edge_list(BufReader::new(file), fmt).map_err(|e| match e {
        IoError::Io { source, .. } => IoError::io(path, source),
        other => other,
    })
}

pub fn read_edge_list<R: BufRead>(mut reader: R, fmt: &EdgeListFormat) -> Result<LoadedGraph, IoError> {
    let mut hasher = Sha256::new();
    let mut buf = Vec::new();
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut seen = HashSet::new();
    let mut duplicate_edges = 0;
    let mut self_loops = 0;
    let mut max_id: Option<usize> = None;
    let mut line_no = 0;

    loop {
        buf.clear();
        let read = reader
            .read_until(b'\n', &mut buf)
            .map_err(|e| IoError::io(Path::new("<input>"), e))?;
        if read == 0 {
            break;
        }
        line_no += 1;
        hasher.update(&buf);
        let text = std::str::from_utf8(&buf).map_err(|_| IoError::Parse {
            line: line_no,
            message: "not valid UTF-8".into(),
        })?;
        let text = text.trim();
        if text.is_empty() || text.starts_with(fmt.comment_prefix) {
            continue;
        }
        let fields: Vec<&str> = match fmt.delimiter {
            Delimiter::Whitespace => text.split_whitespace().collect(),
            Delimiter::Comma => text.split(',').map(str::trim).collect(),
        };
        let needed = if fmt.has_weights { 3 } else { 2 };
        if fields.len() < needed {
            return Err(IoError::Parse {
                line: line_no,
                message: format!("expected at least {needed} fields, found {}", fields.len()),
            });
        }
        let mut ids = [0usize; 2];
        for (slot, field) in ids.iter_mut().zip(&fields[..2]) {
            let raw: usize = field.parse().map_err(|_| IoError::Parse {
                line: line_no,
                message: format!("`{field}` is not a node id"),
            })?;
            *slot = match fmt.index_base {
                IndexBase::Zero => raw,
                IndexBase::One => raw
                    .checked_sub(1)
                    .ok_or(IoError::InconsistentIndexing { line: line_no, id: raw })?,
            };
        }
        let weight = if fmt.has_weights {
            let w: f64 = fields[2].parse().map_err(|_| IoError::Parse {
                line: line_no,
                message: format!("`{}` is not a weight", fields[2]),
            })?;
            if !(w > 0.0 && w.is_finite()) {
                return Err(IoError::Parse {
                    line: line_no,
                    message: format!("weight {w} is not strictly positive"),
                });
            }
            w
        } else {
            1.0
        };

        let [u, v] = ids;
        max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
        if u == v {
            self_loops += 1;
            continue;
        }
        if !seen.insert((u.min(v), u.max(v))) {
            duplicate_edges += 1;
            continue;
        }
        edges.push((u, v, weight));
    }

    let node_count = max_id.map_or(0, |m| m + 1);
    let graph = Graph::build(node_count, edges)?;
    Ok(LoadedGraph {
        graph,
        duplicate_edges,
        self_loops,
        digest: hex(&hasher.finalize()),
    })
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Zero-based, whitespace-delimited edge list; weights are written only for
/// weighted graphs.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> io::Result<()> {
    for e in g.edges() {
        if g.is_weighted() {
            writeln!(out, "{} {} {}", e.u, e.v, e.w)?;
        } else {
            writeln!(out, "{} {}", e.u, e.v)?;
        }
    }
    out.flush()
}

/// Where a report entry's graph came from.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub input: Option<String>,
    pub nodes: usize,
    pub edges: usize,
    pub digest: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub name: String,
    pub report: EntropyReport,
    pub provenance: Provenance,
}

impl ReportEntry {
    pub fn new(name: impl Into<String>, report: EntropyReport) -> Self {
        let provenance = Provenance {
            input: None,
            nodes: report.graph.nodes,
            edges: report.graph.edges,
            digest: None,
        };
        ReportEntry {
            name: name.into(),
            report,
            provenance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub conventions: Conventions,
    pub entries: Vec<ReportEntry>,
}

impl ReportDocument {
    pub fn new(conventions: Conventions) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            conventions,
            entries: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    JsonLines,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json-lines" | "jsonl" | "json" => Ok(ReportFormat::JsonLines),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(format!("unknown report format `{other}`")),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::JsonLines => "json-lines",
            ReportFormat::Csv => "csv",
        })
    }
}

/// Renders `doc` into `out`. Output depends only on the document contents.
pub fn render_report<W: Write>(doc: &ReportDocument, format: ReportFormat, out: W) -> Result<(), IoError> {
    match format {
        ReportFormat::JsonLines => render_jsonl(doc, out),
        ReportFormat::Csv => render_csv(doc, out),
    }
    .map_err(IoError::WriteFailure)
}

pub fn write_report(doc: &ReportDocument, path: impl AsRef<Path>, format: ReportFormat) -> Result<(), IoError> {
    let path = path.as_ref();
    let file = File::create(path).map_err(IoError::WriteFailure)?;
    render_report(doc, format, BufWriter::new(file))
}

fn json_line<W: Write>(out: &mut W, kind: &str, value: Value) -> io::Result<()> {
    // serde_json's default map is a BTreeMap, so keys come out sorted.
    let mut map = match value {
        Value::Object(m) => m,
        _ => unreachable!("records serialise as objects"),
    };
    map.insert("kind".into(), Value::String(kind.into()));
    serde_json::to_writer(&mut *out, &Value::Object(map))?;
    out.write_all(b"\n")
}

#[derive(Serialize, Deserialize)]
struct HeaderRecord {
    schema_version: String,
    conventions: Conventions,
}

fn render_jsonl<W: Write>(doc: &ReportDocument, mut out: W) -> io::Result<()> {
    let header = HeaderRecord {
        schema_version: doc.schema_version.clone(),
        conventions: doc.conventions,
    };
    json_line(&mut out, "header", serde_json::to_value(header)?)?;
    for entry in &doc.entries {
        json_line(&mut out, "entry", serde_json::to_value(entry)?)?;
    }
    out.flush()
}

pub const CSV_HEADER: [&str; 6] = ["network", "nodes", "edges", "e_deg", "e_bet", "e_t"];

fn render_csv<W: Write>(doc: &ReportDocument, mut out: W) -> io::Result<()> {
    writeln!(out, "# schema_version={} {}", doc.schema_version, doc.conventions)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for entry in &doc.entries {
        let r = &entry.report;
        w.write_record([
            entry.name.clone(),
            r.graph.nodes.to_string(),
            r.graph.edges.to_string(),
            format!("{:.6}", r.e_deg),
            format!("{:.6}", r.e_bet),
            format!("{:.6}", r.e_t),
        ])?;
    }
    w.flush()
}

/// Parses a JSON-lines report back into a document.
pub fn read_report_jsonl<R: BufRead>(reader: R) -> Result<ReportDocument, IoError> {
    let mut doc: Option<ReportDocument> = None;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| IoError::io(Path::new("<report>"), e))?;
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |e: serde_json::Error| IoError::Parse {
            line: line_no,
            message: e.to_string(),
        };
        let mut value: Value = serde_json::from_str(&line).map_err(parse_err)?;
        let kind = value
            .as_object_mut()
            .and_then(|m| m.remove("kind"))
            .and_then(|k| k.as_str().map(str::to_owned));
        match (kind.as_deref(), doc.as_mut()) {
            (Some("header"), None) => {
                let h: HeaderRecord = serde_json::from_value(value).map_err(parse_err)?;
                doc = Some(ReportDocument {
                    schema_version: h.schema_version,
                    conventions: h.conventions,
                    entries: Vec::new(),
                });
            }
            (Some("entry"), Some(d)) => {
                d.entries.push(serde_json::from_value(value).map_err(parse_err)?);
            }
            _ => {
                return Err(IoError::Parse {
                    line: line_no,
                    message: "expected one header record followed by entry records".into(),
                })
            }
        }
    }
    doc.ok_or(IoError::Parse {
        line: 0,
        message: "missing header record".into(),
    })
}

/// Growth parameters plus the entropy conventions an experiment runs under.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub growth: GrowthConfig,
    pub conventions: Conventions,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            growth: GrowthConfig::default(),
            conventions: growth_conventions(),
        }
    }
}

/// Recognised config keys with one-line descriptions.
pub const CONFIG_KEYS: &[(&str, &str)] = &[
    ("growth.seed_nodes", "node count of the starting ring lattice"),
    ("growth.neighbor_k", "ring coupling width (neighbours per side)"),
    ("growth.iterations", "number of growth rounds K"),
    ("growth.random_link_prob", "per-node chance of one random link per round"),
    ("growth.central_fraction", "top-degree fraction forming the central set"),
    ("growth.attach_prob_scale", "per-node chance of attaching to a central node per round"),
    ("growth.rng_seed", "seed of the ChaCha8 stream"),
    ("entropy.convention", "pair convention: unordered | ordered"),
    ("entropy.upsilon_source", "betweenness fed to q_i: raw | normalized"),
];

/// Parses `key = value` lines; `#` starts a comment. Unknown keys are errors.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, IoError> {
    let mut cfg = ExperimentConfig::default();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| IoError::Config {
            line: line_no,
            message,
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, found `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        fn num<T: FromStr>(v: &str) -> Result<T, String> {
            v.parse().map_err(|_| format!("`{v}` is not a valid number"))
        }
        let g = &mut cfg.growth;
        let res: Result<(), String> = match key {
            "growth.seed_nodes" => num(value).map(|x| g.seed_nodes = x),
            "growth.neighbor_k" => num(value).map(|x| g.neighbor_k = x),
            "growth.iterations" => num(value).map(|x| g.iterations = x),
            "growth.random_link_prob" => num(value).map(|x| g.random_link_prob = x),
            "growth.central_fraction" => num(value).map(|x| g.central_fraction = x),
            "growth.attach_prob_scale" => num(value).map(|x| g.attach_prob_scale = x),
            "growth.rng_seed" => num(value).map(|x| g.rng_seed = x),
            "entropy.convention" => value
                .parse::<PairConvention>()
                .map(|c| cfg.conventions.pair_convention = c),
            "entropy.upsilon_source" => value
                .parse::<UpsilonSource>()
                .map(|s| cfg.conventions.upsilon_source = s),
            other => Err(format!("unknown key `{other}`")),
        };
        res.map_err(err)?;
    }
    cfg.growth
        .validate()
        .map_err(|e| IoError::Config { line: 0, message: e.to_string() })?;
    Ok(cfg)
}

pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentConfig, IoError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| IoError::io(path, e))?;
    parse_config(&text)
}

pub fn render_config(cfg: &ExperimentConfig) -> String {
    let g = &cfg.growth;
    let values: BTreeMap<&str, String> = [
        ("growth.seed_nodes", g.seed_nodes.to_string()),
        ("growth.neighbor_k", g.neighbor_k.to_string()),
        ("growth.iterations", g.iterations.to_string()),
        ("growth.random_link_prob", g.random_link_prob.to_string()),
        ("growth.central_fraction", g.central_fraction.to_string()),
        ("growth.attach_prob_scale", g.attach_prob_scale.to_string()),
        ("growth.rng_seed", g.rng_seed.to_string()),
        ("entropy.convention", cfg.conventions.pair_convention.to_string()),
        ("entropy.upsilon_source", cfg.conventions.upsilon_source.to_string()),
    ]
    .into_iter()
    .collect();
    values
        .into_iter()
        .map(|(k, v)| format!("{k} = {v}\n"))
        .collect()
}

/// One row of a dataset manifest: where to find a network and the counts it
/// is expected to have.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetEntry {
    pub name: String,
    pub file: String,
    pub expected_nodes: usize,
    pub expected_edges: usize,
    pub format: EdgeListFormat,
}

/// Parses a manifest: `name file nodes edges [options]`, whitespace
/// separated, where `options` is a comma list of `one-based`, `comma`,
/// `weighted`.
pub fn parse_manifest(text: &str) -> Result<Vec<DatasetEntry>, IoError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| IoError::Parse {
            line: line_no,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 4 {
            return Err(err("expected `name file nodes edges [options]`".into()));
        }
        let count = |s: &str| s.parse::<usize>().map_err(|_| err(format!("`{s}` is not a count")));
        let mut format = EdgeListFormat::default();
        if let Some(opts) = fields.get(4) {
            for opt in opts.split(',') {
                match opt {
                    "one-based" => format.index_base = IndexBase::One,
                    "comma" => format.delimiter = Delimiter::Comma,
                    "weighted" => format.has_weights = true,
                    other => return Err(err(format!("unknown option `{other}`"))),
                }
            }
        }
        out.push(DatasetEntry {
            name: fields[0].to_string(),
            file: fields[1].to_string(),
            expected_nodes: count(fields[2])?,
            expected_edges: count(fields[3])?,
            format,
        });
    }
    Ok(out)
}

/// Warning text when a loaded graph's counts drift from the manifest.
pub fn count_mismatch(entry: &DatasetEntry, g: &Graph) -> Option<String> {
    (g.node_count() != entry.expected_nodes || g.edge_count() != entry.expected_edges).then(|| {
        format!(
            "{}: expected {} nodes / {} edges, loaded {} / {}",
            entry.name,
            entry.expected_nodes,
            entry.expected_edges,
            g.node_count(),
            g.edge_count()
        )
    })
}
